#pragma once

// Coefficient domains: arbitrary-precision integers, rationals and prime
// fields F_p (p < 2^31). All arithmetic is exact.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace pfk {

using Integer = mpz_class;
using Rational = mpq_class;

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  if (p < 4) return true;
  if (p % 2 == 0) return false;
  for (std::uint64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

/// The ring Z. Polynomials of every built complex live over this ring.
struct IntegerRing {
  using value_type = Integer;
  static value_type zero() { return 0; }
  static value_type one() { return 1; }
  static value_type from_int(long v) { return v; }
  static value_type from_integer(const Integer& v) { return v; }
  static value_type add(const value_type& a, const value_type& b) { return a + b; }
  static value_type sub(const value_type& a, const value_type& b) { return a - b; }
  static value_type mul(const value_type& a, const value_type& b) { return a * b; }
  static value_type neg(const value_type& a) { return -a; }
  static bool is_zero(const value_type& a) { return sgn(a) == 0; }
  static std::string to_string(const value_type& a) { return a.get_str(); }
  bool operator==(const IntegerRing&) const = default;
};

/// The field Q.
struct RationalField {
  using value_type = Rational;
  static value_type zero() { return 0; }
  static value_type one() { return 1; }
  static value_type from_int(long v) { return v; }
  static value_type from_integer(const Integer& v) { return Rational(v); }
  static value_type add(const value_type& a, const value_type& b) { return a + b; }
  static value_type sub(const value_type& a, const value_type& b) { return a - b; }
  static value_type mul(const value_type& a, const value_type& b) { return a * b; }
  static value_type neg(const value_type& a) { return -a; }
  static value_type inv(const value_type& a) {
    if (sgn(a) == 0) throw std::domain_error("division by zero in Q");
    return 1 / a;
  }
  static bool is_zero(const value_type& a) { return sgn(a) == 0; }
  static std::string to_string(const value_type& a) { return a.get_str(); }
  bool operator==(const RationalField&) const = default;
};

/// The prime field F_p with elements stored as residues in [0, p).
class PrimeField {
 public:
  using value_type = std::uint32_t;

  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (p >= (1u << 31) || !is_prime(p))
      throw std::invalid_argument("modulus " + std::to_string(p) +
                                  " is not a prime below 2^31");
  }

  std::uint32_t characteristic() const { return p_; }
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long v) const {
    long r = v % static_cast<long>(p_);
    return static_cast<value_type>(r < 0 ? r + p_ : r);
  }
  value_type from_integer(const Integer& v) const {
    if (v.fits_slong_p()) return from_int(v.get_si());
    Integer r = v % p_;
    if (sgn(r) < 0) r += p_;
    return static_cast<value_type>(r.get_ui());
  }
  value_type add(value_type a, value_type b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>(static_cast<std::uint64_t>(a) * b % p_);
  }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type inv(value_type a) const {
    if (a == 0) throw std::domain_error("division by zero in F_p");
    // extended Euclid on signed 64-bit values
    std::int64_t t = 0, new_t = 1, r = p_, new_r = a;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      std::int64_t tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    return static_cast<value_type>(t < 0 ? t + p_ : t);
  }
  static bool is_zero(value_type a) { return a == 0; }
  static std::string to_string(value_type a) { return std::to_string(a); }
  bool operator==(const PrimeField&) const = default;

 private:
  std::uint32_t p_;
};

/// Runtime description of a coefficient domain, as selected on the command
/// line ("z", "q" or "zp:P").
class CoeffDomain {
 public:
  enum class Kind { integers, rationals, prime_field };

  static CoeffDomain integers() { return CoeffDomain(Kind::integers, 0); }
  static CoeffDomain rationals() { return CoeffDomain(Kind::rationals, 0); }
  static CoeffDomain prime_field(std::uint32_t p) {
    PrimeField check(p);  // throws on a non-prime modulus
    (void)check;
    return CoeffDomain(Kind::prime_field, p);
  }

  static CoeffDomain parse(std::string_view spec) {
    if (spec == "z" || spec == "Z") return integers();
    if (spec == "q" || spec == "Q") return rationals();
    if (spec.starts_with("zp:")) {
      std::string digits(spec.substr(3));
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad field spec '" + std::string(spec) + "'");
      unsigned long long p = std::stoull(digits);
      if (p >= (1ull << 31)) throw std::invalid_argument("prime must be below 2^31");
      return prime_field(static_cast<std::uint32_t>(p));
    }
    throw std::invalid_argument("bad field spec '" + std::string(spec) + "' (expected q, z or zp:P)");
  }

  Kind kind() const { return kind_; }
  std::uint32_t prime() const { return p_; }
  bool is_field() const { return kind_ != Kind::integers; }

  std::string to_string() const {
    switch (kind_) {
      case Kind::integers: return "z";
      case Kind::rationals: return "q";
      case Kind::prime_field: return "zp:" + std::to_string(p_);
    }
    return "?";
  }

  bool operator==(const CoeffDomain&) const = default;

 private:
  CoeffDomain(Kind k, std::uint32_t p) : kind_(k), p_(p) {}
  Kind kind_;
  std::uint32_t p_;
};

/// Calls fn(field) with the concrete field type of a field domain.
template <class Fn>
decltype(auto) visit_field(const CoeffDomain& d, Fn&& fn) {
  switch (d.kind()) {
    case CoeffDomain::Kind::rationals: return fn(RationalField{});
    case CoeffDomain::Kind::prime_field: return fn(PrimeField(d.prime()));
    case CoeffDomain::Kind::integers: break;
  }
  throw std::invalid_argument("rank requires a field; use SNF");
}

}  // namespace pfk
