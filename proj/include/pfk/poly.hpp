#pragma once

// Sparse multivariate polynomials over a pluggable coefficient ring, with
// single or double grading and an optional torus (fine) grading used to split
// degree slices into independent blocks.

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfk/coeff.hpp"

namespace pfk {

/// Internal degree of arity 1 (standard grading) or 2 (bigrading).
class Multidegree {
 public:
  Multidegree() = default;
  explicit Multidegree(int d) : arity_(1), c_{d, 0} {}
  Multidegree(int a, int b) : arity_(2), c_{a, b} {}

  static Multidegree zero(int arity) { return arity == 2 ? Multidegree(0, 0) : Multidegree(0); }
  static Multidegree from_vector(const std::vector<int>& v) {
    if (v.size() == 1) return Multidegree(v[0]);
    if (v.size() == 2) return Multidegree(v[0], v[1]);
    throw std::invalid_argument("multidegree arity must be 1 or 2");
  }

  int arity() const { return arity_; }
  int operator[](std::size_t k) const { return c_[k]; }
  int total() const { return c_[0] + c_[1]; }
  std::vector<int> to_vector() const {
    return arity_ == 2 ? std::vector<int>{c_[0], c_[1]} : std::vector<int>{c_[0]};
  }

  bool nonnegative() const { return c_[0] >= 0 && c_[1] >= 0; }
  /// componentwise <=
  bool le(const Multidegree& o) const { return c_[0] <= o.c_[0] && c_[1] <= o.c_[1]; }

  Multidegree operator+(const Multidegree& o) const { return combine(o, 1); }
  Multidegree operator-(const Multidegree& o) const { return combine(o, -1); }
  Multidegree operator-() const { return arity_ == 2 ? Multidegree(-c_[0], -c_[1]) : Multidegree(-c_[0]); }

  bool operator==(const Multidegree&) const = default;
  auto operator<=>(const Multidegree&) const = default;

  std::string to_string() const {
    if (arity_ == 1) return std::to_string(c_[0]);
    return "(" + std::to_string(c_[0]) + "," + std::to_string(c_[1]) + ")";
  }

 private:
  Multidegree combine(const Multidegree& o, int s) const {
    if (arity_ != o.arity_) throw std::invalid_argument("multidegree arity mismatch");
    Multidegree r = *this;
    r.c_[0] += s * o.c_[0];
    r.c_[1] += s * o.c_[1];
    return r;
  }
  int arity_ = 1;
  std::array<int, 2> c_{0, 0};
};

/// Torus weight of a monomial or generator (empty when the ring has no fine
/// grading).
using Weight = std::vector<int>;

inline Weight add_weights(const Weight& a, const Weight& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Weight r(a);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] += b[k];
  return r;
}

struct WeightHash {
  std::size_t operator()(const Weight& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int x : w) h = (h ^ static_cast<std::size_t>(x + 0x9e37)) * 1099511628211ull;
    return h;
  }
};

inline constexpr std::size_t kMaxVars = 64;

/// Dense exponent vector with fixed capacity; unused slots are zero, so the
/// defaulted comparison is lexicographic on the ring's variables.
class Exponent {
 public:
  Exponent() { e_.fill(0); }

  std::uint8_t operator[](std::size_t k) const { return e_[k]; }
  void set(std::size_t k, unsigned v) {
    if (v > 255) throw std::overflow_error("exponent exceeds 255");
    e_[k] = static_cast<std::uint8_t>(v);
  }

  Exponent operator+(const Exponent& o) const {
    Exponent r;
    for (std::size_t k = 0; k < kMaxVars; ++k) {
      unsigned s = unsigned(e_[k]) + o.e_[k];
      if (s > 255) throw std::overflow_error("exponent exceeds 255");
      r.e_[k] = static_cast<std::uint8_t>(s);
    }
    return r;
  }

  bool divides(const Exponent& o) const {
    for (std::size_t k = 0; k < kMaxVars; ++k)
      if (e_[k] > o.e_[k]) return false;
    return true;
  }

  bool operator==(const Exponent& o) const { return std::memcmp(e_.data(), o.e_.data(), kMaxVars) == 0; }
  std::strong_ordering operator<=>(const Exponent& o) const {
    int c = std::memcmp(e_.data(), o.e_.data(), kMaxVars);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::size_t k = 0; k < kMaxVars; k += 8) {
      std::uint64_t w;
      std::memcpy(&w, e_.data() + k, 8);
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

 private:
  std::array<std::uint8_t, kMaxVars> e_;
};

struct ExponentHash {
  std::size_t operator()(const Exponent& e) const noexcept { return e.hash(); }
};

/// Polynomial ring over named variables with (multi)degrees and optional
/// torus weights. Coefficients are a template parameter of Polynomial.
class PolyRing {
 public:
  PolyRing(std::vector<std::string> names, std::vector<Multidegree> degrees, std::vector<Weight> weights = {})
      : names_(std::move(names)), degrees_(std::move(degrees)), weights_(std::move(weights)) {
    if (names_.size() != degrees_.size()) throw std::invalid_argument("one degree per variable required");
    if (names_.size() > kMaxVars) throw std::invalid_argument("too many variables");
    for (std::size_t i = 0; i < names_.size(); ++i)
      for (std::size_t j = i + 1; j < names_.size(); ++j)
        if (names_[i] == names_[j]) throw std::invalid_argument("duplicate variable name " + names_[i]);
    arity_ = degrees_.empty() ? 1 : degrees_[0].arity();
    for (const auto& d : degrees_) {
      if (d.arity() != arity_) throw std::invalid_argument("all variable degrees must share one arity");
      if (!d.nonnegative() || d == Multidegree::zero(arity_))
        throw std::invalid_argument("variable degrees must be nonnegative and nonzero");
    }
    if (!weights_.empty()) {
      if (weights_.size() != names_.size()) throw std::invalid_argument("one weight per variable required");
      for (const auto& w : weights_)
        if (w.size() != weights_[0].size()) throw std::invalid_argument("weights must share one length");
    }
  }

  /// Standard graded ring, every variable of degree 1.
  static std::shared_ptr<const PolyRing> standard(std::vector<std::string> names) {
    std::vector<Multidegree> d(names.size(), Multidegree(1));
    return std::make_shared<const PolyRing>(std::move(names), std::move(d));
  }

  std::size_t nvars() const { return names_.size(); }
  int arity() const { return arity_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t k) const { return names_[k]; }
  const std::vector<Multidegree>& degrees() const { return degrees_; }
  const Multidegree& degree(std::size_t k) const { return degrees_[k]; }
  bool has_weights() const { return !weights_.empty(); }
  std::size_t weight_dim() const { return weights_.empty() ? 0 : weights_[0].size(); }
  const std::vector<Weight>& weights() const { return weights_; }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t k = 0; k < names_.size(); ++k)
      if (names_[k] == name) return k;
    throw std::out_of_range("no variable named " + name);
  }

  Multidegree degree_of(const Exponent& e) const {
    Multidegree d = Multidegree::zero(arity_);
    for (std::size_t k = 0; k < names_.size(); ++k)
      for (unsigned t = 0; t < e[k]; ++t) d = d + degrees_[k];
    return d;
  }

  Weight weight_of(const Exponent& e) const {
    if (weights_.empty()) return {};
    Weight w(weight_dim(), 0);
    for (std::size_t k = 0; k < names_.size(); ++k)
      if (e[k])
        for (std::size_t t = 0; t < w.size(); ++t) w[t] += int(e[k]) * weights_[k][t];
    return w;
  }

  Exponent variable(std::size_t k) const {
    Exponent e;
    e.set(k, 1);
    return e;
  }

  bool operator==(const PolyRing& o) const {
    return names_ == o.names_ && degrees_ == o.degrees_ && weights_ == o.weights_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Multidegree> degrees_;
  std::vector<Weight> weights_;
  int arity_ = 1;
};

using RingPtr = std::shared_ptr<const PolyRing>;

/// Every exponent vector of multidegree exactly d, in increasing lex order.
inline std::vector<Exponent> monomial_basis(const PolyRing& r, const Multidegree& d) {
  std::vector<Exponent> out;
  if (d.arity() != r.arity()) throw std::invalid_argument("multidegree arity mismatch");
  if (!d.nonnegative()) return out;
  const std::size_t n = r.nvars();
  // covers[k][c]: some variable at index >= k has positive component c
  std::vector<std::array<bool, 2>> covers(n + 1, {false, false});
  for (std::size_t k = n; k-- > 0;)
    for (int c = 0; c < 2; ++c) covers[k][c] = covers[k + 1][c] || r.degree(k)[c] > 0;
  Exponent cur;
  std::function<void(std::size_t, Multidegree)> rec = [&](std::size_t k, Multidegree rem) {
    if (rem == Multidegree::zero(r.arity())) {
      out.push_back(cur);
      return;
    }
    if (k == n) return;
    for (int c = 0; c < 2; ++c)
      if (rem[c] > 0 && !covers[k][c]) return;
    const Multidegree& dk = r.degree(k);
    // exponent 0 gives lex-smaller vectors, so it is enumerated first
    unsigned e = 0;
    Multidegree left = rem;
    for (;;) {
      cur.set(k, e);
      rec(k + 1, left);
      left = left - dk;
      if (!left.nonnegative()) break;
      ++e;
    }
    cur.set(k, 0);
  };
  rec(0, d);
  return out;
}

/// Closed-form count of monomials of degree d for a ring whose variables
/// have degrees that are unit vectors (standard or bigraded blocks).
inline Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

inline Integer monomial_count(const PolyRing& r, const Multidegree& d) {
  if (!d.nonnegative()) return 0;
  long blocks[2] = {0, 0};
  for (const auto& deg : r.degrees()) {
    if (deg == Multidegree::zero(r.arity())) continue;
    if (r.arity() == 1) {
      if (deg[0] != 1) throw std::invalid_argument("monomial_count needs unit variable degrees");
      ++blocks[0];
    } else if (deg == Multidegree(1, 0)) {
      ++blocks[0];
    } else if (deg == Multidegree(0, 1)) {
      ++blocks[1];
    } else {
      throw std::invalid_argument("monomial_count needs unit variable degrees");
    }
  }
  auto h = [](long nv, long e) -> Integer {
    if (e < 0) return 0;
    if (nv == 0) return e == 0 ? 1 : 0;
    return binomial(e + nv - 1, nv - 1);
  };
  if (r.arity() == 1) return h(blocks[0], d[0]);
  return h(blocks[0], d[0]) * h(blocks[1], d[1]);
}

/// Sparse polynomial with terms sorted in decreasing lex order of exponents
/// and no zero coefficients.
template <class R>
class Polynomial {
 public:
  using value_type = typename R::value_type;
  using Term = std::pair<Exponent, value_type>;

  Polynomial() = default;
  explicit Polynomial(RingPtr ring, R coeffs = R{}) : ring_(std::move(ring)), R_(std::move(coeffs)) {}

  static Polynomial constant(RingPtr ring, const value_type& c, R coeffs = R{}) {
    Polynomial p(std::move(ring), coeffs);
    if (!R::is_zero(c)) p.terms_.emplace_back(Exponent{}, c);
    return p;
  }
  static Polynomial variable(RingPtr ring, std::size_t k, R coeffs = R{}) {
    Polynomial p(ring, coeffs);
    p.terms_.emplace_back(ring->variable(k), coeffs.one());
    return p;
  }
  /// Builds a canonical polynomial from arbitrary (possibly repeated) terms.
  static Polynomial from_terms(RingPtr ring, std::vector<Term> terms, R coeffs = R{}) {
    Polynomial p(std::move(ring), coeffs);
    p.terms_ = std::move(terms);
    p.canonicalize();
    return p;
  }

  const RingPtr& ring() const { return ring_; }
  const R& coeff_ring() const { return R_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  value_type coefficient(const Exponent& e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, const Exponent& x) { return t.first > x; });
    if (it != terms_.end() && it->first == e) return it->second;
    return R_.zero();
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.second = R_.neg(t.second);
    return r;
  }

  Polynomial operator+(const Polynomial& o) const {
    check_same(o);
    Polynomial r(ring_, R_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first > o.terms_[j].first)) {
        r.terms_.push_back(terms_[i++]);
      } else if (i == terms_.size() || o.terms_[j].first > terms_[i].first) {
        r.terms_.push_back(o.terms_[j++]);
      } else {
        value_type s = R_.add(terms_[i].second, o.terms_[j].second);
        if (!R::is_zero(s)) r.terms_.emplace_back(terms_[i].first, s);
        ++i;
        ++j;
      }
    }
    return r;
  }

  Polynomial operator-(const Polynomial& o) const { return *this + (-o); }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }

  Polynomial operator*(const Polynomial& o) const {
    check_same(o);
    std::vector<Term> prod;
    prod.reserve(terms_.size() * o.terms_.size());
    for (const auto& [ea, ca] : terms_)
      for (const auto& [eb, cb] : o.terms_) prod.emplace_back(ea + eb, R_.mul(ca, cb));
    return from_terms(ring_, std::move(prod), R_);
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scale(const value_type& c) const {
    if (R::is_zero(c)) return Polynomial(ring_, R_);
    Polynomial r = *this;
    for (auto& t : r.terms_) t.second = R_.mul(t.second, c);
    r.drop_zeros();
    return r;
  }

  /// Multiplies by the monomial with exponent e.
  Polynomial shift(const Exponent& e) const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.first = t.first + e;
    return r;  // adding a fixed exponent preserves the order
  }

  bool operator==(const Polynomial& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t k = 0; k < terms_.size(); ++k)
      if (!(terms_[k].first == o.terms_[k].first) || terms_[k].second != o.terms_[k].second) return false;
    return true;
  }

  /// Multidegree shared by all terms, or nullopt-like flag when inhomogeneous.
  bool homogeneous_degree(Multidegree& out) const {
    if (terms_.empty()) return true;
    out = ring_->degree_of(terms_[0].first);
    for (std::size_t k = 1; k < terms_.size(); ++k)
      if (!(ring_->degree_of(terms_[k].first) == out)) return false;
    return true;
  }
  bool is_homogeneous() const {
    Multidegree d;
    return homogeneous_degree(d);
  }

  /// Text form "c1*x1^e11*...*xk^e1k + ..." with explicit coefficients.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      if (k) os << " + ";
      os << R::to_string(terms_[k].second);
      for (std::size_t v = 0; v < ring_->nvars(); ++v) {
        unsigned e = terms_[k].first[v];
        if (!e) continue;
        os << '*' << ring_->name(v);
        if (e > 1) os << '^' << e;
      }
    }
    return os.str();
  }

 private:
  void check_same(const Polynomial& o) const {
    if (ring_ != o.ring_ && !(ring_ && o.ring_ && *ring_ == *o.ring_))
      throw std::invalid_argument("ring mismatch");
  }
  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first > b.first; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().first == t.first)
        merged.back().second = R_.add(merged.back().second, t.second);
      else
        merged.push_back(std::move(t));
    }
    terms_ = std::move(merged);
    drop_zeros();
  }
  void drop_zeros() {
    std::erase_if(terms_, [](const Term& t) { return R::is_zero(t.second); });
  }

  RingPtr ring_;
  R R_{};
  std::vector<Term> terms_;
};

using ZPoly = Polynomial<IntegerRing>;

/// Exact evaluation at a point whose coordinates lie in the field F.
template <class R, class F>
typename F::value_type evaluate(const Polynomial<R>& p, const std::vector<typename F::value_type>& point, const F& f) {
  if (point.size() != p.ring()->nvars())
    throw std::invalid_argument("evaluation point has length " + std::to_string(point.size()) + ", ring has " +
                                std::to_string(p.ring()->nvars()) + " variables");
  typename F::value_type acc = f.zero();
  for (const auto& [e, c] : p.terms()) {
    typename F::value_type t = f.from_integer(Integer(c));
    for (std::size_t v = 0; v < point.size(); ++v)
      for (unsigned k = 0; k < e[v]; ++k) t = f.mul(t, point[v]);
    acc = f.add(acc, t);
  }
  return acc;
}

/// Evaluation of an integer polynomial at an integer point.
inline Integer evaluate(const ZPoly& p, const std::vector<Integer>& point) {
  return evaluate(p, point, IntegerRing{});
}

}  // namespace pfk
