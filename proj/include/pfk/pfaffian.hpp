#pragma once

// Generic skew-symmetric matrices, memoized Pfaffians of index-selected
// submatrices, and the generators of the Pfaffian and Huneke-Ulrich ideals.

#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pfk/exterior.hpp"
#include "pfk/poly.hpp"

namespace pfk {

/// Pfaffian of an even skew-symmetric matrix by first-row expansion.
template <class R>
Polynomial<R> pfaffian(const std::vector<std::vector<Polynomial<R>>>& m, const RingPtr& ring) {
  const std::size_t size = m.size();
  if (size % 2) throw std::invalid_argument("Pfaffian undefined for odd size");
  for (const auto& row : m)
    if (row.size() != size) throw std::invalid_argument("Pfaffian needs a square matrix");
  std::unordered_map<std::uint64_t, Polynomial<R>> memo;
  auto rec = [&](auto&& self, std::uint64_t mask) -> Polynomial<R> {
    if (!mask) return Polynomial<R>::constant(ring, R{}.one());
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < size; ++k)
      if (mask >> k & 1) idx.push_back(k);
    Polynomial<R> acc(ring);
    for (std::size_t t = 1; t < idx.size(); ++t) {
      const auto& e = m[idx[0]][idx[t]];
      if (e.is_zero()) continue;
      Polynomial<R> term = e * self(self, mask & ~(1ull << idx[0]) & ~(1ull << idx[t]));
      // (-1)^j for the 1-based column position j = t + 1
      acc = t % 2 ? acc + term : acc - term;
    }
    return memo.emplace(mask, acc).first->second;
  };
  if (size > 64) throw std::invalid_argument("Pfaffian size limited to 64");
  return rec(rec, size == 64 ? ~0ull : (1ull << size) - 1);
}

/// Skew-symmetric matrix of integer polynomials with 1-based entry access.
class SkewMatrix {
 public:
  SkewMatrix(RingPtr ring, std::size_t size) : ring_(std::move(ring)), size_(size), upper_(size * size, ZPoly(ring_)) {}

  /// The generic matrix whose entry (i, j), i < j, is the variable var(i, j).
  template <class VarIndex>
  static SkewMatrix generic(RingPtr ring, std::size_t size, VarIndex var) {
    SkewMatrix m(ring, size);
    for (std::size_t i = 1; i <= size; ++i)
      for (std::size_t j = i + 1; j <= size; ++j) m.set(i, j, ZPoly::variable(ring, var(i, j)));
    return m;
  }

  const RingPtr& ring() const { return ring_; }
  std::size_t size() const { return size_; }

  /// Sets entry (i, j) and its negative at (j, i); i < j.
  void set(std::size_t i, std::size_t j, ZPoly value) {
    if (i >= j || j > size_ || i == 0) throw std::out_of_range("skew entry must have 1 <= i < j <= size");
    upper_[(i - 1) * size_ + (j - 1)] = std::move(value);
  }

  ZPoly entry(std::size_t i, std::size_t j) const {
    if (i == 0 || j == 0 || i > size_ || j > size_) throw std::out_of_range("skew entry index out of range");
    if (i == j) return ZPoly(ring_);
    if (i < j) return upper_[(i - 1) * size_ + (j - 1)];
    return -upper_[(j - 1) * size_ + (i - 1)];
  }

  std::vector<std::vector<ZPoly>> submatrix(const IndexSet& rows) const {
    std::vector<std::vector<ZPoly>> out(rows.size());
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < rows.size(); ++b) out[a].push_back(entry(rows[a], rows[b]));
    return out;
  }

 private:
  RingPtr ring_;
  std::size_t size_;
  std::vector<ZPoly> upper_;
};

/// Memoized Pf(I) for index sets I of one skew matrix. The memo is the only
/// shared mutable state of the library; inserts are idempotent.
class PfaffianTable {
 public:
  explicit PfaffianTable(SkewMatrix m) : m_(std::move(m)) {
    if (m_.size() > 64) throw std::invalid_argument("Pfaffian table limited to 64 rows");
  }

  const SkewMatrix& matrix() const { return m_; }

  ZPoly pf(const IndexSet& s) const {
    if (s.size() % 2) throw std::invalid_argument("Pfaffian undefined for odd size");
    if (!is_index_set(s, static_cast<int>(m_.size()))) throw std::invalid_argument("bad index set " + to_string(s));
    std::uint64_t mask = 0;
    for (int x : s) mask |= 1ull << (x - 1);
    return pf_mask(mask);
  }

  /// Pf of the sorted union, or 0 when the sets overlap. The sign sorting
  /// the concatenation is left to the caller.
  ZPoly pf_union(const IndexSet& a, const IndexSet& b) const {
    if (intersects(a, b)) return ZPoly(m_.ring());
    IndexSet u = set_union(a, b);
    if (u.size() % 2) throw std::invalid_argument("Pfaffian undefined for odd size");
    return pf(u);
  }

 private:
  ZPoly pf_mask(std::uint64_t mask) const {
    if (!mask) return ZPoly::constant(m_.ring(), 1);
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    }
    int first = __builtin_ctzll(mask);
    std::uint64_t rest = mask & ~(1ull << first);
    ZPoly acc(m_.ring());
    int t = 0;
    for (std::uint64_t r = rest; r; r &= r - 1) {
      int other = __builtin_ctzll(r);
      ++t;
      ZPoly e = m_.entry(first + 1, other + 1);
      if (e.is_zero()) continue;
      ZPoly term = e * pf_mask(rest & ~(1ull << other));
      acc = t % 2 ? acc + term : acc - term;
    }
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.emplace(mask, std::move(acc)).first->second;
  }

  SkewMatrix m_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, ZPoly> memo_;
};

/// A = Sym(∧²E) for E of rank 2n+1, the generic φ and the 2n+1 Pfaffians
/// Y_i = (-1)^{i+1} Pf φ(i).
struct PfaffianContext {
  int n = 0;
  int N = 0;
  RingPtr ring;
  std::shared_ptr<const PfaffianTable> phi;
  std::vector<ZPoly> Y;

  /// Index of the variable φ_{ij}, i < j, in lex order of pairs.
  static std::size_t var_index(int N, int i, int j) {
    return static_cast<std::size_t>(subset_rank({i, j}, N));
  }

  static PfaffianContext make(int n) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    PfaffianContext c;
    c.n = n;
    c.N = 2 * n + 1;
    std::vector<std::string> names;
    std::vector<Multidegree> degs;
    std::vector<Weight> wts;
    for (const auto& p : subsets(c.N, 2)) {
      names.push_back("phi_" + std::to_string(p[0]) + "_" + std::to_string(p[1]));
      degs.emplace_back(1);
      Weight w(c.N, 0);
      ++w[p[0] - 1];
      ++w[p[1] - 1];
      wts.push_back(w);
    }
    c.ring = std::make_shared<const PolyRing>(names, degs, wts);
    const int N = c.N;
    c.phi = std::make_shared<const PfaffianTable>(SkewMatrix::generic(
        c.ring, N, [N](std::size_t i, std::size_t j) { return var_index(N, int(i), int(j)); }));
    for (int i = 1; i <= N; ++i) {
      ZPoly p = c.phi->pf(complement({i}, N));
      c.Y.push_back(i % 2 ? p : -p);
    }
    return c;
  }
};

inline std::vector<ZPoly> pfaffian_generators(int n) { return PfaffianContext::make(n).Y; }

/// Bigraded A = Sym(∧²F) ⊗ Sym(F*) for F of rank 2n, the generic Φ, the
/// generic vector v and the generators (Φv)_1..(Φv)_{2n}, Pf Φ.
struct HUContext {
  int n = 0;
  int N = 0;  // rank of F
  RingPtr ring;
  std::shared_ptr<const PfaffianTable> Phi;
  std::vector<ZPoly> v;
  std::vector<ZPoly> J;

  std::size_t x_index(int i, int j) const { return static_cast<std::size_t>(subset_rank({i, j}, N)); }
  std::size_t y_index(int i) const { return static_cast<std::size_t>(choose(N, 2)) + std::size_t(i - 1); }

  static HUContext make(int n) {
    if (n < 2) throw std::invalid_argument("Huneke-Ulrich ideals need n >= 2");
    HUContext c;
    c.n = n;
    c.N = 2 * n;
    std::vector<std::string> names;
    std::vector<Multidegree> degs;
    std::vector<Weight> wts;
    for (const auto& p : subsets(c.N, 2)) {
      names.push_back("x_" + std::to_string(p[0]) + "_" + std::to_string(p[1]));
      degs.emplace_back(1, 0);
      Weight w(c.N, 0);
      ++w[p[0] - 1];
      ++w[p[1] - 1];
      wts.push_back(w);
    }
    for (int i = 1; i <= c.N; ++i) {
      names.push_back("y_" + std::to_string(i));
      degs.emplace_back(0, 1);
      Weight w(c.N, 0);
      w[i - 1] = -1;
      wts.push_back(w);
    }
    c.ring = std::make_shared<const PolyRing>(names, degs, wts);
    const int N = c.N;
    c.Phi = std::make_shared<const PfaffianTable>(SkewMatrix::generic(
        c.ring, N, [N](std::size_t i, std::size_t j) { return static_cast<std::size_t>(subset_rank({int(i), int(j)}, N)); }));
    for (int i = 1; i <= N; ++i) c.v.push_back(ZPoly::variable(c.ring, c.y_index(i)));
    for (int i = 1; i <= N; ++i) {
      ZPoly row(c.ring);
      for (int j = 1; j <= N; ++j) row += c.Phi->matrix().entry(i, j) * c.v[j - 1];
      c.J.push_back(row);
    }
    IndexSet all(N);
    for (int k = 0; k < N; ++k) all[k] = k + 1;
    c.J.push_back(c.Phi->pf(all));
    return c;
  }
};

inline std::vector<ZPoly> hu_generators(int n) { return HUContext::make(n).J; }

}  // namespace pfk
