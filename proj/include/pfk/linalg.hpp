#pragma once

// Exact sparse/dense linear algebra over Z, Q and F_p: rank, kernel bases,
// image membership and Smith normal form.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pfk/coeff.hpp"

namespace pfk {

/// Sparse vector: strictly increasing indices, no stored zeros.
template <class F>
using SparseVec = std::vector<std::pair<std::uint32_t, typename F::value_type>>;

/// Integer-valued sparse matrix in coordinate form, sorted by (row, col).
/// Field computations map entries into the target domain on demand.
class SparseMatrix {
 public:
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    Integer value;
  };

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  /// Builds a matrix from (row, col, value) triplets; duplicate positions are
  /// summed and zeros dropped.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Entry> entries) {
    SparseMatrix m(rows, cols);
    for (const auto& e : entries)
      if (e.row >= rows || e.col >= cols) throw std::out_of_range("matrix entry index out of range");
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    for (auto& e : entries) {
      if (!m.entries_.empty() && m.entries_.back().row == e.row && m.entries_.back().col == e.col) {
        m.entries_.back().value += e.value;
        if (sgn(m.entries_.back().value) == 0) m.entries_.pop_back();
      } else if (sgn(e.value) != 0) {
        m.entries_.push_back(std::move(e));
      }
    }
    return m;
  }

  static SparseMatrix from_dense(const std::vector<std::vector<long>>& rows) {
    std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
    std::vector<Entry> es;
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw std::invalid_argument("ragged dense matrix");
      for (std::size_t j = 0; j < c; ++j)
        if (rows[i][j] != 0)
          es.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), Integer(rows[i][j])});
    }
    return from_triplets(r, c, std::move(es));
  }

  static SparseMatrix identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m.entries_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), Integer(1)});
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  SparseMatrix transpose() const {
    std::vector<Entry> es;
    es.reserve(entries_.size());
    for (const auto& e : entries_) es.push_back({e.col, e.row, e.value});
    return from_triplets(cols_, rows_, std::move(es));
  }

  std::vector<std::vector<Integer>> to_dense() const {
    std::vector<std::vector<Integer>> d(rows_, std::vector<Integer>(cols_, 0));
    for (const auto& e : entries_) d[e.row][e.col] = e.value;
    return d;
  }

  template <class F>
  std::vector<SparseVec<F>> row_vectors(const F& f) const {
    std::vector<SparseVec<F>> out(rows_);
    for (const auto& e : entries_) {
      auto v = f.from_integer(e.value);
      if (!F::is_zero(v)) out[e.row].emplace_back(e.col, v);
    }
    return out;
  }

  template <class F>
  std::vector<SparseVec<F>> column_vectors(const F& f) const {
    std::vector<SparseVec<F>> out(cols_);
    for (const auto& e : entries_) {  // row-major order keeps each column sorted
      auto v = f.from_integer(e.value);
      if (!F::is_zero(v)) out[e.col].emplace_back(e.row, v);
    }
    return out;
  }

  /// Text export: "rows cols nnz" then one 1-indexed "row col value" per line.
  void write_text(std::ostream& os) const {
    os << rows_ << ' ' << cols_ << ' ' << entries_.size() << '\n';
    for (const auto& e : entries_) os << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value.get_str() << '\n';
  }

  static SparseMatrix read_text(std::istream& is) {
    std::size_t r = 0, c = 0, nnz = 0;
    if (!(is >> r >> c >> nnz)) throw std::invalid_argument("malformed sparse matrix header");
    std::vector<Entry> es;
    es.reserve(nnz);
    for (std::size_t k = 0; k < nnz; ++k) {
      std::size_t i = 0, j = 0;
      std::string v;
      if (!(is >> i >> j >> v)) throw std::invalid_argument("truncated sparse matrix body");
      if (i == 0 || j == 0 || i > r || j > c) throw std::out_of_range("sparse matrix index out of range");
      es.push_back({static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1), Integer(v)});
    }
    return from_triplets(r, c, std::move(es));
  }

  bool operator==(const SparseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || entries_.size() != o.entries_.size()) return false;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      const auto &a = entries_[k], &b = o.entries_[k];
      if (a.row != b.row || a.col != b.col || a.value != b.value) return false;
    }
    return true;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Entry> entries_;
};

/// Incremental row echelon form over a field. Vectors live in F^dim; each
/// stored row is normalized to leading coefficient one at its pivot column.
/// reduce() is the linear projection that clears every pivot column, so the
/// result is a canonical representative modulo the current span.
template <class F>
class Echelon {
 public:
  using value_type = typename F::value_type;
  using Vec = SparseVec<F>;

  Echelon(F field, std::size_t dim) : f_(std::move(field)), dim_(dim), pivot_row_(dim, -1) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  const F& field() const { return f_; }
  const std::vector<Vec>& rows() const { return rows_; }
  bool is_pivot(std::uint32_t col) const { return pivot_row_[col] >= 0; }

  Vec reduce(const Vec& v) const {
    if (rows_.empty() || v.empty()) return v;
    std::vector<value_type> acc(dim_, f_.zero());
    std::uint32_t lo = v.front().first;
    for (const auto& [i, x] : v) {
      check_index(i);
      acc[i] = x;
    }
    for (std::uint32_t c = lo; c < dim_; ++c) {
      if (F::is_zero(acc[c])) continue;
      int r = pivot_row_[c];
      if (r < 0) continue;
      value_type factor = acc[c];
      for (const auto& [k, y] : rows_[static_cast<std::size_t>(r)]) acc[k] = f_.sub(acc[k], f_.mul(factor, y));
    }
    Vec out;
    for (std::uint32_t c = lo; c < dim_; ++c)
      if (!F::is_zero(acc[c])) out.emplace_back(c, acc[c]);
    return out;
  }

  bool contains(const Vec& v) const { return reduce(v).empty(); }

  /// Adds v to the span; returns true iff it was independent.
  bool insert(const Vec& v) {
    Vec r = reduce(v);
    if (r.empty()) return false;
    value_type s = f_.inv(r.front().second);
    for (auto& e : r) e.second = f_.mul(e.second, s);
    pivot_row_[r.front().first] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
    return true;
  }

  /// Reduced row echelon form: rows sorted by pivot, each pivot column zero
  /// in every other row.
  std::vector<Vec> rref() const {
    std::vector<std::uint32_t> pivots;
    for (const auto& r : rows_) pivots.push_back(r.front().first);
    std::vector<std::size_t> order(rows_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots[a] < pivots[b]; });
    // Back substitution from the last pivot up; already-reduced rows feed the
    // rows above them.
    Echelon full(f_, dim_);
    std::vector<Vec> reduced(rows_.size());
    for (std::size_t k = order.size(); k-- > 0;) {
      const Vec& row = rows_[order[k]];
      std::vector<value_type> acc(dim_, f_.zero());
      for (const auto& [i, x] : row) acc[i] = x;
      std::uint32_t p = row.front().first;
      for (std::uint32_t c = p + 1; c < dim_; ++c) {
        if (F::is_zero(acc[c])) continue;
        int r = full.pivot_row_[c];
        if (r < 0) continue;
        value_type factor = acc[c];
        for (const auto& [kk, y] : full.rows_[static_cast<std::size_t>(r)]) acc[kk] = f_.sub(acc[kk], f_.mul(factor, y));
      }
      Vec out;
      for (std::uint32_t c = p; c < dim_; ++c)
        if (!F::is_zero(acc[c])) out.emplace_back(c, acc[c]);
      full.pivot_row_[p] = static_cast<int>(full.rows_.size());
      full.rows_.push_back(out);
      reduced[k] = std::move(out);
    }
    return reduced;
  }

 private:
  void check_index(std::uint32_t i) const {
    if (i >= dim_) throw std::out_of_range("vector index out of range for echelon");
  }

  F f_;
  std::size_t dim_;
  std::vector<Vec> rows_;
  std::vector<int> pivot_row_;
};

/// Basis of the right null space {x : A x = 0} of the matrix whose rows are
/// given, as sparse vectors of length ncols. Deterministic: one basis vector
/// per free column, in increasing column order.
template <class F>
std::vector<SparseVec<F>> kernel_of_rows(const F& f, const std::vector<SparseVec<F>>& rows, std::size_t ncols) {
  Echelon<F> ech(f, ncols);
  for (const auto& r : rows) ech.insert(r);
  auto rr = ech.rref();
  std::vector<int> pivot_of_col(ncols, -1);
  for (std::size_t k = 0; k < rr.size(); ++k) pivot_of_col[rr[k].front().first] = static_cast<int>(k);
  // For each free column f: x_f = 1 and x_p = -rref[p][f] for every pivot p.
  std::vector<std::vector<std::pair<std::uint32_t, typename F::value_type>>> by_free(ncols);
  for (std::size_t k = 0; k < rr.size(); ++k) {
    std::uint32_t p = rr[k].front().first;
    for (const auto& [c, x] : rr[k])
      if (c != p) by_free[c].emplace_back(p, f.neg(x));
  }
  std::vector<SparseVec<F>> basis;
  for (std::uint32_t c = 0; c < ncols; ++c) {
    if (pivot_of_col[c] >= 0) continue;
    SparseVec<F> v = by_free[c];
    v.emplace_back(c, f.one());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Rank over Q of a dense integer matrix by fraction-free (Bareiss)
/// elimination.
inline std::size_t bareiss_rank(std::vector<std::vector<Integer>> m) {
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Integer t = m[i][j] * m[r][c] - m[i][c] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

namespace detail {

inline constexpr std::size_t kBareissDenseLimit = 4'000'000;

template <class F>
std::size_t echelon_rank(const SparseMatrix& m, const F& f) {
  // eliminate along the shorter dimension
  if (m.rows() <= m.cols()) {
    Echelon<F> e(f, m.cols());
    for (const auto& r : m.row_vectors(f)) e.insert(r);
    return e.rank();
  }
  Echelon<F> e(f, m.rows());
  for (const auto& c : m.column_vectors(f)) e.insert(c);
  return e.rank();
}

}  // namespace detail

/// Exact rank over a field. Q uses Bareiss elimination on the dense matrix
/// when it fits, F_p sparse elimination.
inline std::size_t rank(const SparseMatrix& m, const CoeffDomain& d) {
  if (!d.is_field()) throw std::invalid_argument("rank requires a field; use SNF");
  if (d.kind() == CoeffDomain::Kind::rationals) {
    if (m.rows() * m.cols() <= detail::kBareissDenseLimit) return bareiss_rank(m.to_dense());
    return detail::echelon_rank(m, RationalField{});
  }
  return detail::echelon_rank(m, PrimeField(d.prime()));
}

namespace detail {

/// Scales a rational vector to a primitive integer vector.
inline std::vector<std::pair<std::uint32_t, Integer>> primitive(const SparseVec<RationalField>& v) {
  Integer l = 1, g = 0;
  for (const auto& [i, x] : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<std::pair<std::uint32_t, Integer>> out;
  for (const auto& [i, x] : v) {
    Integer n = x.get_num() * (l / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    out.emplace_back(i, n);
  }
  if (sgn(g) != 0)
    for (auto& e : out) e.second /= g;
  return out;
}

}  // namespace detail

/// Basis of the right null space as the columns of a matrix. Over Q each
/// column is scaled to a primitive integer vector; over F_p entries are the
/// residues in [0, p).
inline SparseMatrix kernel_basis(const SparseMatrix& m, const CoeffDomain& d) {
  if (!d.is_field()) throw std::invalid_argument("rank requires a field; use SNF");
  std::vector<SparseMatrix::Entry> es;
  std::size_t ncols = 0;
  if (d.kind() == CoeffDomain::Kind::rationals) {
    RationalField f;
    auto basis = kernel_of_rows(f, m.row_vectors(f), m.cols());
    ncols = basis.size();
    for (std::size_t k = 0; k < basis.size(); ++k)
      for (auto& [i, x] : detail::primitive(basis[k])) es.push_back({i, static_cast<std::uint32_t>(k), x});
  } else {
    PrimeField f(d.prime());
    auto basis = kernel_of_rows(f, m.row_vectors(f), m.cols());
    ncols = basis.size();
    for (std::size_t k = 0; k < basis.size(); ++k)
      for (auto& [i, x] : basis[k]) es.push_back({i, static_cast<std::uint32_t>(k), Integer(x)});
  }
  return SparseMatrix::from_triplets(m.cols(), ncols, std::move(es));
}

/// True iff v lies in the column span of m over the given field.
inline bool image_contains(const SparseMatrix& m, const std::vector<Integer>& v, const CoeffDomain& d) {
  if (v.size() != m.rows())
    throw std::invalid_argument("dimension mismatch: vector length " + std::to_string(v.size()) +
                                " vs " + std::to_string(m.rows()) + " rows");
  return visit_field(d, [&](auto f) {
    using Fld = decltype(f);
    Echelon<Fld> e(f, m.rows());
    for (const auto& c : m.column_vectors(f)) e.insert(c);
    SparseVec<Fld> w;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto x = f.from_integer(v[i]);
      if (!Fld::is_zero(x)) w.emplace_back(static_cast<std::uint32_t>(i), x);
    }
    return e.contains(w);
  });
}

/// Nonzero elementary divisors d1 | d2 | ... of a dense integer matrix.
inline std::vector<Integer> smith_normal_form(std::vector<std::vector<Integer>> a) {
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<Integer> divisors;
  std::size_t t = 0;
  auto abs_less = [](const Integer& x, const Integer& y) { return mpz_cmpabs(x.get_mpz_t(), y.get_mpz_t()) < 0; };
  while (t < rows && t < cols) {
    // smallest nonzero entry of the trailing block becomes the pivot
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (sgn(a[i][j]) != 0 && (pi == rows || abs_less(a[i][j], a[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    for (;;) {
      std::swap(a[t], a[pi]);
      if (pj != t)
        for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][pj]);
      bool clean = true;
      Integer q;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (sgn(a[i][t]) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        if (sgn(q) != 0)
          for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (sgn(a[i][t]) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (sgn(a[t][j]) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        if (sgn(q) != 0)
          for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (sgn(a[t][j]) != 0) clean = false;
      }
      if (clean) {
        // enforce divisibility of the trailing block by the pivot
        std::size_t bad = rows;
        for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
          for (std::size_t j = t + 1; j < cols; ++j)
            if (!mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
              bad = i;
              break;
            }
        if (bad == rows) break;
        for (std::size_t j = t; j < cols; ++j) a[t][j] += a[bad][j];
        clean = false;
      }
      // re-pick the smallest entry in row t / column t
      pi = t;
      pj = t;
      for (std::size_t i = t; i < rows; ++i)
        if (sgn(a[i][t]) != 0 && abs_less(a[i][t], a[pi][pj])) {
          pi = i;
          pj = t;
        }
      for (std::size_t j = t; j < cols; ++j)
        if (sgn(a[t][j]) != 0 && abs_less(a[t][j], a[pi][pj])) {
          pi = t;
          pj = j;
        }
      if (sgn(a[pi][pj]) == 0) {
        pi = t;
        pj = t;
      }
    }
    divisors.push_back(abs(a[t][t]));
    ++t;
  }
  return divisors;
}

inline std::vector<Integer> smith_normal_form(const SparseMatrix& m) { return smith_normal_form(m.to_dense()); }

}  // namespace pfk
