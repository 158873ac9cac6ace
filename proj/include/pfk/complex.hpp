#pragma once

// Graded free modules with equivariant generator labels, complexes of
// polynomial matrices, symbolic d∘d checks, dualization and Euler
// characteristic Hilbert functions.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfk/exterior.hpp"
#include "pfk/poly.hpp"

namespace pfk {

/// Equivariant bookkeeping for one generator: the basis vector e_subset of
/// ∧^k E (dim E = N) or a scalar, a power of det E, and a degree twist.
/// det powers carry no degree; all shifts live in twist, so the generator
/// spans A(twist).
struct GeneratorLabel {
  bool scalar = false;
  int k = 0;
  int N = 0;
  IndexSet subset;
  int det_power = 0;
  Multidegree twist;

  static GeneratorLabel exterior(int N, IndexSet subset, int det_power, Multidegree twist) {
    GeneratorLabel g;
    g.k = static_cast<int>(subset.size());
    g.N = N;
    g.subset = std::move(subset);
    g.det_power = det_power;
    g.twist = twist;
    if (!is_index_set(g.subset, N)) throw std::invalid_argument("generator subset is not an index set");
    return g;
  }
  static GeneratorLabel scalar_label(int det_power, Multidegree twist) {
    GeneratorLabel g;
    g.scalar = true;
    g.det_power = det_power;
    g.twist = twist;
    return g;
  }

  /// Torus weight ε_subset + det_power·(1,…,1); empty for scalars without a
  /// ground set.
  Weight weight(std::size_t dim) const {
    Weight w(dim, det_power);
    if (!scalar)
      for (int x : subset)
        if (static_cast<std::size_t>(x) <= dim) ++w[x - 1];
    return w;
  }

  bool operator==(const GeneratorLabel&) const = default;
};

struct GradedFreeModule {
  std::vector<GeneratorLabel> gens;

  std::size_t rank() const { return gens.size(); }
  bool operator==(const GradedFreeModule&) const = default;
};

/// Sparse matrix of integer polynomials, stored by column.
class PolyMatrix {
 public:
  struct Entry {
    std::uint32_t row;
    ZPoly value;
  };

  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), by_col_(cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  /// Adds value at (r, c); entries are merged and zeros dropped.
  void add(std::size_t r, std::size_t c, const ZPoly& value) {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix entry index out of range");
    if (value.is_zero()) return;
    auto& col = by_col_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r, [](const Entry& e, std::size_t x) { return e.row < x; });
    if (it != col.end() && it->row == r) {
      it->value += value;
      if (it->value.is_zero()) col.erase(it);
    } else {
      col.insert(it, Entry{static_cast<std::uint32_t>(r), value});
    }
  }

  void set(std::size_t r, std::size_t c, const ZPoly& value) {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix entry index out of range");
    auto& col = by_col_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r, [](const Entry& e, std::size_t x) { return e.row < x; });
    if (it != col.end() && it->row == r) {
      if (value.is_zero()) col.erase(it);
      else it->value = value;
    } else if (!value.is_zero()) {
      col.insert(it, Entry{static_cast<std::uint32_t>(r), value});
    }
  }

  const std::vector<Entry>& column(std::size_t c) const { return by_col_[c]; }

  std::optional<ZPoly> at(std::size_t r, std::size_t c) const {
    for (const auto& e : by_col_[c])
      if (e.row == r) return e.value;
    return std::nullopt;
  }

  std::size_t nnz() const {
    std::size_t s = 0;
    for (const auto& c : by_col_) s += c.size();
    return s;
  }

  PolyMatrix transpose() const {
    PolyMatrix t(cols_, rows_);
    for (std::size_t c = 0; c < cols_; ++c)
      for (const auto& e : by_col_[c]) t.by_col_[e.row].push_back(Entry{static_cast<std::uint32_t>(c), e.value});
    return t;  // columns of t are filled in increasing row order of t
  }

  bool operator==(const PolyMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t c = 0; c < cols_; ++c) {
      const auto &a = by_col_[c], &b = o.by_col_[c];
      if (a.size() != b.size()) return false;
      for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].row != b[k].row || !(a[k].value == b[k].value)) return false;
    }
    return true;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::vector<Entry>> by_col_;
};

/// Product of polynomial matrices, accumulated term-wise per entry.
inline PolyMatrix multiply(const PolyMatrix& a, const PolyMatrix& b, const RingPtr& ring) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product dimension mismatch");
  PolyMatrix out(a.rows(), b.cols());
  std::vector<std::vector<ZPoly::Term>> acc(a.rows());
  std::vector<std::uint32_t> touched;
  for (std::size_t c = 0; c < b.cols(); ++c) {
    touched.clear();
    for (const auto& [k, q] : b.column(c))
      for (const auto& [r, p] : a.column(k)) {
        if (acc[r].empty()) touched.push_back(r);
        for (const auto& [ep, cp] : p.terms())
          for (const auto& [eq, cq] : q.terms()) acc[r].emplace_back(ep + eq, cp * cq);
      }
    std::sort(touched.begin(), touched.end());
    for (auto r : touched) {
      out.set(r, c, ZPoly::from_terms(ring, std::move(acc[r])));
      acc[r].clear();
    }
  }
  return out;
}

/// A bounded complex of graded free modules over one ring:
/// module(hi) → … → module(lo), with d_j : module(j) → module(j−1).
class FreeComplex {
 public:
  FreeComplex() = default;
  FreeComplex(RingPtr ring, int lo, std::vector<GradedFreeModule> modules, std::vector<PolyMatrix> diffs)
      : ring_(std::move(ring)), lo_(lo), modules_(std::move(modules)), diffs_(std::move(diffs)) {
    if (!modules_.empty() && diffs_.size() + 1 != modules_.size())
      throw std::invalid_argument("a complex with m modules needs m-1 differentials");
    for (std::size_t k = 0; k < diffs_.size(); ++k)
      if (diffs_[k].rows() != modules_[k].rank() || diffs_[k].cols() != modules_[k + 1].rank())
        throw std::invalid_argument("differential " + std::to_string(lo_ + int(k) + 1) + " has wrong shape");
    for (const auto& m : modules_)
      for (const auto& g : m.gens)
        if (g.twist.arity() != ring_->arity()) throw std::invalid_argument("twist arity does not match the ring");
  }

  const RingPtr& ring() const { return ring_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(modules_.size()) - 1; }
  bool in_range(int j) const { return j >= lo_ && j <= hi(); }

  const GradedFreeModule& module(int j) const {
    static const GradedFreeModule empty;
    return in_range(j) ? modules_[static_cast<std::size_t>(j - lo_)] : empty;
  }
  std::size_t rank(int j) const { return module(j).rank(); }

  /// d_j : module(j) → module(j−1); a zero matrix outside the range.
  PolyMatrix differential(int j) const {
    if (in_range(j) && in_range(j - 1)) return diffs_[static_cast<std::size_t>(j - 1 - lo_)];
    return PolyMatrix(rank(j - 1), rank(j));
  }
  const PolyMatrix* differential_ptr(int j) const {
    if (in_range(j) && in_range(j - 1)) return &diffs_[static_cast<std::size_t>(j - 1 - lo_)];
    return nullptr;
  }
  PolyMatrix& mutable_differential(int j) {
    if (!(in_range(j) && in_range(j - 1))) throw std::out_of_range("no differential d_" + std::to_string(j));
    return diffs_[static_cast<std::size_t>(j - 1 - lo_)];
  }

  const std::vector<GradedFreeModule>& modules() const { return modules_; }

  bool operator==(const FreeComplex& o) const {
    bool rings = ring_ == o.ring_ || (ring_ && o.ring_ && *ring_ == *o.ring_);
    if (!rings || lo_ != o.lo_ || modules_ != o.modules_ || diffs_.size() != o.diffs_.size()) return false;
    for (std::size_t k = 0; k < diffs_.size(); ++k)
      if (!(diffs_[k] == o.diffs_[k])) return false;
    return true;
  }

 private:
  RingPtr ring_;
  int lo_ = 0;
  std::vector<GradedFreeModule> modules_;
  std::vector<PolyMatrix> diffs_;
};

/// Thrown when an entry is not homogeneous of the degree forced by twists.
struct InhomogeneousEntry : std::invalid_argument {
  int j;
  std::size_t row, col;
  InhomogeneousEntry(int j_, std::size_t r, std::size_t c, const std::string& why)
      : std::invalid_argument("inhomogeneous entry of d_" + std::to_string(j_) + " at (" + std::to_string(r) + "," +
                              std::to_string(c) + "): " + why),
        j(j_),
        row(r),
        col(c) {}
};

/// Checks every entry of d_j against deg = twist(row) − twist(col).
inline void check_homogeneity(const FreeComplex& c) {
  for (int j = c.lo() + 1; j <= c.hi(); ++j) {
    const PolyMatrix& d = *c.differential_ptr(j);
    const auto& rows = c.module(j - 1).gens;
    const auto& cols = c.module(j).gens;
    for (std::size_t col = 0; col < d.cols(); ++col)
      for (const auto& e : d.column(col)) {
        Multidegree want = rows[e.row].twist - cols[col].twist;
        Multidegree got;
        if (!e.value.homogeneous_degree(got)) throw InhomogeneousEntry(j, e.row, col, "mixed degrees");
        if (!(got == want))
          throw InhomogeneousEntry(j, e.row, col, "degree " + got.to_string() + ", expected " + want.to_string());
      }
  }
}

struct CompositeFailure {
  int j;  // d_j ∘ d_{j+1} is nonzero
  std::size_t row, col;
  std::string value;
};

struct ComplexCheck {
  bool ok = true;
  std::size_t pairs_checked = 0;
  std::vector<CompositeFailure> failures;  // first few nonzero composite entries
  std::size_t nonzero_entries = 0;
};

/// Symbolic check that every d_j ∘ d_{j+1} vanishes identically. Throws
/// InhomogeneousEntry on a malformed entry.
inline ComplexCheck verify_complex(const FreeComplex& c, std::size_t max_listed = 20) {
  check_homogeneity(c);
  ComplexCheck out;
  for (int j = c.lo() + 1; j < c.hi(); ++j) {
    PolyMatrix p = multiply(*c.differential_ptr(j), *c.differential_ptr(j + 1), c.ring());
    ++out.pairs_checked;
    for (std::size_t col = 0; col < p.cols(); ++col)
      for (const auto& e : p.column(col)) {
        out.ok = false;
        ++out.nonzero_entries;
        if (out.failures.size() < max_listed) out.failures.push_back({j, e.row, col, e.value.to_string()});
      }
  }
  return out;
}

/// Hom(−, A(twist)) with plain transposes: module k of the result is the
/// dual of module lo+hi−k; twists become −τ + twist; ∧^k labels become
/// ∧^{N−k} of the complement with det power −p−1.
inline FreeComplex dualize(const FreeComplex& c, const Multidegree& twist) {
  std::vector<GradedFreeModule> mods;
  std::vector<PolyMatrix> diffs;
  const int lo = c.lo(), hi = c.hi();
  for (int k = lo; k <= hi; ++k) {
    GradedFreeModule m;
    for (const auto& g : c.module(lo + hi - k).gens) {
      GeneratorLabel d = g;
      if (g.scalar) {
        d.det_power = -g.det_power;
      } else {
        d.subset = complement(g.subset, g.N);
        d.k = g.N - g.k;
        d.det_power = -g.det_power - 1;
      }
      d.twist = -g.twist + twist;
      m.gens.push_back(std::move(d));
    }
    mods.push_back(std::move(m));
  }
  for (int k = lo + 1; k <= hi; ++k) diffs.push_back(c.differential(lo + hi - k + 1).transpose());
  return FreeComplex(c.ring(), lo, std::move(mods), std::move(diffs));
}

/// Σ_j (−1)^j Σ_g dim A_{d + twist(g)}: the Hilbert function of the cokernel
/// of an exact complex.
inline Integer euler_hf(const FreeComplex& c, const Multidegree& d) {
  Integer total = 0;
  for (int j = c.lo(); j <= c.hi(); ++j) {
    Integer s = 0;
    for (const auto& g : c.module(j).gens) s += monomial_count(*c.ring(), d + g.twist);
    if (j % 2) total -= s;
    else total += s;
  }
  return total;
}

/// Dimension of module(j) in internal degree d.
inline Integer chain_dim(const FreeComplex& c, int j, const Multidegree& d) {
  Integer s = 0;
  for (const auto& g : c.module(j).gens) s += monomial_count(*c.ring(), d + g.twist);
  return s;
}

/// Torus weights of all generators when every differential entry is
/// homogeneous for the ring's fine grading; nullopt otherwise. Weights of
/// the lowest module come from the labels and propagate upward.
inline std::optional<std::vector<std::vector<Weight>>> fine_generator_weights(const FreeComplex& c) {
  const PolyRing& r = *c.ring();
  if (!r.has_weights()) return std::nullopt;
  const std::size_t dim = r.weight_dim();
  std::vector<std::vector<Weight>> w;
  for (int j = c.lo(); j <= c.hi(); ++j) {
    const auto& gens = c.module(j).gens;
    std::vector<Weight> cur(gens.size());
    for (std::size_t g = 0; g < gens.size(); ++g) cur[g] = gens[g].weight(dim);
    if (j > c.lo()) {
      const PolyMatrix& d = *c.differential_ptr(j);
      const auto& below = w.back();
      for (std::size_t col = 0; col < d.cols(); ++col) {
        bool set = false;
        for (const auto& e : d.column(col))
          for (const auto& t : e.value.terms()) {
            Weight v = add_weights(below[e.row], r.weight_of(t.first));
            if (!set) {
              cur[col] = v;
              set = true;
            } else if (v != cur[col]) {
              return std::nullopt;
            }
          }
      }
    }
    w.push_back(std::move(cur));
  }
  return w;
}

}  // namespace pfk
