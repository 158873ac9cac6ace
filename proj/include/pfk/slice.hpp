#pragma once

// Degree slices of a complex. A slice of module j in internal degree d has
// the basis (generator, monomial of degree d + twist) in generator-major
// order. When the ring carries torus weights and the complex respects them,
// each slice splits into weight blocks and every differential is block
// diagonal, so all linear algebra runs block by block.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pfk/complex.hpp"
#include "pfk/linalg.hpp"

namespace pfk {

/// All monomials of one degree, ascending lex, with their torus weights
/// grouped for block enumeration.
class MonomialTable {
 public:
  struct Group {
    Weight weight;
    std::vector<std::uint32_t> members;  // ascending
  };

  MonomialTable(const PolyRing& r, const Multidegree& d) : degree_(d), monos_(monomial_basis(r, d)) {
    if (r.has_weights()) {
      std::map<Weight, std::vector<std::uint32_t>> g;
      for (std::uint32_t k = 0; k < monos_.size(); ++k) g[r.weight_of(monos_[k])].push_back(k);
      for (auto& [w, m] : g) groups_.push_back({w, std::move(m)});
    } else if (!monos_.empty()) {
      Group all;
      all.members.resize(monos_.size());
      for (std::uint32_t k = 0; k < monos_.size(); ++k) all.members[k] = k;
      groups_.push_back(std::move(all));
    }
  }

  const Multidegree& degree() const { return degree_; }
  std::size_t size() const { return monos_.size(); }
  const Exponent& at(std::size_t k) const { return monos_[k]; }
  const std::vector<Exponent>& monomials() const { return monos_; }
  const std::vector<Group>& groups() const { return groups_; }

  std::int64_t find(const Exponent& e) const {
    auto it = std::lower_bound(monos_.begin(), monos_.end(), e);
    if (it == monos_.end() || !(*it == e)) return -1;
    return it - monos_.begin();
  }

  const Group* group(const Weight& w) const {
    auto it = std::lower_bound(groups_.begin(), groups_.end(), w,
                               [](const Group& g, const Weight& x) { return g.weight < x; });
    if (it == groups_.end() || it->weight != w) return nullptr;
    return &*it;
  }

 private:
  Multidegree degree_;
  std::vector<Exponent> monos_;
  std::vector<Group> groups_;
};

using TablePtr = std::shared_ptr<const MonomialTable>;

/// Basis of module j in degree d, split into weight blocks.
struct DegreeBasis {
  int j = 0;
  Multidegree d;
  std::vector<std::uint32_t> offset;  // per generator, plus total at the end
  std::vector<TablePtr> table;        // per generator; null when d + twist < 0
  std::vector<Weight> block_weight;   // ascending
  std::vector<std::vector<std::uint32_t>> block_members;
  std::vector<std::uint32_t> block_of, pos_in_block;

  std::size_t size() const { return offset.empty() ? 0 : offset.back(); }
  std::size_t blocks() const { return block_weight.size(); }

  /// (generator, monomial index) of a global position.
  std::pair<std::uint32_t, std::uint32_t> element(std::uint32_t global) const {
    auto it = std::upper_bound(offset.begin(), offset.end(), global);
    std::uint32_t g = static_cast<std::uint32_t>(it - offset.begin() - 1);
    return {g, global - offset[g]};
  }
  const Exponent& monomial(std::uint32_t global) const {
    auto [g, m] = element(global);
    return table[g]->at(m);
  }
  std::int64_t index(std::uint32_t gen, const Exponent& m) const {
    if (!table[gen]) return -1;
    std::int64_t k = table[gen]->find(m);
    return k < 0 ? -1 : std::int64_t(offset[gen]) + k;
  }
  int find_block(const Weight& w) const {
    auto it = std::lower_bound(block_weight.begin(), block_weight.end(), w);
    if (it == block_weight.end() || *it != w) return -1;
    return static_cast<int>(it - block_weight.begin());
  }
  std::size_t block_size(int b) const { return b < 0 ? 0 : block_members[static_cast<std::size_t>(b)].size(); }
};

using BasisPtr = std::shared_ptr<const DegreeBasis>;

/// A block of a slice with machine-integer entries, stored by column.
struct BlockMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> columns;

  template <class F>
  std::vector<SparseVec<F>> field_columns(const F& f) const {
    std::vector<SparseVec<F>> out(cols);
    for (std::size_t c = 0; c < cols; ++c)
      for (const auto& [r, v] : columns[c]) {
        auto x = f.from_int(v);
        if (!F::is_zero(x)) out[c].emplace_back(r, x);
      }
    return out;
  }
  template <class F>
  std::vector<SparseVec<F>> field_rows(const F& f) const {
    std::vector<SparseVec<F>> out(rows);
    for (std::size_t c = 0; c < cols; ++c)
      for (const auto& [r, v] : columns[c]) {
        auto x = f.from_int(v);
        if (!F::is_zero(x)) out[r].emplace_back(static_cast<std::uint32_t>(c), x);
      }
    return out;
  }
  std::vector<std::vector<Integer>> dense() const {
    std::vector<std::vector<Integer>> m(rows, std::vector<Integer>(cols, 0));
    for (std::size_t c = 0; c < cols; ++c)
      for (const auto& [r, v] : columns[c]) m[r][c] = Integer(static_cast<long>(v));
    return m;
  }
  SparseMatrix sparse() const {
    std::vector<SparseMatrix::Entry> es;
    for (std::size_t c = 0; c < cols; ++c)
      for (const auto& [r, v] : columns[c]) es.push_back({r, static_cast<std::uint32_t>(c), Integer(static_cast<long>(v))});
    return SparseMatrix::from_triplets(rows, cols, std::move(es));
  }
};

class Slicer {
 public:
  struct Term {
    Exponent exp;
    std::int64_t coeff;
  };
  struct CachedEntry {
    std::uint32_t row;
    std::vector<Term> terms;
  };

  explicit Slicer(const FreeComplex& c, bool use_fine = true) : c_(c) {
    if (use_fine) weights_ = fine_generator_weights(c);
    for (int j = c.lo() + 1; j <= c.hi(); ++j) {
      const PolyMatrix& d = *c.differential_ptr(j);
      std::vector<std::vector<CachedEntry>> cols(d.cols());
      for (std::size_t col = 0; col < d.cols(); ++col)
        for (const auto& e : d.column(col)) {
          CachedEntry ce{e.row, {}};
          for (const auto& [x, v] : e.value.terms()) {
            if (!v.fits_slong_p()) throw std::overflow_error("differential coefficient exceeds machine range");
            ce.terms.push_back({x, v.get_si()});
          }
          cols[col].push_back(std::move(ce));
        }
      entries_.push_back(std::move(cols));
    }
  }

  const FreeComplex& complex() const { return c_; }
  bool fine() const { return weights_.has_value(); }
  const PolyRing& ring() const { return *c_.ring(); }

  Weight generator_weight(int j, std::size_t g) const {
    if (!weights_) return {};
    return (*weights_)[static_cast<std::size_t>(j - c_.lo())][g];
  }

  /// Columns of d_j as cached (row, terms) lists.
  const std::vector<CachedEntry>& column(int j, std::size_t col) const {
    return entries_[static_cast<std::size_t>(j - 1 - c_.lo())][col];
  }
  bool has_differential(int j) const { return c_.in_range(j) && c_.in_range(j - 1); }

  TablePtr table(const Multidegree& d) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = tables_.find(d);
    if (it != tables_.end()) return it->second;
    auto t = std::make_shared<const MonomialTable>(ring(), d);
    tables_.emplace(d, t);
    return t;
  }
  void clear_tables() {
    std::lock_guard<std::mutex> lock(mu_);
    tables_.clear();
  }

  BasisPtr basis(int j, const Multidegree& d) {
    auto b = std::make_shared<DegreeBasis>();
    b->j = j;
    b->d = d;
    const auto& gens = c_.module(j).gens;
    b->offset.push_back(0);
    std::map<Weight, std::vector<std::uint32_t>> blocks;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      Multidegree e = d + gens[g].twist;
      TablePtr t = e.nonnegative() ? table(e) : nullptr;
      if (t && t->size() == 0) t = nullptr;
      b->table.push_back(t);
      std::uint32_t base = b->offset.back();
      if (t && !fine()) {
        auto& dst = blocks[Weight{}];
        for (std::uint32_t m = 0; m < t->size(); ++m) dst.push_back(base + m);
      } else if (t) {
        Weight gw = generator_weight(j, g);
        for (const auto& grp : t->groups()) {
          auto& dst = blocks[add_weights(gw, grp.weight)];
          for (auto m : grp.members) dst.push_back(base + m);
        }
      }
      b->offset.push_back(base + static_cast<std::uint32_t>(t ? t->size() : 0));
    }
    b->block_of.assign(b->size(), 0);
    b->pos_in_block.assign(b->size(), 0);
    for (auto& [w, mem] : blocks) {
      std::sort(mem.begin(), mem.end());
      auto id = static_cast<std::uint32_t>(b->block_weight.size());
      for (std::uint32_t p = 0; p < mem.size(); ++p) {
        b->block_of[mem[p]] = id;
        b->pos_in_block[mem[p]] = p;
      }
      b->block_weight.push_back(w);
      b->block_members.push_back(std::move(mem));
    }
    return b;
  }

  /// Block of d_j in degree d: columns are block `col_block` of `src`
  /// (module j), rows are the block of `dst` (module j−1) with the same
  /// weight. Safe to call concurrently.
  BlockMatrix block(int j, const DegreeBasis& src, const DegreeBasis& dst, int col_block) const {
    BlockMatrix m;
    const auto& members = src.block_members[static_cast<std::size_t>(col_block)];
    int row_block = dst.find_block(src.block_weight[static_cast<std::size_t>(col_block)]);
    m.cols = members.size();
    m.rows = dst.block_size(row_block);
    m.columns.resize(m.cols);
    if (!has_differential(j) || row_block < 0) return m;
    for (std::size_t c = 0; c < members.size(); ++c) {
      auto [g, mi] = src.element(members[c]);
      const Exponent& mono = src.table[g]->at(mi);
      auto& col = m.columns[c];
      for (const auto& e : column(j, g))
        for (const auto& t : e.terms) {
          std::int64_t gl = dst.index(e.row, mono + t.exp);
          if (gl < 0) throw std::logic_error("slice row lookup failed; entry degree does not match twists");
          auto ugl = static_cast<std::uint32_t>(gl);
          if (static_cast<int>(dst.block_of[ugl]) != row_block)
            throw std::logic_error("differential does not preserve the torus weight");
          col.emplace_back(dst.pos_in_block[ugl], t.coeff);
        }
      std::sort(col.begin(), col.end());
      // merge repeated rows (only possible for non-generic inputs)
      std::size_t w = 0;
      for (std::size_t k = 0; k < col.size(); ++k) {
        if (w && col[w - 1].first == col[k].first) col[w - 1].second += col[k].second;
        else col[w++] = col[k];
      }
      col.resize(w);
      std::erase_if(col, [](const auto& p) { return p.second == 0; });
    }
    return m;
  }

  /// Full slice of d_j in degree d in the global generator-major order.
  SparseMatrix slice(int j, const Multidegree& d) {
    BasisPtr src = basis(j, d), dst = basis(j - 1, d);
    std::vector<SparseMatrix::Entry> es;
    for (std::size_t b = 0; b < src->blocks(); ++b) {
      BlockMatrix m = block(j, *src, *dst, static_cast<int>(b));
      int rb = dst->find_block(src->block_weight[b]);
      for (std::size_t c = 0; c < m.cols; ++c)
        for (const auto& [r, v] : m.columns[c])
          es.push_back({dst->block_members[static_cast<std::size_t>(rb)][r], src->block_members[b][c],
                        Integer(static_cast<long>(v))});
    }
    return SparseMatrix::from_triplets(dst->size(), src->size(), std::move(es));
  }

 private:
  const FreeComplex& c_;
  std::optional<std::vector<std::vector<Weight>>> weights_;
  std::vector<std::vector<std::vector<CachedEntry>>> entries_;
  std::mutex mu_;
  std::map<Multidegree, TablePtr> tables_;
};

/// Slice of d_j in degree d (rows: module j−1, columns: module j).
inline SparseMatrix slice(const FreeComplex& c, int j, const Multidegree& d) {
  Slicer s(c);
  return s.slice(j, d);
}

}  // namespace pfk
