#pragma once

// Degree-wise homology of complexes of free modules: dimensions, torsion,
// minimal generators and relations (β₀, β₁), the exterior-product pairing
// on Koszul homology, and Buchsbaum-Eisenbud rank certificates.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pfk/builders.hpp"
#include "pfk/linalg.hpp"
#include "pfk/parallel.hpp"
#include "pfk/slice.hpp"

namespace pfk {

// ---------------------------------------------------------------------------
// degree ranges

/// Graded order: total degree first, then lex.
inline bool graded_less(const Multidegree& a, const Multidegree& b) {
  if (a.total() != b.total()) return a.total() < b.total();
  return a < b;
}

/// All degrees 0 ≤ d ≤ bound (componentwise) in graded order.
inline std::vector<Multidegree> degree_box(const Multidegree& bound) {
  std::vector<Multidegree> out;
  if (bound.arity() == 1) {
    for (int a = 0; a <= bound[0]; ++a) out.emplace_back(a);
  } else {
    for (int a = 0; a <= bound[0]; ++a)
      for (int b = 0; b <= bound[1]; ++b) out.emplace_back(a, b);
  }
  std::sort(out.begin(), out.end(), graded_less);
  return out;
}

// ---------------------------------------------------------------------------
// ranks of blocks

template <class F>
std::size_t block_rank(const BlockMatrix& m, const F& f) {
  if (m.rows == 0 || m.cols == 0) return 0;
  if constexpr (std::is_same_v<F, RationalField>) {
    if (m.rows * m.cols <= detail::kBareissDenseLimit) return bareiss_rank(m.dense());
  }
  if (m.cols <= m.rows) {
    Echelon<F> e(f, m.rows);
    for (const auto& c : m.field_columns(f)) e.insert(c);
    return e.rank();
  }
  Echelon<F> e(f, m.cols);
  for (const auto& r : m.field_rows(f)) e.insert(r);
  return e.rank();
}

struct HomologySlice {
  int j = 0;
  Multidegree d;
  std::size_t dim_chains = 0;
  std::size_t dim_cycles = 0;
  std::size_t dim_boundaries = 0;
  std::size_t dim_homology = 0;
};

/// Homology dimensions of modules jlo..jhi in degree d over the field f.
/// Ranks are computed block by block, in parallel over blocks.
template <class F>
std::vector<HomologySlice> homology_at(Slicer& s, const Multidegree& d, int jlo, int jhi, const F& f, int threads = 1) {
  const FreeComplex& c = s.complex();
  std::map<int, BasisPtr> bases;
  for (int j = jlo - 1; j <= jhi + 1; ++j)
    if (c.in_range(j)) bases[j] = s.basis(j, d);
  struct Task {
    int j;
    int block;
  };
  std::vector<Task> tasks;
  for (int j = jlo; j <= jhi + 1; ++j) {
    if (!s.has_differential(j)) continue;
    const DegreeBasis& src = *bases.at(j);
    const DegreeBasis& dst = *bases.at(j - 1);
    for (std::size_t b = 0; b < src.blocks(); ++b)
      if (dst.find_block(src.block_weight[b]) >= 0) tasks.push_back({j, static_cast<int>(b)});
  }
  std::vector<std::size_t> ranks(tasks.size(), 0);
  parallel_for(tasks.size(), threads, [&](std::size_t t) {
    const auto& task = tasks[t];
    BlockMatrix m = s.block(task.j, *bases.at(task.j), *bases.at(task.j - 1), task.block);
    ranks[t] = block_rank(m, f);
  });
  std::map<int, std::size_t> rank_of;
  for (std::size_t t = 0; t < tasks.size(); ++t) rank_of[tasks[t].j] += ranks[t];
  std::vector<HomologySlice> out;
  for (int j = jlo; j <= jhi; ++j) {
    HomologySlice h;
    h.j = j;
    h.d = d;
    if (!c.in_range(j)) {
      out.push_back(h);
      continue;
    }
    h.dim_chains = bases.at(j)->size();
    h.dim_cycles = h.dim_chains - rank_of[j];
    h.dim_boundaries = rank_of[j + 1];
    if (h.dim_boundaries > h.dim_cycles) throw std::logic_error("boundaries exceed cycles: not a complex");
    h.dim_homology = h.dim_cycles - h.dim_boundaries;
    out.push_back(h);
  }
  return out;
}

/// Homology of every module jlo..jhi at every degree, ordered by (degree, j).
template <class F>
std::vector<HomologySlice> homology_table(const FreeComplex& c, const std::vector<Multidegree>& degrees, int jlo,
                                          int jhi, const F& f, int threads = 1) {
  Slicer s(c);
  std::vector<HomologySlice> out;
  for (const auto& d : degrees) {
    auto h = homology_at(s, d, jlo, jhi, f, threads);
    out.insert(out.end(), h.begin(), h.end());
  }
  return out;
}

inline HomologySlice homology_dim(const FreeComplex& c, int j, const Multidegree& d, const CoeffDomain& dom,
                                  int threads = 1) {
  return visit_field(dom, [&](auto f) { return homology_table(c, {d}, j, j, f, threads).front(); });
}

/// d ↦ dim H_j(d) for every degree in the box up to `bound`.
inline std::map<Multidegree, std::size_t> hilbert_function(const FreeComplex& c, int j, const Multidegree& bound,
                                                           const CoeffDomain& dom, int threads = 1) {
  std::map<Multidegree, std::size_t> out;
  visit_field(dom, [&](auto f) {
    for (const auto& h : homology_table(c, degree_box(bound), j, j, f, threads)) out[h.d] = h.dim_homology;
    return 0;
  });
  return out;
}

// ---------------------------------------------------------------------------
// torsion over Z

struct TorsionSlice {
  int j = 0;
  Multidegree d;
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // elementary divisors > 1
  bool heuristic = false;        // some block exceeded the SNF limit
  std::vector<std::uint32_t> suspect_primes;
};

/// H_j(d) ≅ Z^r ⊕ ⊕ Z/t_i. Since Z_j is saturated in K_j, the torsion of
/// H_j(d) equals the torsion of coker(d_{j+1}) in degree d, read off from
/// Smith normal forms of the blocks of d_{j+1}. Blocks with a side longer
/// than snf_limit fall back to comparing ranks over Q and small primes.
inline TorsionSlice torsion_report(Slicer& s, int j, const Multidegree& d, std::size_t snf_limit = 2000) {
  TorsionSlice t;
  t.j = j;
  t.d = d;
  const FreeComplex& c = s.complex();
  if (!c.in_range(j)) return t;
  BasisPtr K = s.basis(j, d);
  std::size_t rank_in = 0, rank_out = 0;
  if (s.has_differential(j)) {
    BasisPtr below = s.basis(j - 1, d);
    for (std::size_t b = 0; b < K->blocks(); ++b)
      if (below->find_block(K->block_weight[b]) >= 0)
        rank_out += block_rank(s.block(j, *K, *below, static_cast<int>(b)), RationalField{});
  }
  if (s.has_differential(j + 1)) {
    BasisPtr above = s.basis(j + 1, d);
    const std::uint32_t small_primes[] = {2, 3, 5, 7};
    for (std::size_t b = 0; b < above->blocks(); ++b) {
      if (K->find_block(above->block_weight[b]) < 0) continue;
      BlockMatrix m = s.block(j + 1, *above, *K, static_cast<int>(b));
      if (std::max(m.rows, m.cols) <= snf_limit) {
        auto divs = smith_normal_form(m.dense());
        rank_in += divs.size();
        for (auto& x : divs)
          if (x > 1) t.torsion.push_back(x);
      } else {
        t.heuristic = true;
        std::size_t rq = block_rank(m, RationalField{});
        rank_in += rq;
        for (auto p : small_primes)
          if (block_rank(m, PrimeField(p)) != rq) t.suspect_primes.push_back(p);
      }
    }
  }
  std::sort(t.torsion.begin(), t.torsion.end());
  std::sort(t.suspect_primes.begin(), t.suspect_primes.end());
  t.suspect_primes.erase(std::unique(t.suspect_primes.begin(), t.suspect_primes.end()), t.suspect_primes.end());
  t.free_rank = K->size() - rank_out - rank_in;
  return t;
}

inline TorsionSlice torsion_report(const FreeComplex& c, int j, const Multidegree& d, std::size_t snf_limit = 2000) {
  Slicer s(c);
  return torsion_report(s, j, d, snf_limit);
}

// ---------------------------------------------------------------------------
// vectors on slices

/// Multiplies a vector on block `from_block` of `from` by the monomial m,
/// landing in block `to_block` of `to`.
template <class F>
SparseVec<F> shift_vector(const DegreeBasis& from, int from_block, const SparseVec<F>& v, const Exponent& m,
                          const DegreeBasis& to, int to_block) {
  SparseVec<F> out;
  out.reserve(v.size());
  const auto& members = from.block_members[static_cast<std::size_t>(from_block)];
  for (const auto& [pos, x] : v) {
    auto [g, mi] = from.element(members[pos]);
    std::int64_t gl = to.index(g, from.table[g]->at(mi) + m);
    if (gl < 0 || static_cast<int>(to.block_of[static_cast<std::size_t>(gl)]) != to_block)
      throw std::logic_error("monomial shift left the expected block");
    out.emplace_back(to.pos_in_block[static_cast<std::size_t>(gl)], x);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

/// Integer coordinates of a module element (one polynomial per generator)
/// on the global basis of its slice; every term must lie in degree d.
inline std::vector<Integer> element_vector(const DegreeBasis& b, const std::vector<ZPoly>& coords) {
  std::vector<Integer> v(b.size(), 0);
  for (std::size_t g = 0; g < coords.size(); ++g)
    for (const auto& [e, x] : coords[g].terms()) {
      std::int64_t gl = b.index(static_cast<std::uint32_t>(g), e);
      if (gl < 0) throw std::invalid_argument("element is not homogeneous of the slice degree");
      v[static_cast<std::size_t>(gl)] += x;
    }
  return v;
}

// ---------------------------------------------------------------------------
// homology bases with normal forms

/// Lazily computed per-block data of H_j = ker d_j / im d_{j+1} (or of
/// ker d_j alone when quotient = false) in each degree: the echelon of
/// boundaries, whose reduce() is a canonical normal form modulo B, and a
/// basis of homology representatives.
template <class F>
class HomologyCache {
 public:
  struct Block {
    std::optional<Echelon<F>> boundaries;
    std::optional<std::vector<SparseVec<F>>> reps;
  };
  struct Degree {
    BasisPtr K;
    std::vector<Block> blocks;
  };

  HomologyCache(Slicer& s, int j, F f, bool quotient = true) : s_(s), j_(j), f_(std::move(f)), quotient_(quotient) {}

  int module() const { return j_; }

  Degree& degree(const Multidegree& d) {
    auto it = cache_.find(d);
    if (it != cache_.end()) return it->second;
    Degree dg;
    dg.K = s_.basis(j_, d);
    dg.blocks.resize(dg.K->blocks());
    return cache_.emplace(d, std::move(dg)).first->second;
  }

  const Echelon<F>& boundaries(const Multidegree& d, int b) {
    Degree& dg = degree(d);
    Block& blk = dg.blocks[static_cast<std::size_t>(b)];
    if (!blk.boundaries) {
      Echelon<F> e(f_, dg.K->block_size(b));
      if (quotient_ && s_.has_differential(j_ + 1)) {
        BasisPtr above = above_basis(d);
        int ab = above->find_block(dg.K->block_weight[static_cast<std::size_t>(b)]);
        if (ab >= 0)
          for (const auto& col : s_.block(j_ + 1, *above, *dg.K, ab).field_columns(f_)) e.insert(col);
      }
      blk.boundaries = std::move(e);
    }
    return *blk.boundaries;
  }

  /// Cycles of block b in degree d (kernel basis of the d_j block).
  std::vector<SparseVec<F>> cycles(const Multidegree& d, int b) {
    Degree& dg = degree(d);
    const std::size_t n = dg.K->block_size(b);
    if (!s_.has_differential(j_)) {
      std::vector<SparseVec<F>> id(n);
      for (std::uint32_t k = 0; k < n; ++k) id[k].emplace_back(k, f_.one());
      return id;
    }
    BasisPtr below = below_basis(d);
    BlockMatrix m = s_.block(j_, *dg.K, *below, b);
    return kernel_of_rows(f_, m.field_rows(f_), n);
  }

  /// Homology representatives of block b: cycles independent modulo B.
  const std::vector<SparseVec<F>>& reps(const Multidegree& d, int b) {
    Degree& dg = degree(d);
    Block& blk = dg.blocks[static_cast<std::size_t>(b)];
    if (!blk.reps) {
      Echelon<F> e = boundaries(d, b);
      std::vector<SparseVec<F>> r;
      for (auto& z : cycles(d, b))
        if (e.insert(z)) r.push_back(std::move(z));
      blk.reps = std::move(r);
    }
    return *blk.reps;
  }

  /// Normal form modulo boundaries of a vector on block b.
  SparseVec<F> normal_form(const Multidegree& d, int b, const SparseVec<F>& v) { return boundaries(d, b).reduce(v); }

  void forget(const Multidegree& d) {
    cache_.erase(d);
    above_.erase(d);
    below_.erase(d);
  }

 private:
  BasisPtr above_basis(const Multidegree& d) {
    auto it = above_.find(d);
    if (it != above_.end()) return it->second;
    return above_[d] = s_.basis(j_ + 1, d);
  }
  BasisPtr below_basis(const Multidegree& d) {
    auto it = below_.find(d);
    if (it != below_.end()) return it->second;
    return below_[d] = s_.basis(j_ - 1, d);
  }

  Slicer& s_;
  int j_;
  F f_;
  bool quotient_;
  std::map<Multidegree, Degree> cache_;
  std::map<Multidegree, BasisPtr> above_, below_;
};

// ---------------------------------------------------------------------------
// minimal generators and relations

struct BettiTable {
  DegreeTable beta0;
  DegreeTable beta1;
};

/// Minimal presentation data of H_j (or of the cycle module Z_j) computed
/// degree by degree over a field, up to a degree bound.
///   β₀(d) = dim H(d) − dim (m·H)(d), where m·H(d) is spanned by variable
///           multiples of homology bases in lower degrees;
///   β₁(d) = dim R(d) − dim (m·R)(d), where R(d) is the kernel of the map
///           from the free module on the chosen minimal generators to H(d).
template <class F>
class Presentation {
 public:
  struct Generator {
    Multidegree deg;
    Weight weight;
    int block;
    SparseVec<F> vec;  // on block `block` of the slice in degree deg
  };
  /// One entry (generator k, monomial index in table(d − deg_k)).
  struct GElem {
    std::uint32_t gen;
    std::uint32_t mono;
  };
  struct Relation {
    Multidegree deg;
    Weight weight;
    std::vector<std::pair<GElem, typename F::value_type>> terms;
  };

  Presentation(Slicer& s, int j, F f, bool quotient = true, bool relations = true)
      : s_(s), j_(j), f_(f), relations_(relations), H_(s, j, f, quotient) {}

  /// Processes every degree of the box up to `bound` in graded order.
  void run(const Multidegree& bound) {
    for (const auto& d : degree_box(bound)) step(d);
  }

  const std::vector<Generator>& generators() const { return gens_; }
  const std::vector<Relation>& relations() const { return rels_; }
  HomologyCache<F>& homology() { return H_; }

  BettiTable table() const {
    BettiTable t;
    for (const auto& g : gens_) ++t.beta0[g.deg];
    for (const auto& r : rels_) ++t.beta1[r.deg];
    return t;
  }

  /// Exponent of the monomial of a free-module element.
  const Exponent& gelem_monomial(const Multidegree& d, const GElem& e) {
    return s_.table(d - gens_[e.gen].deg)->at(e.mono);
  }

  /// m · g_k as a vector on the slice in degree deg_k + deg m.
  SparseVec<F> generator_times(std::uint32_t k, const Exponent& m, const Multidegree& d, int& block_out) {
    const Generator& g = gens_[k];
    auto& src = H_.degree(g.deg);
    auto& dst = H_.degree(d);
    Weight w = add_weights(g.weight, s_.ring().weight_of(m));
    if (!s_.fine()) w = {};
    block_out = dst.K->find_block(w);
    if (block_out < 0) return {};
    return shift_vector<F>(*src.K, g.block, g.vec, m, *dst.K, block_out);
  }

 private:
  struct GBlock {
    std::vector<GElem> elems;
    std::unordered_map<std::uint64_t, std::uint32_t> pos;
    std::vector<SparseVec<F>> basis;  // spans R in this degree and weight
  };

  static std::uint64_t key(std::uint32_t g, std::uint32_t m) { return (std::uint64_t(g) << 32) | m; }

  Weight var_weight(std::size_t v) const { return s_.fine() ? s_.ring().weights()[v] : Weight{}; }
  static Weight sub_weights(const Weight& a, const Weight& b) {
    if (b.empty()) return a;
    Weight r = a;
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
    return r;
  }

  void step(const Multidegree& d) {
    auto& dg = H_.degree(d);
    const PolyRing& ring = s_.ring();
    for (std::size_t b = 0; b < dg.K->blocks(); ++b) {
      const int bi = static_cast<int>(b);
      const Weight& w = dg.K->block_weight[b];
      Echelon<F> E = H_.boundaries(d, bi);
      std::vector<SparseVec<F>> span;
      for (std::size_t v = 0; v < ring.nvars(); ++v) {
        Multidegree dl = d - ring.degree(v);
        if (!dl.nonnegative() || !seen_.count(dl)) continue;
        auto& lower = H_.degree(dl);
        int lb = lower.K->find_block(sub_weights(w, var_weight(v)));
        if (lb < 0) continue;
        auto& hb = hbasis_[{dl, lb}];
        for (const auto& h : hb) {
          SparseVec<F> p = shift_vector<F>(*lower.K, lb, h, ring.variable(v), *dg.K, bi);
          if (E.insert(p)) span.push_back(std::move(p));
        }
      }
      for (auto& z : H_.cycles(d, bi))
        if (E.insert(z)) {
          gens_.push_back({d, w, bi, z});
          span.push_back(std::move(z));
        }
      hbasis_[{d, bi}] = std::move(span);
    }
    seen_.insert(d);
    if (relations_) relation_step(d);
  }

  void relation_step(const Multidegree& d) {
    const PolyRing& ring = s_.ring();
    // free-module elements of degree d grouped by weight
    std::map<Weight, GBlock> blocks;
    for (std::uint32_t k = 0; k < gens_.size(); ++k) {
      const Generator& g = gens_[k];
      Multidegree e = d - g.deg;
      if (!e.nonnegative()) continue;
      TablePtr t = s_.table(e);
      for (const auto& grp : t->groups()) {
        Weight w = s_.fine() ? add_weights(g.weight, grp.weight) : Weight{};
        GBlock& gb = blocks[w];
        for (auto m : grp.members) {
          gb.pos[key(k, m)] = static_cast<std::uint32_t>(gb.elems.size());
          gb.elems.push_back({k, m});
        }
      }
    }
    auto& dg = H_.degree(d);
    for (auto& [w, gb] : blocks) {
      const std::size_t n = gb.elems.size();
      // normal forms of m·g_k modulo boundaries, as columns
      std::vector<std::vector<std::pair<std::uint32_t, typename F::value_type>>> rows;
      int bi = dg.K->find_block(w);
      if (bi >= 0) {
        rows.resize(dg.K->block_size(bi));
        for (std::uint32_t c = 0; c < n; ++c) {
          const GElem& el = gb.elems[c];
          int blk = -1;
          SparseVec<F> v = generator_times(el.gen, gelem_monomial(d, el), d, blk);
          if (blk != bi) throw std::logic_error("generator multiple left its weight block");
          for (const auto& [r, x] : H_.normal_form(d, bi, v)) rows[r].emplace_back(c, x);
        }
      }
      std::vector<SparseVec<F>> kernel = kernel_of_rows(f_, rows, n);
      Echelon<F> E(f_, n);
      std::vector<SparseVec<F>> span;
      for (std::size_t v = 0; v < ring.nvars(); ++v) {
        Multidegree dl = d - ring.degree(v);
        if (!dl.nonnegative()) continue;
        auto it = gblocks_.find({dl, sub_weights(w, var_weight(v))});
        if (it == gblocks_.end()) continue;
        const GBlock& lower = it->second;
        for (const auto& r : lower.basis) {
          SparseVec<F> p;
          for (const auto& [pos, x] : r) {
            const GElem& el = lower.elems[pos];
            Exponent m = gelem_monomial(dl, el) + ring.variable(v);
            std::int64_t mi = s_.table(d - gens_[el.gen].deg)->find(m);
            p.emplace_back(gb.pos.at(key(el.gen, static_cast<std::uint32_t>(mi))), x);
          }
          std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
          if (E.insert(p)) span.push_back(std::move(p));
        }
      }
      for (auto& r : kernel)
        if (E.insert(r)) {
          Relation rel{d, w, {}};
          for (const auto& [pos, x] : r) rel.terms.push_back({gb.elems[pos], x});
          rels_.push_back(std::move(rel));
          span.push_back(std::move(r));
        }
      gb.basis = std::move(span);
    }
    for (auto& [w, gb] : blocks)
      if (!gb.basis.empty()) gblocks_.emplace(std::make_pair(d, w), std::move(gb));
  }

  Slicer& s_;
  int j_;
  F f_;
  bool relations_;
  HomologyCache<F> H_;
  std::vector<Generator> gens_;
  std::vector<Relation> rels_;
  std::set<Multidegree> seen_;
  std::map<std::pair<Multidegree, int>, std::vector<SparseVec<F>>> hbasis_;
  std::map<std::pair<Multidegree, Weight>, GBlock> gblocks_;
};

struct BettiResult {
  BettiTable table;
  Multidegree bound;
};

/// β₀ and β₁ of H_j (quotient = true) or of Z_j = ker d_j (quotient =
/// false) in every degree up to `bound`.
inline BettiResult minimal_betti(const FreeComplex& c, int j, const Multidegree& bound, const CoeffDomain& dom,
                                 bool quotient = true, bool relations = true) {
  return visit_field(dom, [&](auto f) {
    Slicer s(c);
    Presentation<decltype(f)> p(s, j, f, quotient, relations);
    p.run(bound);
    return BettiResult{p.table(), bound};
  });
}

// ---------------------------------------------------------------------------
// the exterior-product pairing H_i × H_{t−i} → H_t

struct DualityRow {
  Multidegree d;
  std::size_t dim_source = 0;  // dim H_i(d)
  std::size_t dim_hom = 0;     // dim Hom(H_{t−i}, H_t)_d
  std::size_t rank = 0;        // rank of H_i(d) → Hom_d
  bool perfect() const { return rank == dim_source && rank == dim_hom; }
};

struct DualityResult {
  int i = 0, t = 0;
  BettiTable partner;  // presentation of H_{t−i} used for Hom
  std::vector<DualityRow> rows;
};

namespace detail {

/// z ∧ w for z on block zb of K_a(dz) and w on block wb of K_b(dw); the
/// result lies on block `tb` of K_{a+b}(dz+dw).
template <class F>
SparseVec<F> wedge_vectors(const KoszulComplex& kc, const F& f, const DegreeBasis& Ka, int zb, const SparseVec<F>& z,
                           const DegreeBasis& Kb, int wb, const SparseVec<F>& w, const DegreeBasis& Kt, int tb) {
  std::map<std::uint32_t, typename F::value_type> acc;
  const auto& ma = Ka.block_members[static_cast<std::size_t>(zb)];
  const auto& mb = Kb.block_members[static_cast<std::size_t>(wb)];
  for (const auto& [p, x] : z) {
    auto [ga, mia] = Ka.element(ma[p]);
    const Exponent& ea = Ka.table[ga]->at(mia);
    for (const auto& [q, y] : w) {
      auto [gb, mib] = Kb.element(mb[q]);
      std::uint32_t g = 0;
      int sign = kc.wedge(Ka.j, ga, Kb.j, gb, g);
      if (!sign) continue;
      std::int64_t gl = Kt.index(g, ea + Kb.table[gb]->at(mib));
      if (gl < 0 || static_cast<int>(Kt.block_of[static_cast<std::size_t>(gl)]) != tb)
        throw std::logic_error("wedge product left the expected block");
      auto xy = f.mul(x, y);
      auto& slot = acc.try_emplace(Kt.pos_in_block[static_cast<std::size_t>(gl)], f.zero()).first->second;
      slot = sign > 0 ? f.add(slot, xy) : f.sub(slot, xy);
    }
  }
  SparseVec<F> out;
  for (const auto& [k, v] : acc)
    if (!F::is_zero(v)) out.emplace_back(k, v);
  return out;
}

}  // namespace detail

/// For each degree d, the map H_i(d) → Hom_A(H_{t−i}, H_t)_d induced by
/// exterior multiplication, z ↦ (g_k ↦ [z ∧ g_k]) over minimal generators
/// g_k of H_{t−i}. Hom_d is the kernel of the relation map on
/// ⊕_k H_t(d + deg g_k); relations of H_{t−i} are taken up to
/// `partner_bound`. The pairing is perfect in degree d iff its rank equals
/// both dimensions.
template <class F>
DualityResult duality_pairing(const KoszulComplex& kc, int i, int t, const std::vector<Multidegree>& degrees,
                              const Multidegree& partner_bound, const F& f) {
  const FreeComplex& c = kc.complex;
  Slicer s(c);
  DualityResult res;
  res.i = i;
  res.t = t;
  Presentation<F> partner(s, t - i, f);
  partner.run(partner_bound);
  res.partner = partner.table();
  HomologyCache<F> Hi(s, i, f), Ht(s, t, f);
  const auto& gens = partner.generators();
  const auto& rels = partner.relations();
  auto& Hp = partner.homology();
  auto wsum = [&](const Weight& a, const Weight& b) { return s.fine() ? add_weights(a, b) : Weight{}; };
  auto wdiff = [&](const Weight& a, const Weight& b) {
    if (!s.fine()) return Weight{};
    Weight r = a;
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
    return r;
  };

  for (const auto& d : degrees) {
    DualityRow row;
    row.d = d;
    auto& src = Hi.degree(d);
    // pairing rank, block by block
    for (std::size_t b = 0; b < src.K->blocks(); ++b) {
      const auto& reps = Hi.reps(d, static_cast<int>(b));
      if (reps.empty()) continue;
      row.dim_source += reps.size();
      std::vector<std::size_t> offset;
      std::vector<int> tblock;
      std::size_t total = 0;
      for (const auto& g : gens) {
        auto& dst = Ht.degree(d + g.deg);
        int tb = dst.K->find_block(wsum(src.K->block_weight[b], g.weight));
        offset.push_back(total);
        tblock.push_back(tb);
        total += dst.K->block_size(tb);
      }
      Echelon<F> E(f, total);
      for (const auto& z : reps) {
        SparseVec<F> image;
        for (std::size_t k = 0; k < gens.size(); ++k) {
          if (tblock[k] < 0) continue;
          auto& gdeg = Hp.degree(gens[k].deg);
          auto& dst = Ht.degree(d + gens[k].deg);
          SparseVec<F> prod = detail::wedge_vectors(kc, f, *src.K, static_cast<int>(b), z, *gdeg.K, gens[k].block,
                                                    gens[k].vec, *dst.K, tblock[k]);
          for (const auto& [p, x] : Ht.normal_form(d + gens[k].deg, tblock[k], prod))
            image.emplace_back(static_cast<std::uint32_t>(offset[k] + p), x);
        }
        E.insert(image);
      }
      row.rank += E.rank();
    }
    // Hom_d by weight: candidate weights come from the blocks of H_t
    std::set<Weight> weights;
    for (const auto& g : gens) {
      auto& dst = Ht.degree(d + g.deg);
      for (std::size_t b = 0; b < dst.K->blocks(); ++b) weights.insert(wdiff(dst.K->block_weight[b], g.weight));
    }
    for (const auto& w : weights) {
      // columns: (k, representative) pairs
      struct Col {
        std::size_t k;
        int block;
        const SparseVec<F>* rep;
      };
      std::vector<Col> cols;
      for (std::size_t k = 0; k < gens.size(); ++k) {
        Multidegree e = d + gens[k].deg;
        auto& dst = Ht.degree(e);
        int tb = dst.K->find_block(wsum(w, gens[k].weight));
        if (tb < 0) continue;
        for (const auto& r : Ht.reps(e, tb)) cols.push_back({k, tb, &r});
      }
      if (cols.empty()) continue;
      // rows: each relation's target block in H_t(d + deg r)
      std::vector<std::size_t> roff;
      std::vector<int> rblock;
      std::size_t total = 0;
      for (const auto& r : rels) {
        auto& dst = Ht.degree(d + r.deg);
        int tb = dst.K->find_block(wsum(w, r.weight));
        roff.push_back(total);
        rblock.push_back(tb);
        total += dst.K->block_size(tb);
      }
      std::vector<SparseVec<F>> images;
      for (const auto& col : cols) {
        Multidegree e = d + gens[col.k].deg;
        auto& from = Ht.degree(e);
        SparseVec<F> image;
        for (std::size_t r = 0; r < rels.size(); ++r) {
          if (rblock[r] < 0) continue;
          Multidegree er = d + rels[r].deg;
          auto& to = Ht.degree(er);
          std::map<std::uint32_t, typename F::value_type> acc;
          for (const auto& [el, coef] : rels[r].terms) {
            if (el.gen != col.k) continue;
            const Exponent& m = partner.gelem_monomial(rels[r].deg, el);
            SparseVec<F> sh = shift_vector<F>(*from.K, col.block, *col.rep, m, *to.K, rblock[r]);
            for (const auto& [p, x] : sh) {
              auto& slot = acc.try_emplace(p, f.zero()).first->second;
              slot = f.add(slot, f.mul(coef, x));
            }
          }
          SparseVec<F> v;
          for (const auto& [p, x] : acc)
            if (!F::is_zero(x)) v.emplace_back(p, x);
          for (const auto& [p, x] : Ht.normal_form(er, rblock[r], v))
            image.emplace_back(static_cast<std::uint32_t>(roff[r] + p), x);
        }
        images.push_back(std::move(image));
      }
      Echelon<F> E(f, total);
      for (const auto& v : images) E.insert(v);
      row.dim_hom += cols.size() - E.rank();
    }
    res.rows.push_back(row);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Buchsbaum-Eisenbud rank certificate

struct RankCertificate {
  std::uint32_t prime = 0;
  std::uint64_t seed = 0;              // seed of the point actually used
  std::vector<std::size_t> ranks;      // rank d_j for j = lo+1..hi
  std::vector<std::size_t> modules;    // rank of module j for j = lo..hi
  bool exact = false;                  // rank conditions hold
  bool reseeded = false;
};

/// Uniform residues mod p from a 64-bit Mersenne twister by rejection.
inline std::vector<std::uint32_t> random_point(std::size_t nvars, std::uint32_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::uint64_t limit = (~0ull / p) * p;
  std::vector<std::uint32_t> out(nvars);
  for (auto& x : out) {
    std::uint64_t r;
    do r = rng();
    while (r >= limit);
    x = static_cast<std::uint32_t>(r % p);
  }
  return out;
}

/// Ranks of every differential at a random F_p point.
inline std::vector<std::size_t> specialized_ranks(const FreeComplex& c, const std::vector<std::uint32_t>& point,
                                                  const PrimeField& f) {
  std::vector<std::size_t> out;
  for (int j = c.lo() + 1; j <= c.hi(); ++j) {
    const PolyMatrix& d = *c.differential_ptr(j);
    std::vector<SparseVec<PrimeField>> cols(d.cols());
    for (std::size_t col = 0; col < d.cols(); ++col)
      for (const auto& e : d.column(col)) {
        auto v = evaluate(e.value, point, f);
        if (v) cols[col].emplace_back(e.row, v);
      }
    Echelon<PrimeField> E(f, d.rows());
    for (const auto& col : cols) E.insert(col);
    out.push_back(E.rank());
  }
  return out;
}

/// rank d_k + rank d_{k+1} = rank F_k for interior k, and d_top injective.
inline bool be_rank_condition(const FreeComplex& c, const std::vector<std::size_t>& ranks) {
  auto rk = [&](int j) -> std::size_t {
    if (j <= c.lo() || j > c.hi()) return 0;
    return ranks[static_cast<std::size_t>(j - c.lo() - 1)];
  };
  for (int k = c.lo() + 1; k < c.hi(); ++k)
    if (rk(k) + rk(k + 1) != c.rank(k)) return false;
  if (c.hi() > c.lo() && rk(c.hi()) != c.rank(c.hi())) return false;
  return true;
}

inline RankCertificate be_rank_certificate(const FreeComplex& c, std::uint64_t seed, std::uint32_t prime) {
  PrimeField f(prime);
  RankCertificate cert;
  cert.prime = prime;
  for (int j = c.lo(); j <= c.hi(); ++j) cert.modules.push_back(c.rank(j));
  for (int attempt = 0; attempt < 2; ++attempt) {
    cert.seed = seed + static_cast<std::uint64_t>(attempt);
    cert.reseeded = attempt > 0;
    cert.ranks = specialized_ranks(c, random_point(c.ring()->nvars(), prime, cert.seed), f);
    cert.exact = be_rank_condition(c, cert.ranks);
    if (cert.exact) break;
  }
  return cert;
}

}  // namespace pfk
