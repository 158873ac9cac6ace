#pragma once

// Constructors for the named complexes: Koszul complexes (generic, on the
// 2n×2n Pfaffians, on the Huneke-Ulrich generators), the four-term complexes
// C^i, the explicit H_2 cycle, and predicted graded shapes.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfk/complex.hpp"
#include "pfk/pfaffian.hpp"

namespace pfk {

/// Koszul complex together with the exterior-algebra index of each
/// generator, so that products e_S ∧ e_T can be formed.
struct KoszulComplex {
  FreeComplex complex;
  int r = 0;
  std::vector<std::vector<IndexSet>> subset;  // [k][position] → S ⊂ [1, r]
  std::vector<std::map<IndexSet, std::uint32_t>> position;

  /// e_S ∧ e_T for generators ga of K_a and gb of K_b: returns the sign
  /// (0 when S ∩ T ≠ ∅) and the position of e_{S∪T} in K_{a+b}.
  int wedge(int a, std::uint32_t ga, int b, std::uint32_t gb, std::uint32_t& out) const {
    const IndexSet& s = subset[static_cast<std::size_t>(a)][ga];
    const IndexSet& t = subset[static_cast<std::size_t>(b)][gb];
    if (intersects(s, t)) return 0;
    out = position[static_cast<std::size_t>(a + b)].at(set_union(s, t));
    return shuffle_sign(s, t);
  }
};

struct KoszulLabel {
  int block = 0;  // label blocks appear in increasing order
  GeneratorLabel label;
};

/// Maps the Koszul index set S (with its twist) to a labelled generator.
using KoszulLabeler = std::function<KoszulLabel(const IndexSet&, const Multidegree&)>;

inline KoszulLabel plain_koszul_label(int r, const IndexSet& s, const Multidegree& twist) {
  return {0, GeneratorLabel::exterior(r, s, 0, twist)};
}

/// K(g_1, …, g_r; A) with d(e_S) = Σ_m (−1)^{m+1} g_{s_m} e_{S∖s_m}.
/// Generators of K_k are ordered by (label block, label subset in lex order).
inline KoszulComplex build_koszul(const std::vector<ZPoly>& gens, KoszulLabeler labeler = {},
                                  std::vector<Multidegree> degrees = {}) {
  if (gens.empty()) throw std::invalid_argument("Koszul complex needs at least one generator");
  RingPtr ring = gens[0].ring();
  const int r = static_cast<int>(gens.size());
  if (degrees.empty()) {
    for (std::size_t k = 0; k < gens.size(); ++k) {
      Multidegree d;
      if (gens[k].is_zero() || !gens[k].homogeneous_degree(d))
        throw std::invalid_argument("Koszul generator " + std::to_string(k + 1) + " is not homogeneous and nonzero");
      degrees.push_back(d);
    }
  }
  if (degrees.size() != gens.size()) throw std::invalid_argument("one degree per Koszul generator required");
  if (!labeler) labeler = [r](const IndexSet& s, const Multidegree& t) { return plain_koszul_label(r, s, t); };

  KoszulComplex kc;
  kc.r = r;
  std::vector<GradedFreeModule> mods;
  for (int k = 0; k <= r; ++k) {
    std::vector<std::pair<KoszulLabel, IndexSet>> items;
    for (auto& s : subsets(r, k)) {
      Multidegree tw = Multidegree::zero(ring->arity());
      for (int x : s) tw = tw - degrees[static_cast<std::size_t>(x - 1)];
      items.emplace_back(labeler(s, tw), s);
    }
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
      if (a.first.block != b.first.block) return a.first.block < b.first.block;
      return a.first.label.subset < b.first.label.subset;
    });
    GradedFreeModule m;
    std::vector<IndexSet> sub;
    std::map<IndexSet, std::uint32_t> pos;
    for (auto& [lab, s] : items) {
      pos[s] = static_cast<std::uint32_t>(sub.size());
      sub.push_back(s);
      m.gens.push_back(lab.label);
    }
    mods.push_back(std::move(m));
    kc.subset.push_back(std::move(sub));
    kc.position.push_back(std::move(pos));
  }
  std::vector<PolyMatrix> diffs;
  for (int k = 1; k <= r; ++k) {
    PolyMatrix d(mods[static_cast<std::size_t>(k - 1)].rank(), mods[static_cast<std::size_t>(k)].rank());
    const auto& cols = kc.subset[static_cast<std::size_t>(k)];
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const IndexSet& s = cols[c];
      for (std::size_t m = 0; m < s.size(); ++m) {
        IndexSet rest = s;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(m));
        std::uint32_t row = kc.position[static_cast<std::size_t>(k - 1)].at(rest);
        const ZPoly& g = gens[static_cast<std::size_t>(s[m] - 1)];
        d.add(row, c, m % 2 ? -g : g);  // (−1)^{m+1} with m 1-based
      }
    }
    diffs.push_back(std::move(d));
  }
  kc.complex = FreeComplex(ring, 0, std::move(mods), std::move(diffs));
  return kc;
}

/// K(Y_1, …, Y_{2n+1}; A) with K_j labelled ∧^{2n+1−j}E ⊗ (det E)^{j−1}:
/// the generator e_S carries the complement of S.
inline KoszulComplex build_pfaffian_koszul(const PfaffianContext& ctx) {
  const int N = ctx.N;
  return build_koszul(ctx.Y, [N](const IndexSet& s, const Multidegree& t) {
    return KoszulLabel{0, GeneratorLabel::exterior(N, complement(s, N), static_cast<int>(s.size()) - 1, t)};
  });
}

/// Koszul complex on (Φv)_1, …, (Φv)_{2n}, Pf Φ: K_k = ∧^kF(−k,−k) ⊕
/// (det F) ⊗ ∧^{k−1}F(1−k−n, 1−k), in that block order.
inline KoszulComplex build_hu_koszul(const HUContext& ctx) {
  const int N = ctx.N;
  return build_koszul(ctx.J, [N](const IndexSet& s, const Multidegree& t) {
    if (s.empty() || s.back() != N + 1) return KoszulLabel{0, GeneratorLabel::exterior(N, s, 0, t)};
    IndexSet rest(s.begin(), s.end() - 1);
    return KoszulLabel{1, GeneratorLabel::exterior(N, rest, 1, t)};
  });
}

/// Form of the middle map of C^i.
///  literal:  sgn(I',I'') sgn(I'',J) Pf(I''∪J), zero when I''∩J ≠ ∅.
///  weighted: sgn(I',I'') Σ_a c_a Q_a(I''·J), where Q_a is the signed sum
///            over perfect matchings of the concatenated sequence I'' then J
///            having exactly a pairs inside I'', and c_a ∝ 1/C(n−i+a, a).
/// Both agree for i = 0; only the weighted form gives d∘d = 0 for i ≥ 1.
enum class D2Form { weighted, literal };

namespace detail {

/// Σ over perfect matchings of seq with coefficient coef[a] for matchings
/// with a pairs among the first `head` positions; φ_xx = 0, φ_yx = −φ_xy.
inline std::vector<ZPoly::Term> matching_terms(const PfaffianContext& ctx, const std::vector<int>& seq, int head,
                                               const std::vector<long>& coef) {
  std::vector<ZPoly::Term> out;
  std::vector<int> idx(seq.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::function<void(std::vector<int>&, Exponent, int, int)> rec = [&](std::vector<int>& rem, Exponent e, int sign,
                                                                       int inner) {
    if (rem.empty()) {
      out.emplace_back(e, Integer(sign * coef[static_cast<std::size_t>(inner)]));
      return;
    }
    int p = rem[0];
    for (std::size_t t = 1; t < rem.size(); ++t) {
      int q = rem[t];
      int x = seq[static_cast<std::size_t>(p)], y = seq[static_cast<std::size_t>(q)];
      if (x == y) continue;
      int s = sign * (t % 2 ? 1 : -1) * (x < y ? 1 : -1);
      Exponent f = e + ctx.ring->variable(PfaffianContext::var_index(ctx.N, std::min(x, y), std::max(x, y)));
      std::vector<int> next;
      next.reserve(rem.size() - 2);
      for (std::size_t u = 1; u < rem.size(); ++u)
        if (u != t) next.push_back(rem[u]);
      rec(next, f, s, inner + (p < head && q < head ? 1 : 0));
    }
  };
  rec(idx, Exponent{}, 1, 0);
  return out;
}

inline Integer content(const PolyMatrix& m) {
  Integer g = 0;
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (const auto& e : m.column(c))
      for (const auto& t : e.value.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.second.get_mpz_t());
  return g;
}

}  // namespace detail

/// Integer weights c_a = L / C(n−i+a, a), a = 0..⌊(i+1)/2⌋, made primitive.
inline std::vector<long> d2_weights(int n, int i) {
  const int amax = (i + 1) / 2;
  long l = 1;
  for (int a = 0; a <= amax; ++a) l = std::lcm(l, static_cast<long>(choose(n - i + a, a)));
  std::vector<long> c;
  long g = 0;
  for (int a = 0; a <= amax; ++a) {
    c.push_back(l / static_cast<long>(choose(n - i + a, a)));
    g = std::gcd(g, c.back());
  }
  for (auto& x : c) x /= g;
  return c;
}

/// The complex C^i:
///   det⊗∧^{2n+1−i}E(−(2n+1−i)) → det⊗∧^{i+1}E(−n−1) → ∧^{2n−i}E(−(n−i)) → ∧^iE
/// in homological degrees 3, 2, 1, 0.
inline FreeComplex build_C(const PfaffianContext& ctx, int i, D2Form form = D2Form::weighted) {
  const int n = ctx.n, N = ctx.N;
  if (i < 0 || i > n - 1) throw std::out_of_range("C^i needs 0 <= i <= n-1");
  const int ar = ctx.ring->arity();
  auto tw = [ar](int t) { return ar == 1 ? Multidegree(t) : Multidegree(t, 0); };
  struct Spec {
    int k, det, twist;
  };
  const Spec specs[4] = {{i, 0, 0}, {2 * n - i, 0, -(n - i)}, {i + 1, 1, -(n + 1)}, {2 * n + 1 - i, 1, -(2 * n + 1 - i)}};
  std::vector<GradedFreeModule> mods(4);
  std::vector<std::map<IndexSet, std::uint32_t>> pos(4);
  for (int m = 0; m < 4; ++m)
    for (auto& s : subsets(N, specs[m].k)) {
      pos[static_cast<std::size_t>(m)][s] = static_cast<std::uint32_t>(mods[static_cast<std::size_t>(m)].gens.size());
      mods[static_cast<std::size_t>(m)].gens.push_back(GeneratorLabel::exterior(N, s, specs[m].det, tw(specs[m].twist)));
    }
  const PfaffianTable& pf = *ctx.phi;

  // d_1 and d_3 share one shape: e_I ↦ Σ sgn(I',I'') e_{I'} ⊗ Pf(I'').
  auto comult_map = [&](int src, int dst, int k) {
    PolyMatrix d(mods[static_cast<std::size_t>(dst)].rank(), mods[static_cast<std::size_t>(src)].rank());
    for (const auto& [s, col] : pos[static_cast<std::size_t>(src)])
      for (const auto& sp : comultiply(s, k)) {
        ZPoly p = pf.pf(sp.second);
        d.add(pos[static_cast<std::size_t>(dst)].at(sp.first), col, sp.sign > 0 ? p : -p);
      }
    return d;
  };
  PolyMatrix d1 = comult_map(1, 0, i);
  PolyMatrix d3 = comult_map(3, 2, i + 1);

  PolyMatrix d2(mods[1].rank(), mods[2].rank());
  const std::vector<long> coef = form == D2Form::weighted ? d2_weights(n, i) : std::vector<long>((i + 1) / 2 + 1, 1);
  for (const auto& [J, col] : pos[2])
    for (const auto& Ip : subsets(N, 2 * n - i)) {
      IndexSet Ipp = complement(Ip, N);
      int s = shuffle_sign(Ip, Ipp);
      ZPoly value(ctx.ring);
      if (form == D2Form::literal) {
        if (!intersects(Ipp, J)) {
          ZPoly p = pf.pf_union(Ipp, J);
          value = s * shuffle_sign(Ipp, J) > 0 ? p : -p;
        }
      } else {
        std::vector<int> seq(Ipp.begin(), Ipp.end());
        seq.insert(seq.end(), J.begin(), J.end());
        auto terms = detail::matching_terms(ctx, seq, static_cast<int>(Ipp.size()), coef);
        if (s < 0)
          for (auto& t : terms) t.second = -t.second;
        value = ZPoly::from_terms(ctx.ring, std::move(terms));
      }
      d2.add(pos[1].at(Ip), col, value);
    }
  if (form == D2Form::weighted) {
    Integer g = detail::content(d2);
    if (g > 1) {
      PolyMatrix scaled(d2.rows(), d2.cols());
      for (std::size_t c = 0; c < d2.cols(); ++c)
        for (const auto& e : d2.column(c)) {
          std::vector<ZPoly::Term> ts = e.value.terms();
          for (auto& t : ts) t.second /= g;
          scaled.set(e.row, c, ZPoly::from_terms(ctx.ring, std::move(ts)));
        }
      d2 = std::move(scaled);
    }
  }
  return FreeComplex(ctx.ring, 0, std::move(mods), {std::move(d1), std::move(d2), std::move(d3)});
}

/// M(v) for a polynomial matrix M and a vector of polynomials.
inline std::vector<ZPoly> apply(const PolyMatrix& m, const std::vector<ZPoly>& v, const RingPtr& ring) {
  if (v.size() != m.cols()) throw std::invalid_argument("vector length does not match matrix columns");
  std::vector<ZPoly> out(m.rows(), ZPoly(ring));
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (v[c].is_zero()) continue;
    for (const auto& e : m.column(c)) out[e.row] += e.value * v[c];
  }
  return out;
}

/// Σ_i y_i e_i∧f − Σ_{i<j} (−1)^{i+j} Pf(X(i,j)) e_i∧e_j in K_2 of the
/// Huneke-Ulrich Koszul complex, as coordinates on its generators.
inline std::vector<ZPoly> build_hu_h2_cycle(const HUContext& ctx, const KoszulComplex& k) {
  const int N = ctx.N;
  std::vector<ZPoly> z(k.complex.rank(2), ZPoly(ctx.ring));
  for (int i = 1; i <= N; ++i) z[k.position[2].at({i, N + 1})] += ctx.v[static_cast<std::size_t>(i - 1)];
  for (int i = 1; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j) {
      ZPoly p = ctx.Phi->pf(complement({i, j}, N));
      z[k.position[2].at({i, j})] += (i + j) % 2 ? p : -p;  // −(−1)^{i+j}
    }
  return z;
}

/// Table from (multi)degree to multiplicity.
using DegreeTable = std::map<Multidegree, std::int64_t>;

struct KustinShape {
  DegreeTable F1, F2, F3;
};

/// Graded ranks of F_1, F_2, F_3 in the minimal resolution of A/J
/// (n ≥ 3; the ∧³F(−3,−3) summand of F_3 is absent for n = 3).
inline KustinShape predicted_kustin_shape(int n) {
  if (n < 3) throw std::invalid_argument("n must be at least 3; n=2 is a codimension 3 Pfaffian ideal");
  const std::int64_t N = 2 * n;
  KustinShape s;
  s.F1[{1, 1}] += N;
  s.F1[{n, 0}] += 1;
  s.F2[{2, 2}] += choose(int(N), 2);
  s.F2[{n, 1}] += N;
  s.F2[{1, 2}] += 1;
  if (n > 3) s.F3[{3, 3}] += choose(int(N), 3);
  s.F3[{n, 2}] += choose(int(N), 2);
  s.F3[{2, 3}] += N;
  s.F3[{n + 1, 2}] += 1;
  return s;
}

struct PresentationShape {
  DegreeTable beta0, beta1, dropped;
};

/// Generators and minimal relations of H_1 of the Huneke-Ulrich Koszul
/// complex; `dropped` is the redundant (det F)(−n−1,−2) block.
inline PresentationShape predicted_h1_presentation_shape(int n) {
  if (n < 3) throw std::invalid_argument("n must be at least 3; n=2 is a codimension 3 Pfaffian ideal");
  const int N = 2 * n;
  PresentationShape s;
  s.beta0[{1, 2}] += 1;
  s.beta0[{n, 1}] += N;
  s.beta1[{2, 3}] += N;
  s.beta1[{n, 2}] += choose(N, 2);
  s.beta1[{n + 1, 1}] += N;
  s.dropped[{n + 1, 2}] += 1;
  return s;
}

/// Replaces entry (r, c) of d_j by its negative.
inline void mutate_flip_sign(FreeComplex& c, int j, std::size_t r, std::size_t col) {
  PolyMatrix& d = c.mutable_differential(j);
  auto v = d.at(r, col);
  if (!v) throw std::invalid_argument("no entry to flip at the given position");
  d.set(r, col, -*v);
}

/// Multiplies entry (r, c) of d_j by an integer factor.
inline void mutate_scale_entry(FreeComplex& c, int j, std::size_t r, std::size_t col, long factor) {
  PolyMatrix& d = c.mutable_differential(j);
  auto v = d.at(r, col);
  if (!v) throw std::invalid_argument("no entry to scale at the given position");
  d.set(r, col, v->scale(Integer(factor)));
}

/// First nonzero entry (row, column) of d_j, in column order.
inline std::pair<std::size_t, std::size_t> first_entry(const FreeComplex& c, int j) {
  const PolyMatrix& d = *c.differential_ptr(j);
  for (std::size_t col = 0; col < d.cols(); ++col)
    if (!d.column(col).empty()) return {d.column(col).front().row, col};
  throw std::invalid_argument("differential has no entries");
}

}  // namespace pfk
