#include <gtest/gtest.h>

#include "pfk/builders.hpp"
#include "pfk/hilbert.hpp"
#include "pfk/homology.hpp"

using namespace pfk;

namespace {

const CoeffDomain kZp = CoeffDomain::prime_field(32003);

const KoszulComplex& pfaffian_koszul(int n) {
  static std::map<int, KoszulComplex> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_pfaffian_koszul(PfaffianContext::make(n))).first;
  return it->second;
}

std::vector<std::size_t> hf_values(const std::map<Multidegree, std::size_t>& m) {
  std::vector<std::size_t> out;
  for (const auto& [d, v] : m) out.push_back(v);
  return out;
}

}  // namespace

TEST(HomologyDim, RegularSequenceIsAcyclic) {
  auto r = PolyRing::standard({"x", "y"});
  auto k = build_koszul({ZPoly::variable(r, 0), ZPoly::variable(r, 1)});
  for (int d = 0; d <= 6; ++d) {
    EXPECT_EQ(homology_dim(k.complex, 1, Multidegree(d), kZp).dim_homology, 0u);
    EXPECT_EQ(homology_dim(k.complex, 2, Multidegree(d), kZp).dim_homology, 0u);
  }
  EXPECT_EQ(homology_dim(k.complex, 0, Multidegree(0), kZp).dim_homology, 1u);
}

TEST(HomologyDim, CompleteIntersectionCase) {
  const auto& k = pfaffian_koszul(1);
  for (int j = 1; j <= 3; ++j)
    for (int d = 0; d <= 6; ++d) EXPECT_EQ(homology_dim(k.complex, j, Multidegree(d), kZp).dim_homology, 0u);
}

TEST(HomologyDim, FirstHomologyNTwoDegreeThree) {
  const auto& k = pfaffian_koszul(2);
  auto h = homology_dim(k.complex, 1, Multidegree(3), CoeffDomain::rationals());
  EXPECT_EQ(h.dim_homology, 5u);
  EXPECT_EQ(h.dim_homology, h.dim_cycles - h.dim_boundaries);
  // oracle: in degree 3 only K_0, K_1 are nonzero, with dims 220 and 5·10;
  // dim H_0(3) = HF(A/I)(3) = 175, so dim H_1(3) = 50 − (220 − 175) = 5
  EXPECT_EQ(chain_dim(k.complex, 2, Multidegree(3)), 0);
  EXPECT_EQ(chain_dim(k.complex, 1, Multidegree(3)) - (chain_dim(k.complex, 0, Multidegree(3)) - 175), 5);
  EXPECT_EQ(homology_dim(k.complex, 1, Multidegree(2), kZp).dim_homology, 0u);
}

TEST(HilbertFunction, NTwoValues) {
  const auto& k = pfaffian_koszul(2);
  auto h0 = hilbert_function(k.complex, 0, Multidegree(4), kZp);
  EXPECT_EQ(hf_values(h0), (std::vector<std::size_t>{1, 10, 50, 175, 490}));
  auto be = build_C(PfaffianContext::make(2), 0);
  for (const auto& [d, v] : h0) EXPECT_EQ(Integer(v), euler_hf(be, d));
  auto h2 = hilbert_function(k.complex, 2, Multidegree(8), kZp);
  for (int d = 0; d <= 4; ++d) EXPECT_EQ(h2.at(Multidegree(d)), 0u);
  for (int d = 5; d <= 8; ++d) EXPECT_EQ(Integer(h2.at(Multidegree(d))), euler_hf(be, Multidegree(d - 5))) << d;
}

TEST(HilbertFunction, VanishesAboveDeviation) {
  const auto& k = pfaffian_koszul(2);  // μ − g = 5 − 3 = 2
  for (int j = 3; j <= 5; ++j)
    for (const auto& [d, v] : hilbert_function(k.complex, j, Multidegree(7), kZp)) EXPECT_EQ(v, 0u) << j;
}

TEST(HomologyProperties, EulerCharacteristic) {
  const auto& k = pfaffian_koszul(2);
  auto table = homology_table(k.complex, degree_box(Multidegree(7)), 0, 5, PrimeField(32003));
  std::map<Multidegree, long> chi_h;
  for (const auto& h : table) chi_h[h.d] += (h.j % 2 ? -1 : 1) * long(h.dim_homology);
  for (const auto& [d, v] : chi_h) {
    Integer chi_k = 0;
    for (int j = 0; j <= 5; ++j) chi_k += (j % 2 ? -1 : 1) * chain_dim(k.complex, j, d);
    EXPECT_EQ(Integer(v), chi_k) << d.to_string();
  }
}

TEST(HomologyProperties, CharacteristicIndependence) {
  const auto& k = pfaffian_koszul(2);
  for (int j = 0; j <= 2; ++j) {
    auto q = hilbert_function(k.complex, j, Multidegree(6), CoeffDomain::rationals());
    EXPECT_EQ(hilbert_function(k.complex, j, Multidegree(6), kZp), q);
    EXPECT_EQ(hilbert_function(k.complex, j, Multidegree(6), CoeffDomain::prime_field(65521)), q);
  }
  auto hu = build_hu_koszul(HUContext::make(3));
  auto q = hilbert_function(hu.complex, 1, Multidegree(3, 2), CoeffDomain::rationals());
  EXPECT_EQ(hilbert_function(hu.complex, 1, Multidegree(3, 2), kZp), q);
}

TEST(HomologyProperties, BoundariesAreCycles) {
  const auto& k = pfaffian_koszul(2);
  for (int j = 1; j <= 3; ++j) {
    Multidegree d(2 * j + 2);
    auto dj = slice(k.complex, j, d), dj1 = slice(k.complex, j + 1, d);
    auto cycles = kernel_basis(dj, CoeffDomain::rationals());
    auto b = dj1.to_dense();
    for (std::size_t col = 0; col < dj1.cols(); ++col) {
      std::vector<Integer> v(dj1.rows());
      for (std::size_t r = 0; r < dj1.rows(); ++r) v[r] = b[r][col];
      EXPECT_TRUE(image_contains(cycles, v, CoeffDomain::rationals())) << "j=" << j << " col=" << col;
    }
  }
}

TEST(HomologyProperties, ThreadCountDoesNotChangeResults) {
  const auto& k = pfaffian_koszul(2);
  auto a = homology_table(k.complex, degree_box(Multidegree(6)), 0, 3, PrimeField(32003), 1);
  auto b = homology_table(k.complex, degree_box(Multidegree(6)), 0, 3, PrimeField(32003), 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    EXPECT_EQ(a[t].d, b[t].d);
    EXPECT_EQ(a[t].dim_cycles, b[t].dim_cycles);
    EXPECT_EQ(a[t].dim_homology, b[t].dim_homology);
  }
}

TEST(Torsion, NTwoIsFree) {
  const auto& k = pfaffian_koszul(2);
  auto t = torsion_report(k.complex, 1, Multidegree(3));
  EXPECT_EQ(t.free_rank, 5u);
  EXPECT_TRUE(t.torsion.empty());
  EXPECT_FALSE(t.heuristic);
  for (int j = 0; j <= 2; ++j)
    for (int d = 0; d <= 4; ++d) EXPECT_TRUE(torsion_report(k.complex, j, Multidegree(d)).torsion.empty());
}

TEST(Torsion, CompleteIntersectionIsTrivial) {
  const auto& k = pfaffian_koszul(1);
  for (int j = 1; j <= 3; ++j)
    for (int d = 0; d <= 4; ++d) {
      auto t = torsion_report(k.complex, j, Multidegree(d));
      EXPECT_EQ(t.free_rank, 0u);
      EXPECT_TRUE(t.torsion.empty());
    }
}

TEST(Torsion, DoubledEntryShowsTorsion) {
  auto k = pfaffian_koszul(2);
  auto [r, c] = first_entry(k.complex, 1);
  mutate_scale_entry(k.complex, 1, r, c, 2);
  auto t = torsion_report(k.complex, 0, Multidegree(2));
  EXPECT_EQ(t.torsion, (std::vector<Integer>{2}));
}

TEST(Torsion, HeuristicModeAboveLimit) {
  const auto& k = pfaffian_koszul(2);
  auto exact = torsion_report(k.complex, 1, Multidegree(4));
  auto h = torsion_report(k.complex, 1, Multidegree(4), 1);
  EXPECT_TRUE(h.heuristic);
  EXPECT_TRUE(h.suspect_primes.empty());
  EXPECT_EQ(h.free_rank, exact.free_rank);
}

TEST(MinimalBetti, PfaffianNTwo) {
  const auto& k = pfaffian_koszul(2);
  auto b1 = minimal_betti(k.complex, 1, Multidegree(5), kZp, true, false);
  EXPECT_EQ(b1.table.beta0, (DegreeTable{{Multidegree(3), 5}}));
  // H_top is cyclic, generated in the socle-dual degree 2n+1
  auto b2 = minimal_betti(k.complex, 2, Multidegree(7), kZp, true, false);
  EXPECT_EQ(b2.table.beta0, (DegreeTable{{Multidegree(5), 1}}));
}

TEST(MinimalBetti, HunekeUlrichNThree) {
  auto hu = build_hu_koszul(HUContext::make(3));
  auto b = minimal_betti(hu.complex, 1, Multidegree(4, 3), kZp);
  auto want = predicted_h1_presentation_shape(3);
  EXPECT_EQ(b.table.beta0, want.beta0);
  EXPECT_EQ(b.table.beta1, want.beta1);
}

TEST(Duality, NTwoPairings) {
  const auto& k = pfaffian_koszul(2);
  const int t = 2;
  for (int i = 0; i <= 1; ++i) {
    Multidegree pb(predicted_initial_degree(2, t - i) + 3);
    auto res = duality_pairing(k, i, t, degree_box(Multidegree(5)), pb, PrimeField(32003));
    for (const auto& row : res.rows) EXPECT_TRUE(row.perfect()) << "i=" << i << " d=" << row.d.to_string();
    if (i == 0) {
      EXPECT_EQ(res.rows[0].dim_source, 1u);
      EXPECT_EQ(res.rows[0].rank, 1u);
    } else {
      EXPECT_EQ(res.rows[2].dim_source, 0u);
      EXPECT_EQ(res.rows[3].dim_source, 5u);
      EXPECT_EQ(res.rows[3].rank, 5u);
    }
  }
}

TEST(RankCertificate, Examples) {
  auto ctx = PfaffianContext::make(2);
  auto c1 = be_rank_certificate(build_C(ctx, 1), 42, 32003);
  EXPECT_TRUE(c1.exact);
  EXPECT_EQ(c1.ranks, (std::vector<std::size_t>{5, 5, 5}));
  auto c0 = be_rank_certificate(build_C(ctx, 0), 42, 65521);
  EXPECT_TRUE(c0.exact);
  EXPECT_EQ(c0.ranks, (std::vector<std::size_t>{1, 4, 1}));
  FreeComplex zero(ctx.ring, 0, {GradedFreeModule{}}, {});
  EXPECT_TRUE(be_rank_certificate(zero, 42, 32003).exact);
}

TEST(RankCertificate, MutationBreaksRanks) {
  auto ctx = PfaffianContext::make(2);
  auto c = build_C(ctx, 1);
  // killing a whole column of d_3 makes d_3 non-injective
  auto d3 = c.differential(3);
  for (const auto& e : d3.column(0)) c.mutable_differential(3).set(e.row, 0, ZPoly(ctx.ring));
  EXPECT_FALSE(be_rank_certificate(c, 42, 32003).exact);
}
