#include <gtest/gtest.h>

#include <random>

#include "pfk/builders.hpp"
#include "pfk/complex_json.hpp"
#include "pfk/homology.hpp"
#include "pfk/slice.hpp"

using namespace pfk;

namespace {

KoszulComplex koszul_xy() {
  auto r = PolyRing::standard({"x", "y"});
  return build_koszul({ZPoly::variable(r, 0), ZPoly::variable(r, 1)});
}

GradedFreeModule scalars(std::initializer_list<int> twists) {
  GradedFreeModule m;
  for (int t : twists) m.gens.push_back(GeneratorLabel::scalar_label(0, Multidegree(t)));
  return m;
}

ZPoly random_form(std::mt19937_64& rng, const RingPtr& r, int deg) {
  if (deg < 0) return ZPoly(r);
  auto basis = monomial_basis(*r, Multidegree(deg));
  std::vector<ZPoly::Term> ts;
  for (int k = 0; k < 3; ++k) ts.emplace_back(basis[rng() % basis.size()], Integer(long(rng() % 7) - 3));
  return ZPoly::from_terms(r, ts);
}

PolyMatrix random_map(std::mt19937_64& rng, const RingPtr& r, const GradedFreeModule& dst, const GradedFreeModule& src) {
  PolyMatrix m(dst.rank(), src.rank());
  for (std::size_t i = 0; i < dst.rank(); ++i)
    for (std::size_t j = 0; j < src.rank(); ++j) {
      auto p = random_form(rng, r, dst.gens[i].twist[0] - src.gens[j].twist[0]);
      if (!p.is_zero()) m.set(i, j, p);
    }
  return m;
}

std::vector<std::vector<Integer>> matmul(const std::vector<std::vector<Integer>>& a,
                                         const std::vector<std::vector<Integer>>& b, std::size_t rows,
                                         std::size_t inner, std::size_t cols) {
  std::vector<std::vector<Integer>> out(rows, std::vector<Integer>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < inner; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

std::vector<std::size_t> graded_ranks(const FreeComplex& c, int j) {
  std::vector<std::size_t> out;
  for (const auto& g : c.module(j).gens) out.push_back(static_cast<std::size_t>(-g.twist[0]));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(VerifyComplex, KoszulPasses) {
  auto k = koszul_xy();
  auto r = verify_complex(k.complex);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.pairs_checked, 1u);
}

TEST(VerifyComplex, FlippedSignFailsAtPosition) {
  auto k = koszul_xy();
  auto [row, col] = first_entry(k.complex, 2);
  mutate_flip_sign(k.complex, 2, row, col);
  auto r = verify_complex(k.complex);
  ASSERT_FALSE(r.ok);
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0].j, 1);
  EXPECT_EQ(r.failures[0].row, 0u);
  EXPECT_EQ(r.failures[0].col, 0u);
}

TEST(VerifyComplex, COneForNTwoPasses) {
  auto ctx = PfaffianContext::make(2);
  auto c = build_C(ctx, 1);
  auto r = verify_complex(c);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.pairs_checked, 2u);
}

TEST(VerifyComplex, InhomogeneousEntryIsReported) {
  auto r = PolyRing::standard({"x", "y"});
  PolyMatrix d(1, 1);
  d.set(0, 0, ZPoly::variable(r, 0) * ZPoly::variable(r, 1));
  FreeComplex c(r, 0, {scalars({0}), scalars({-1})}, {d});
  try {
    verify_complex(c);
    FAIL();
  } catch (const InhomogeneousEntry& e) {
    EXPECT_EQ(e.j, 1);
    EXPECT_EQ(e.row, 0u);
    EXPECT_EQ(e.col, 0u);
  }
}

TEST(Slice, KoszulExamples) {
  auto k = koszul_xy();
  auto m = slice(k.complex, 1, Multidegree(1));
  // K_0 in degree 1 is spanned by x, y; K_1 = A(−1)² by the two generators
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 2u);
  EXPECT_EQ(rank(m, CoeffDomain::rationals()), 2u);
  auto z = slice(k.complex, 1, Multidegree(-1));
  EXPECT_EQ(z.rows(), 0u);
  EXPECT_EQ(z.cols(), 0u);
  auto top = slice(k.complex, 2, Multidegree(2));
  EXPECT_EQ(top.cols(), 1u);
  EXPECT_EQ(rank(top, CoeffDomain::rationals()), 1u);
}

TEST(Slice, ConsecutiveSlicesCompose) {
  auto ctx = PfaffianContext::make(2);
  auto c = build_C(ctx, 1);
  for (int j = c.lo() + 1; j < c.hi(); ++j)
    for (int d = 0; d <= 5; ++d) {
      auto a = slice(c, j, Multidegree(d)), b = slice(c, j + 1, Multidegree(d));
      auto p = matmul(a.to_dense(), b.to_dense(), a.rows(), a.cols(), b.cols());
      for (const auto& row : p)
        for (const auto& x : row) EXPECT_EQ(x, 0) << "j=" << j << " d=" << d;
    }
}

TEST(Slice, CompositeOfSlicesIsSliceOfComposite) {
  std::mt19937_64 rng(3);
  auto r = PolyRing::standard({"x", "y", "z"});
  auto m0 = scalars({0, -1}), m1 = scalars({-1, -2, -2}), m2 = scalars({-3, -4});
  auto a = random_map(rng, r, m0, m1), b = random_map(rng, r, m1, m2);
  FreeComplex pair(r, 0, {m0, m1, m2}, {a, b});
  FreeComplex comp(r, 0, {m0, m2}, {multiply(a, b, r)});
  for (int d : {0, 2, 3, 4, 5, 6}) {
    auto sa = slice(pair, 1, Multidegree(d)), sb = slice(pair, 2, Multidegree(d));
    auto want = slice(comp, 1, Multidegree(d)).to_dense();
    EXPECT_EQ(matmul(sa.to_dense(), sb.to_dense(), sa.rows(), sa.cols(), sb.cols()), want) << "d=" << d;
  }
}

TEST(Dualize, SameTwistTwiceIsIdentity) {
  auto ctx = PfaffianContext::make(2);
  for (int i = 0; i <= 1; ++i) {
    auto c = build_C(ctx, i);
    Multidegree t(-7);
    EXPECT_EQ(dualize(dualize(c, t), t), c);
  }
}

TEST(Dualize, BEResolutionIsSelfDual) {
  auto ctx = PfaffianContext::make(2);
  auto c = build_C(ctx, 0);
  auto d = dualize(c, Multidegree(-5));
  for (int j = c.lo(); j <= c.hi(); ++j) EXPECT_EQ(graded_ranks(d, j), graded_ranks(c, j)) << j;
  EXPECT_EQ(graded_ranks(c, 1), (std::vector<std::size_t>(5, 2)));
  EXPECT_EQ(graded_ranks(c, 3), (std::vector<std::size_t>{5}));
  EXPECT_TRUE(verify_complex(d).ok);
}

TEST(Dualize, PreservesComplexProperty) {
  auto ctx = PfaffianContext::make(2);
  EXPECT_TRUE(verify_complex(dualize(build_C(ctx, 1), Multidegree(0))).ok);
  auto k = koszul_xy();
  EXPECT_TRUE(verify_complex(dualize(k.complex, Multidegree(-2))).ok);
}

TEST(Dualize, LengthZero) {
  auto r = PolyRing::standard({"x"});
  FreeComplex c(r, 0, {scalars({0, -2})}, {});
  auto d = dualize(c, Multidegree(0));
  EXPECT_EQ(d.lo(), d.hi());
  ASSERT_EQ(d.rank(0), 2u);
  EXPECT_EQ(d.module(0).gens[0].twist, Multidegree(0));
  EXPECT_EQ(d.module(0).gens[1].twist, Multidegree(2));
}

TEST(EulerHf, BEResolution) {
  auto ctx = PfaffianContext::make(2);
  auto c = build_C(ctx, 0);
  EXPECT_EQ(euler_hf(c, Multidegree(2)), 50);
  EXPECT_EQ(euler_hf(c, Multidegree(3)), 175);
  EXPECT_EQ(euler_hf(c, Multidegree(0)), 1);
  // oracle: dim A_2 − #independent quadrics
  EXPECT_EQ(monomial_count(*ctx.ring, Multidegree(2)) - 5, 50);
}

TEST(EulerHf, MatchesCokernelDimension) {
  auto ctx = PfaffianContext::make(2);
  auto c = build_C(ctx, 0);
  for (int d = 0; d <= 6; ++d) {
    auto h = homology_dim(c, 0, Multidegree(d), CoeffDomain::prime_field(32003));
    EXPECT_EQ(Integer(h.dim_homology), euler_hf(c, Multidegree(d))) << d;
  }
}

TEST(Homogeneity, BuiltComplexesAreHomogeneous) {
  auto ctx = PfaffianContext::make(3);
  for (int i = 0; i <= 2; ++i) EXPECT_NO_THROW(check_homogeneity(build_C(ctx, i)));
  EXPECT_NO_THROW(check_homogeneity(build_hu_koszul(HUContext::make(2)).complex));
}

TEST(ComplexJson, RoundTrip) {
  auto ctx = PfaffianContext::make(2);
  for (int i = 0; i <= 1; ++i) {
    auto c = build_C(ctx, i);
    auto text = emit_complex(c);
    auto back = parse_complex(text);
    EXPECT_EQ(back, c);
    EXPECT_EQ(emit_complex(back), text);
  }
  auto hu = build_hu_koszul(HUContext::make(2)).complex;
  EXPECT_EQ(parse_complex(emit_complex(hu)), hu);
}

TEST(ComplexJson, RejectsMalformedInput) {
  auto j = complex_to_json(koszul_xy().complex);
  auto dup = j;
  dup["differentials"][0]["entries"].push_back(dup["differentials"][0]["entries"][0]);
  EXPECT_THROW(complex_from_json(dup), std::invalid_argument);
  auto oob = j;
  oob["differentials"][0]["entries"][0]["r"] = 9;
  EXPECT_THROW(complex_from_json(oob), std::invalid_argument);
  EXPECT_ANY_THROW(parse_complex("{\"ring\": 3}"));
}
