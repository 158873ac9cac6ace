#include <gtest/gtest.h>

#include "pfk/checks.hpp"

using namespace pfk;

namespace {

FreeComplex shifted(const FreeComplex& c, int by) {
  std::vector<GradedFreeModule> mods;
  for (int j = c.lo(); j <= c.hi(); ++j) {
    GradedFreeModule m = c.module(j);
    for (auto& g : m.gens) g.twist = g.twist + Multidegree(by);
    mods.push_back(m);
  }
  std::vector<PolyMatrix> diffs;
  for (int j = c.lo() + 1; j <= c.hi(); ++j) diffs.push_back(c.differential(j));
  return FreeComplex(c.ring(), c.lo(), mods, diffs);
}

}  // namespace

TEST(HfM, Examples) {
  EXPECT_EQ(hf_M(2, 0, 2), 50);
  EXPECT_EQ(hf_M(2, 1, 1), 40);
  for (int n = 1; n <= 4; ++n)
    for (int i = 0; i < n; ++i) EXPECT_EQ(hf_M(n, i, 0), choose(2 * n + 1, i));
  EXPECT_THROW(hf_M(2, 2, 0), std::out_of_range);
  EXPECT_THROW(hf_M(2, -1, 0), std::out_of_range);
}

TEST(HfM, AgreesWithBuiltResolution) {
  for (int n = 1; n <= 3; ++n) {
    auto ctx = PfaffianContext::make(n);
    for (int i = 0; i < n; ++i) {
      auto c = build_C(ctx, i);
      for (int d = 0; d <= 8; ++d) EXPECT_EQ(hf_M(n, i, d), euler_hf(c, Multidegree(d))) << n << i << d;
    }
  }
}

TEST(HfM, BettiTableIsSelfDual) {
  // twists {0, n−i, n+1, 2n+1−i} are symmetric about (2n+1−i)/2
  for (int n = 1; n <= 5; ++n)
    for (int i = 0; i < n; ++i) {
      const int top = 2 * n + 1 - i;
      EXPECT_EQ(0 + top, (n - i) + (n + 1));
    }
  auto ctx = PfaffianContext::make(2);
  for (int i = 0; i <= 1; ++i) {
    auto c = build_C(ctx, i);
    auto d = dualize(c, Multidegree(-(2 * 2 + 1 - i)));
    for (int e = 0; e <= 8; ++e) EXPECT_EQ(euler_hf(d, Multidegree(e)), euler_hf(c, Multidegree(e)));
  }
}

TEST(PredictedHf, Examples) {
  EXPECT_EQ(predicted_hf(2, 0, FiltrationPart::a, 3), 175);
  for (int d = 0; d <= 2; ++d) EXPECT_EQ(predicted_hf(2, 1, FiltrationPart::a, d), 0);
  EXPECT_EQ(predicted_hf(2, 1, FiltrationPart::a, 3), 5);
  EXPECT_EQ(predicted_hf(2, 1, FiltrationPart::a, 4), hf_M(2, 1, 1));
  EXPECT_EQ(filtration_shift(2, 0, FiltrationPart::b, 0), 5);
  for (int d = 0; d <= 9; ++d) EXPECT_EQ(predicted_hf(2, 0, FiltrationPart::b, d), d < 5 ? 0 : hf_M(2, 0, d - 5));
  EXPECT_THROW(predict_filtration(2, 2, FiltrationPart::a), std::out_of_range);
  EXPECT_THROW(predict_filtration(2, 1, FiltrationPart::b), std::out_of_range);
}

TEST(PredictedHf, LayersAndShifts) {
  auto p = predict_filtration(4, 3, FiltrationPart::a);
  ASSERT_EQ(p.layers.size(), 2u);
  EXPECT_EQ(p.layers[0].module, 3);
  EXPECT_EQ(p.layers[0].shift, 15);
  EXPECT_EQ(p.layers[1].module, 1);
  EXPECT_EQ(p.layers[1].shift, 14);
  auto b = predict_filtration(4, 2, FiltrationPart::b);
  EXPECT_EQ(b.j, 4);
  // s_b(i) = ((j − 2i) + (2n−2−j)(2n+1))/2 with n=4, j=2
  EXPECT_EQ(b.layers[0].shift, (2 + 4 * 9) / 2);
  EXPECT_EQ(b.layers[1].shift, (0 + 4 * 9) / 2);
  EXPECT_EQ(prediction_for(3, 2)->part, FiltrationPart::a);
  EXPECT_EQ(prediction_for(3, 3)->part, FiltrationPart::b);
  EXPECT_FALSE(prediction_for(3, 5).has_value());
}

TEST(PredictedHf, Nonnegative) {
  for (int n = 1; n <= 4; ++n)
    for (int h = 0; h <= 2 * n - 2; ++h)
      for (long d = 0; d <= 12; ++d) EXPECT_GE(predicted_hf(*prediction_for(n, h), d), 0);
}

TEST(PredictedHf, TopIsShiftedQuotient) {
  // HF(H_2)(d) = HF(H_0)(d − 5) for n = 2
  for (long d = 0; d <= 10; ++d)
    EXPECT_EQ(predicted_hf(*prediction_for(2, 2), d), d < 5 ? 0 : predicted_hf(*prediction_for(2, 0), d - 5));
}

TEST(PredictedHfHu, Examples) {
  const int n = 3;
  auto k = build_hu_koszul(HUContext::make(n));
  auto q = hf_quotient(k.complex, Multidegree(1, 1), CoeffDomain::prime_field(32003));
  EXPECT_EQ(q.at(Multidegree(0, 1)), 6u);
  EXPECT_EQ(q.at(Multidegree(0, 0)), 1u);
  EXPECT_EQ(predicted_hf_hu(n, Multidegree(n + 1, 2), q), 1);
  EXPECT_EQ(predicted_hf_hu(n, Multidegree(4, 3), q), 6);
  EXPECT_EQ(predicted_hf_hu(n, Multidegree(3, 5), q), 0);
  EXPECT_THROW(predicted_hf_hu(2, Multidegree(3, 2), q), std::invalid_argument);
}

TEST(VerifyFiltration, SmallCases) {
  CheckOptions o;
  auto r1 = check_filtration(1, 6, o);
  EXPECT_EQ(r1.status, Status::pass);
  EXPECT_EQ(r1.computed["H0"]["0"], 1);
  EXPECT_EQ(r1.computed["H0"]["1"], 0);
  auto r2 = check_filtration(2, 6, o);
  EXPECT_EQ(r2.status, Status::pass) << to_json(r2).dump();
  EXPECT_EQ(r2.computed["H1"]["3"], 5);
}

TEST(VerifyFiltration, MutationFails) {
  auto k = build_pfaffian_koszul(PfaffianContext::make(2));
  auto [r, c] = first_entry(k.complex, 2);
  mutate_flip_sign(k.complex, 2, r, c);
  auto rep = check_filtration(2, 5, CheckOptions{}, {}, &k.complex);
  EXPECT_EQ(rep.status, Status::fail);
}

TEST(VerifyFiltration, UniformOffsetIsReportedAsShiftFalsified) {
  auto k = build_pfaffian_koszul(PfaffianContext::make(2));
  auto moved = shifted(k.complex, -1);
  auto rep = check_filtration(2, 6, CheckOptions{}, {}, &moved);
  EXPECT_EQ(rep.status, Status::shift_falsified);
}
