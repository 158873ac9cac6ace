#include <gtest/gtest.h>

#include <map>
#include <random>
#include <tuple>

#include "pfk/exterior.hpp"

using namespace pfk;

namespace {

// Sign of a sequence of distinct integers by brute-force inversion count.
int perm_sign(const std::vector<int>& v) {
  int inv = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) inv += v[i] > v[j];
  return inv % 2 ? -1 : 1;
}

std::vector<int> concat(std::initializer_list<IndexSet> parts) {
  std::vector<int> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

TEST(ShuffleSign, Examples) {
  EXPECT_EQ(shuffle_sign({1, 2}, {3, 4}), 1);
  EXPECT_EQ(shuffle_sign({2}, {1, 3}), -1);
  EXPECT_EQ(shuffle_sign({2, 4}, {1, 3}), -1);
  EXPECT_THROW(shuffle_sign({1, 2}, {2}), std::invalid_argument);
}

TEST(Comultiply, Examples) {
  std::vector<Splitting> want{{{1}, {2, 3}, 1}, {{2}, {1, 3}, -1}, {{3}, {1, 2}, 1}};
  EXPECT_EQ(comultiply({1, 2, 3}, 1), want);
  EXPECT_EQ(comultiply({1, 2, 3}, 0), (std::vector<Splitting>{{{}, {1, 2, 3}, 1}}));
  EXPECT_EQ(comultiply({1, 2, 3}, 3), (std::vector<Splitting>{{{1, 2, 3}, {}, 1}}));
  EXPECT_THROW(comultiply({1, 2}, 3), std::out_of_range);
  EXPECT_THROW(comultiply({1, 2}, -1), std::out_of_range);
}

TEST(SubsetRank, Examples) {
  EXPECT_EQ(subset_unrank(0, 2, 5), (IndexSet{1, 2}));
  EXPECT_EQ(subset_rank({4, 5}, 5), 9);
  EXPECT_THROW(subset_unrank(10, 2, 5), std::out_of_range);
  EXPECT_THROW(subset_rank({3, 2}, 5), std::invalid_argument);
}

TEST(SubsetRank, RoundTripAndLexOrder) {
  for (int n = 0; n <= 8; ++n)
    for (int k = 0; k <= n; ++k) {
      auto all = subsets(n, k);
      ASSERT_EQ(std::int64_t(all.size()), choose(n, k));
      EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
      for (std::int64_t r = 0; r < choose(n, k); ++r) {
        EXPECT_EQ(subset_rank(subset_unrank(r, k, n), n), r);
        EXPECT_EQ(subset_unrank(r, k, n), all[r]);
      }
    }
}

TEST(ExteriorProperties, ShuffleSignSymmetry) {
  for (int n = 1; n <= 6; ++n)
    for (int k = 0; k <= n; ++k)
      for (const auto& s : comultiply(subsets(n, n)[0], k)) {
        int expect = (s.first.size() * s.second.size()) % 2 ? -1 : 1;
        EXPECT_EQ(shuffle_sign(s.first, s.second) * shuffle_sign(s.second, s.first), expect);
        EXPECT_EQ(s.sign, perm_sign(concat({s.first, s.second})));
      }
}

TEST(ExteriorProperties, Coassociativity) {
  std::mt19937_64 rng(5);
  for (int size = 0; size <= 6; ++size) {
    // a random subset of [1, 9] of the given size
    IndexSet I = subset_unrank(rng() % choose(9, size), size, 9);
    for (int k = 0; k <= size; ++k)
      for (int m = 0; m <= size - k; ++m) {
        std::map<std::tuple<IndexSet, IndexSet, IndexSet>, int> left, right;
        for (const auto& a : comultiply(I, k))
          for (const auto& b : comultiply(a.second, m))
            left[{a.first, b.first, b.second}] = a.sign * b.sign;
        for (const auto& a : comultiply(I, k + m))
          for (const auto& b : comultiply(a.first, k))
            right[{b.first, b.second, a.second}] = a.sign * b.sign;
        EXPECT_EQ(left, right);
        for (const auto& [t, s] : left) EXPECT_EQ(s, perm_sign(concat({std::get<0>(t), std::get<1>(t), std::get<2>(t)})));
      }
  }
}

TEST(ExteriorProperties, ReassemblyRoundTrip) {
  for (int n = 0; n <= 6; ++n) {
    IndexSet I = subsets(n, n)[0];
    for (int k = 0; k <= n; ++k) {
      auto parts = comultiply(I, k);
      EXPECT_EQ(std::int64_t(parts.size()), choose(n, k));
      for (const auto& s : parts) {
        EXPECT_EQ(set_union(s.first, s.second), I);
        EXPECT_FALSE(intersects(s.first, s.second));
        // re-sorting (I', I'') back into I contributes the same sign again
        EXPECT_EQ(s.sign * shuffle_sign(s.first, s.second), 1);
      }
    }
  }
}
