// Copyright 2026 The qrw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qrw/kinterval.h"

#include <limits>
#include <random>

#include <gtest/gtest.h>

namespace qrw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

KInterval Points(std::vector<double> v, int k = KInterval::kDefaultCapacity) {
  return KInterval::FromValues(v, k);
}

TEST(KIntervalTest, UnionOfDisjointPoints) {
  KInterval u = Union(KInterval::Point(1, 3), KInterval::Point(2, 3));
  EXPECT_EQ(u.pieces(), (std::vector<Interval>{{1, 1}, {2, 2}}));
}

TEST(KIntervalTest, UnionOverflowStaysWithinHull) {
  KInterval u = Union(Points({1, 2, 3}, 3), KInterval::Point(4, 3));
  EXPECT_LE(u.pieces().size(), 3u);
  EXPECT_EQ(u.min(), 1);
  EXPECT_EQ(u.max(), 4);
  for (double v : {1.0, 2.0, 3.0, 4.0}) EXPECT_TRUE(u.Contains(v));
}

TEST(KIntervalTest, OverflowMergesSmallestGap) {
  KInterval u = KInterval::FromPieces({{0, 0}, {10, 10}, {11, 11}}, 2);
  EXPECT_EQ(u.pieces(), (std::vector<Interval>{{0, 0}, {10, 11}}));
}

TEST(KIntervalTest, UnionWithEmptyIsIdentity) {
  KInterval a = KInterval::FromPieces({{0, 1}, {3, 4}});
  EXPECT_EQ(Union(a, KInterval::Empty()), a);
  EXPECT_EQ(Union(KInterval::Empty(), a), a);
}

TEST(KIntervalTest, Intersections) {
  EXPECT_EQ(Intersect(KInterval::Closed(0, 2), KInterval::Closed(1, 3)),
            KInterval::Closed(1, 2));
  EXPECT_EQ(Intersect(Points({1, 2, 3}), KInterval::Closed(1.5, 3.5)),
            Points({2, 3}));
  EXPECT_TRUE(
      Intersect(KInterval::Closed(0, 1), KInterval::Closed(2, 3)).empty());
}

TEST(KIntervalTest, TouchingPiecesMerge) {
  KInterval a = KInterval::FromPieces({{0, 1}, {1, 2}});
  EXPECT_EQ(a, KInterval::Closed(0, 2));
}

TEST(KIntervalTest, NanMeansUnknown) {
  KInterval a = KInterval::FromPieces({{0, std::nan("")}});
  EXPECT_TRUE(a.IsFull());
}

TEST(KIntervalTest, RoundsInward) {
  KInterval a = KInterval::FromPieces({{0.5, 2.5}, {2.7, 2.9}, {-kInf, -3.2}});
  EXPECT_EQ(a.RoundedToIntegers(),
            KInterval::FromPieces({{-kInf, -4}, {1, 2}}));
}

TEST(KIntervalTest, ToString) {
  EXPECT_EQ(Points({1, 2, 3}).ToString(), "{1, 2, 3}");
  EXPECT_EQ(KInterval::Closed(-0.1, kInf).ToString(), "[-0.1, +inf]");
  EXPECT_EQ(KInterval::FromPieces({{0, 1}, {2, 3}}).ToString(),
            "{[0, 1], [2, 3]}");
  EXPECT_EQ(KInterval::Empty().ToString(), "{}");
}

// Random k-intervals checked against membership of sample points.
class KIntervalPropertyTest : public ::testing::TestWithParam<int> {};

KInterval RandomK(std::mt19937_64& rng, int k) {
  std::uniform_int_distribution<int> count(0, 6);
  std::uniform_int_distribution<int> coord(-20, 20);
  std::vector<Interval> pieces;
  int n = count(rng);
  for (int i = 0; i < n; ++i) {
    double a = coord(rng);
    double b = coord(rng);
    pieces.push_back({std::min(a, b), std::max(a, b)});
  }
  return KInterval::FromPieces(std::move(pieces), k);
}

TEST_P(KIntervalPropertyTest, LatticeLaws) {
  const int k = GetParam();
  std::mt19937_64 rng(1234 + k);
  for (int trial = 0; trial < 500; ++trial) {
    KInterval a = RandomK(rng, k);
    KInterval b = RandomK(rng, k);
    KInterval c = RandomK(rng, k);
    KInterval u = Union(a, b);
    KInterval i = Intersect(a, b);
    ASSERT_LE(static_cast<int>(u.pieces().size()), k);
    ASSERT_LE(static_cast<int>(i.pieces().size()), k);
    EXPECT_TRUE(a.IsSubsetOf(u));
    EXPECT_TRUE(b.IsSubsetOf(u));
    EXPECT_TRUE(i.IsSubsetOf(KInterval::Closed(-100, 100)));
    EXPECT_EQ(u, Union(b, a));
    EXPECT_EQ(i, Intersect(b, a));
    for (int x = -21; x <= 21; ++x) {
      bool in_a = a.Contains(x);
      bool in_b = b.Contains(x);
      if (in_a || in_b) EXPECT_TRUE(u.Contains(x));
      if (in_a && in_b) EXPECT_TRUE(i.Contains(x));
      // Exact when no overflow happened.
      if (static_cast<int>(a.pieces().size() + b.pieces().size()) <= k) {
        EXPECT_EQ(u.Contains(x), in_a || in_b);
      }
    }
    if (k >= 64) {
      EXPECT_EQ(Union(Union(a, b), c), Union(a, Union(b, c)));
      EXPECT_EQ(Intersect(Intersect(a, b), c), Intersect(a, Intersect(b, c)));
    }
    for (std::size_t p = 1; p < u.pieces().size(); ++p) {
      EXPECT_LT(u.pieces()[p - 1].hi, u.pieces()[p].lo);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Capacities, KIntervalPropertyTest,
                         ::testing::Values(1, 2, 3, 8, 64));

}  // namespace
}  // namespace qrw
