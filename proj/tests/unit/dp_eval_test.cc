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

#include "qrw/dp_eval.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "qrw/dp_mechanisms.h"
#include "qrw/error.h"
#include "qrw/rewriting.h"
#include "qrw/sql/binder.h"
#include "qrw/sql/renderer.h"

namespace qrw {
namespace {

std::vector<Sample> GaussianRuns(double mean, double sigma, int runs,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(mean, sigma);
  std::vector<Sample> out;
  for (int i = 0; i < runs; ++i) out.push_back({{"v", noise(rng)}});
  return out;
}

// Integral of max(0, f_0 - e^eps f_1) for N(c, sigma) against N(0, sigma)
// by the trapezoid rule.
double NumericGaussianDelta(double epsilon, double sigma, double c) {
  auto pdf = [&](double x, double mu) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2 * M_PI));
  };
  const double lo = -12 * sigma;
  const double hi = c + 12 * sigma;
  const int steps = 200000;
  const double h = (hi - lo) / steps;
  double total = 0;
  for (int i = 0; i <= steps; ++i) {
    const double x = lo + i * h;
    const double f = std::max(0.0, pdf(x, c) - std::exp(epsilon) * pdf(x, 0));
    total += (i == 0 || i == steps) ? f / 2 : f;
  }
  return total * h;
}

std::size_t Column(const Fixture& f, const std::string& name) {
  return *f.schema.Find(name);
}

TEST(HaltonTest, RadicalInverse) {
  EXPECT_DOUBLE_EQ(Halton(1, 2), 0.5);
  EXPECT_DOUBLE_EQ(Halton(2, 2), 0.25);
  EXPECT_DOUBLE_EQ(Halton(3, 2), 0.75);
  EXPECT_DOUBLE_EQ(Halton(4, 2), 0.125);
  EXPECT_DOUBLE_EQ(Halton(1, 3), 1.0 / 3);
  EXPECT_DOUBLE_EQ(Halton(2, 3), 2.0 / 3);
  EXPECT_DOUBLE_EQ(Halton(3, 3), 1.0 / 9);
  EXPECT_EQ(Halton(0, 2), 0);
}

TEST(HaltonFixtureTest, OneRowPerUser) {
  HaltonParams params;
  params.n_users = 10;
  Fixture f = BuildHaltonFixture(params);
  EXPECT_EQ(f.name, "halton");
  ASSERT_EQ(f.rows.size(), 10u);
  std::set<std::int64_t> users;
  const std::size_t uid = Column(f, "user_id");
  const std::size_t g = Column(f, "g");
  const std::size_t x = Column(f, "x");
  for (std::size_t r = 0; r < f.rows.size(); ++r) {
    users.insert(f.rows[r][uid].as_int());
    EXPECT_DOUBLE_EQ(*f.rows[r][x].ToDouble(), Halton(r + 1, 2));
    EXPECT_EQ(f.rows[r][g].as_int(),
              static_cast<std::int64_t>(std::floor(5 * Halton(r + 1, 3))));
  }
  EXPECT_EQ(users.size(), 10u);
}

TEST(HaltonFixtureTest, NormalMultiplicity) {
  HaltonParams params;
  params.n_users = 40;
  params.law = RowsPerUser::kNormal;
  Fixture f = BuildHaltonFixture(params);
  std::map<std::int64_t, int> rows;
  for (const auto& r : f.rows) ++rows[r[Column(f, "user_id")].as_int()];
  EXPECT_GT(rows.size(), 30u);
  double total = 0;
  for (const auto& [user, n] : rows) {
    EXPECT_GE(n, 0);
    total += n;
  }
  EXPECT_NEAR(total / 40, 20, 5);
  // Reproducible across builds.
  EXPECT_EQ(BuildHaltonFixture(params).rows, f.rows);

  params.stddev = 100;
  for (const auto& r : BuildHaltonFixture(params).rows) {
    EXPECT_GE(r[Column(f, "user_id")].as_int(), 1);
  }
  params.n_users = 0;
  EXPECT_THROW(BuildHaltonFixture(params), InvalidArgumentError);
}

TEST(AdjacentFixturesTest, RemovesOneUserEach) {
  HaltonParams params;
  params.n_users = 3;
  Fixture f = BuildHaltonFixture(params);
  std::vector<AdjacentFixture> adjacent = AdjacentFixtures(f, "user_id");
  ASSERT_EQ(adjacent.size(), 3u);
  for (const AdjacentFixture& a : adjacent) {
    EXPECT_EQ(a.fixture.rows.size(), 2u);
    for (const auto& r : a.fixture.rows) EXPECT_NE(r[0], a.removed);
  }
}

TEST(AdjacentFixturesTest, HeavyUserKeptWhenSubsampling) {
  HaltonParams params;
  params.n_users = 50;
  params.law = RowsPerUser::kNormal;
  Fixture f = BuildHaltonFixture(params);
  std::map<std::int64_t, std::size_t> rows;
  for (const auto& r : f.rows) ++rows[r[0].as_int()];
  auto heaviest = std::max_element(
      rows.begin(), rows.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  std::vector<AdjacentFixture> adjacent = AdjacentFixtures(f, "user_id", 10);
  EXPECT_LE(adjacent.size(), 11u);
  EXPECT_GE(adjacent.size(), 10u);
  bool found = false;
  for (const AdjacentFixture& a : adjacent) {
    const std::size_t owned = rows[a.removed.as_int()];
    EXPECT_EQ(a.fixture.rows.size(), f.rows.size() - owned);
    found |= a.removed.as_int() == heaviest->first;
  }
  EXPECT_TRUE(found);
}

TEST(AdjacentFixturesTest, SoleMemberRemovalDropsGroup) {
  HaltonParams params;
  params.n_users = 12;
  params.n_groups = 12;
  Fixture f = BuildHaltonFixture(params);
  const std::size_t g = Column(f, "g");
  std::map<std::int64_t, std::set<std::int64_t>> members;
  for (const auto& r : f.rows) members[r[g].as_int()].insert(r[0].as_int());
  for (const AdjacentFixture& a : AdjacentFixtures(f, "user_id")) {
    std::set<std::int64_t> groups;
    for (const auto& r : a.fixture.rows) groups.insert(r[g].as_int());
    for (const auto& [group, users] : members) {
      const bool sole = users.size() == 1 && users.count(a.removed.as_int());
      EXPECT_EQ(groups.count(group) == 0, sole);
    }
  }
}

TEST(GaussianProfileTest, ClosedFormMatchesIntegration) {
  for (double sigma : {0.5, 1.0, 4.8}) {
    for (double eps : {0.0, 0.5, 1.0, 2.0}) {
      EXPECT_NEAR(GaussianProfileDelta(eps, sigma, 1),
                  NumericGaussianDelta(eps, sigma, 1), 1e-7)
          << "sigma=" << sigma << " eps=" << eps;
    }
  }
  const double sigma = GaussianSigma(1, 1e-3, 1);
  EXPECT_LE(GaussianProfileDelta(1, sigma, 1), 1e-3);
}

TEST(EstimateProfileTest, IdenticalDistributionsGiveZero) {
  std::vector<Sample> a = GaussianRuns(0, 1, 4000, 1);
  std::vector<Sample> b = GaussianRuns(0, 1, 4000, 2);
  PrivacyProfile p = EstimateProfile(a, {b}, DefaultEpsilonGrid());
  // The histogram plug-in estimate carries a small upward bias at eps = 0.
  EXPECT_LT(p.DeltaAt(0), 0.1);
  EXPECT_LE(p.DeltaAt(0.5), p.MarginAt(0.5));
  PrivacyProfile shifted = EstimateProfile(a, {GaussianRuns(1, 1, 4000, 2)},
                                           DefaultEpsilonGrid());
  EXPECT_GT(shifted.DeltaAt(0), 0.3);
  EXPECT_EQ(p.runs, 4000);
  EXPECT_EQ(p.bins, 64);
  EXPECT_FALSE(p.degenerate);
}

TEST(EstimateProfileTest, GaussianMechanismWithinBound) {
  const double sigma = GaussianSigma(1, 1e-3, 1);
  std::vector<Sample> d = GaussianRuns(1, sigma, 2000, 3);
  std::vector<Sample> dk = GaussianRuns(0, sigma, 2000, 4);
  PrivacyProfile p = EstimateProfile(d, {dk}, DefaultEpsilonGrid());
  EXPECT_LE(p.DeltaAt(1), 1e-3 + p.MarginAt(1));
  for (std::size_t i = 0; i < p.deltas.size(); ++i) {
    EXPECT_GE(p.deltas[i], 0);
    EXPECT_LE(p.deltas[i], 1);
    if (i > 0) EXPECT_LE(p.deltas[i], p.deltas[i - 1]);
  }
}

TEST(EstimateProfileTest, DisjointBatchesAgree) {
  const double sigma = 1.5;
  PrivacyProfile p1 = EstimateProfile(GaussianRuns(1, sigma, 3000, 5),
                                      {GaussianRuns(0, sigma, 3000, 6)},
                                      DefaultEpsilonGrid());
  PrivacyProfile p2 = EstimateProfile(GaussianRuns(1, sigma, 3000, 7),
                                      {GaussianRuns(0, sigma, 3000, 8)},
                                      DefaultEpsilonGrid());
  for (double eps : DefaultEpsilonGrid()) {
    EXPECT_LE(std::fabs(p1.DeltaAt(eps) - p2.DeltaAt(eps)),
              p1.MarginAt(eps) + p2.MarginAt(eps));
  }
}

TEST(EstimateProfileTest, MoreRunsApproachClosedForm) {
  const double sigma = 1.0;
  const double exact = GaussianProfileDelta(0, sigma, 1);
  std::vector<double> errors;
  for (int runs : {250, 2000, 16000}) {
    double error = 0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      PrivacyProfile p = EstimateProfile(
          GaussianRuns(1, sigma, runs, 100 + seed),
          {GaussianRuns(0, sigma, runs, 200 + seed)}, {0.0});
      error += std::fabs(p.DeltaAt(0) - exact) / 4;
    }
    errors.push_back(error);
  }
  EXPECT_LT(errors[1], errors[0]);
  EXPECT_LT(errors[2], errors[1]);
}

TEST(EstimateProfileTest, ConstantOutputIsDegenerate) {
  std::vector<Sample> a(100, Sample{{"v", 1.0}});
  PrivacyProfile p = EstimateProfile(a, {a}, {0.0, 1.0});
  EXPECT_TRUE(p.degenerate);
  EXPECT_EQ(p.DeltaAt(0), 0);
}

TEST(EstimateProfileTest, MissingCellsCount) {
  std::vector<Sample> present(200, Sample{{"v", 1.0}});
  std::vector<Sample> absent(200, Sample{});
  PrivacyProfile p = EstimateProfile(present, {absent}, {0.0, 1.0});
  EXPECT_DOUBLE_EQ(p.DeltaAt(0), 1.0);
}

TEST(PrivacyProfileTest, JsonAndCsv) {
  PrivacyProfile p = EstimateProfile(GaussianRuns(1, 1, 100, 1),
                                     {GaussianRuns(0, 1, 100, 2)}, {0.0, 1.0});
  nlohmann::json j = nlohmann::json::parse(p.ToJson());
  for (const char* key : {"eps", "delta", "runs", "margin"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["eps"].size(), 2u);
  EXPECT_EQ(j["runs"], 100);
  const std::string csv = p.ToCsv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(EstimatePrivacyProfileTest, RewrittenQueryOnSmallFixture) {
  HaltonParams params;
  params.n_users = 20;
  Catalog catalog = HaltonCatalog(params);
  PrivacyUnitDefinition pu = HaltonPrivacyUnit(params, catalog);
  Rewriter rewriter(catalog, pu);
  RewriteResult result = rewriter.Rewrite(
      BindSql("SELECT g, SUM(x) AS s FROM halton WHERE g IN (0, 1, 2, 3, 4) "
              "GROUP BY g",
              catalog)
          .relation,
      Property::kPubd, {1, 1e-3});
  const std::string sql = Render(result.relation, Dialect::Embedded());
  Fixture fixture = BuildHaltonFixture(params);
  ProfileOptions options;
  options.runs = 200;
  PrivacyProfile p = EstimatePrivacyProfile(
      sql, {"g"}, fixture, AdjacentFixtures(fixture, "user_id", 3), options);
  EXPECT_EQ(p.runs, 200);
  EXPECT_LE(p.DeltaAt(1), 1e-3 + p.MarginAt(1));
}

}  // namespace
}  // namespace qrw
