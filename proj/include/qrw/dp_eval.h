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

#ifndef QRW_DP_EVAL_H_
#define QRW_DP_EVAL_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qrw/connector.h"
#include "qrw/privacy_unit.h"
#include "qrw/sql/catalog.h"

namespace qrw {

// Radical inverse of `index` in `base`: 1, 2, 3, 4 in base 2 give 1/2, 1/4,
// 3/4, 1/8.
double Halton(std::uint64_t index, int base);

enum class RowsPerUser { kExactlyOne, kNormal };

struct HaltonParams {
  std::string table = "halton";
  int n_users = 100;
  RowsPerUser law = RowsPerUser::kExactlyOne;
  // Rows per user under kNormal; negative means n_users / 2 and mean / 4.
  double mean = -1;
  double stddev = -1;
  int n_groups = 5;
  // First sequence index (at least 1); shifts every column.
  std::uint64_t offset = 1;
};

// Table `user_id` integer, `g` integer in [0, n_groups), `x` float in
// [0, 1): row r has x = Halton(offset + r, 2) and g = floor(n_groups *
// Halton(offset + r, 3)). Under kNormal, user u owns
// max(0, round(mean + stddev * inverse_normal_cdf(Halton(offset + u, 5))))
// rows. Throws InvalidArgumentError on invalid parameters.
Fixture BuildHaltonFixture(const HaltonParams& params);

// Private table with declared bounds, and its per-user privacy unit.
Catalog HaltonCatalog(const HaltonParams& params);
PrivacyUnitDefinition HaltonPrivacyUnit(const HaltonParams& params,
                                        const Catalog& catalog);

struct AdjacentFixture {
  Value removed;
  Fixture fixture;
};

// One fixture per privacy id, without that id's rows. With `max_users` > 0
// and more ids than that, keeps evenly spaced ids plus the id owning the
// most rows.
std::vector<AdjacentFixture> AdjacentFixtures(const Fixture& fixture,
                                              const std::string& pid_column,
                                              std::size_t max_users = 0);

// Released value per output cell of one run, keyed by group and column.
using Sample = std::map<std::string, double>;

struct PrivacyProfile {
  std::vector<double> epsilons;
  std::vector<double> deltas;
  // Finite-sample allowance per epsilon at the chosen confidence.
  std::vector<double> margins;
  int runs = 0;
  int bins = 0;
  // Some compared output took a single value across all runs.
  bool degenerate = false;

  double DeltaAt(double epsilon) const;
  double MarginAt(double epsilon) const;
  std::string ToJson() const;
  std::string ToCsv() const;
};

std::vector<double> DefaultEpsilonGrid();

// Hockey-stick divergence between histograms of `reference` and each
// `adjacent` run set (both directions), maximized over adjacent sets and
// output cells. Cells absent from a run fall in a bin of their own.
PrivacyProfile EstimateProfile(const std::vector<Sample>& reference,
                               const std::vector<std::vector<Sample>>& adjacent,
                               const std::vector<double>& epsilons,
                               double confidence = 0.95);

struct ProfileOptions {
  int runs = 2000;
  std::vector<double> epsilons = DefaultEpsilonGrid();
  double confidence = 0.95;
  std::uint64_t seed = 1;
};

// Output columns named in `keys` identify a group; every other column is a
// released value.
std::vector<Sample> RunSamples(Connection& connection, const std::string& sql,
                               const std::vector<std::string>& keys, int runs);

// Runs `sql` on the reference fixture and on each adjacent one (embedded
// backend, seeded) and estimates the privacy profile.
PrivacyProfile EstimatePrivacyProfile(
    const std::string& sql, const std::vector<std::string>& keys,
    const Fixture& reference, const std::vector<AdjacentFixture>& adjacent,
    const ProfileOptions& options = {});

// Exact delta(epsilon) of a Gaussian mechanism with sensitivity `c`.
double GaussianProfileDelta(double epsilon, double sigma, double c);

}  // namespace qrw

#endif  // QRW_DP_EVAL_H_
