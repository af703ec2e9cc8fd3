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

#ifndef QRW_DP_MECHANISMS_H_
#define QRW_DP_MECHANISMS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qrw/accountant.h"
#include "qrw/expr.h"
#include "qrw/relation.h"

namespace qrw {

struct Budget {
  double epsilon = 1;
  double delta = 1e-5;
};

// Throws InvalidArgumentError unless epsilon > 0 and 0 < delta < 1.
void ValidateBudget(const Budget& budget);

// Mechanism shares below this are rejected.
inline constexpr double kMinMechanismBudget = 1e-9;

// sqrt(2 ln(1.25 / delta)) * c / epsilon.
double GaussianSigma(double epsilon, double delta, double c);

// s / max(1, |s|_2 / c).
std::vector<double> ClipNorm(std::span<const double> s, double c);

struct TauThresholdSpec {
  double epsilon_keys = 0;
  double delta_keys = 0;
  double sigma_keys = 0;
  double tau = 0;
};

// sigma_keys = GaussianSigma(epsilon_keys, delta_keys / 2, 1) and
// tau = 1 + sigma_keys * inverse_normal_cdf(1 - delta_keys / 2).
TauThresholdSpec MakeTauThreshold(double epsilon_keys, double delta_keys);

struct DpOptions {
  // Clipping norm multiplier applied to the largest absolute bound.
  double clip_multiplier = 1;
  // Share of a Reduce's budget spent on releasing data-derived keys.
  double key_fraction = 0.5;
  // Public key domains larger than this fall back to tau-thresholding.
  std::size_t max_public_keys = 10000;
  // When false the rewriting omits all noise terms. The output is then not
  // differentially private; tests use it to compare against exact answers.
  bool add_noise = true;
};

// A per-group sum the DP rewriting noises. `value` reads the Reduce input.
struct SumSpec {
  std::string name;
  Expr value;
  // Largest absolute value of `value` (finite), 0 when unknown.
  double bound = 0;
};

// A Reduce expressed through sums: keys `_k<i>` (the grouping expressions)
// and sums `_s<j>`; `outputs` rebuild the original aggregates from them.
struct Decomposition {
  std::vector<Expr> keys;
  std::vector<SumSpec> sums;
  std::vector<NamedExpr> outputs;
};

// Throws RewriteError on aggregates other than COUNT, SUM, AVG, VARIANCE and
// STDDEV, and on sums whose values have no finite bound.
Decomposition DecomposeAggregates(const Relation& reduce);

// Keys of `reduce` whose value sets are public, one list of values per key,
// or nullopt when some key is data-derived.
std::optional<std::vector<std::vector<Value>>> PublicKeyValues(
    const Relation& reduce, std::size_t max_combinations);

struct DpReduce {
  RelationPtr relation;
  std::vector<MechanismEvent> events;
  std::optional<TauThresholdSpec> tau;
  bool public_keys = false;
};

// Rewrites `reduce` over `pup_input` (its input with the privacy id column
// appended) into a subgraph releasing noisy, clipped aggregates under
// `budget`. The result has the schema names of `reduce`.
DpReduce RewriteReduceDp(const Relation& reduce, const RelationPtr& pup_input,
                         const Budget& budget, const DpOptions& options = {});

// Standard normal draw from two uniforms (Box-Muller).
Expr GaussianNoise();

}  // namespace qrw

#endif  // QRW_DP_MECHANISMS_H_
