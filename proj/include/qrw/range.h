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

#ifndef QRW_RANGE_H_
#define QRW_RANGE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qrw/data_type.h"
#include "qrw/expr.h"
#include "qrw/kinterval.h"

namespace qrw {

enum class Monotonicity { kIncreasing, kDecreasing };

// A cartesian product of intervals on which a function is monotone in each
// coordinate separately.
struct MonotoneCell {
  std::vector<Interval> domain;
  std::vector<Monotonicity> directions;
};

// f: R^n -> R described by cells covering its domain (overlapping at most on
// boundaries) and a scalar evaluator used at cell corners.
struct PiecewiseMonotonicSpec {
  int arity = 0;
  std::vector<MonotoneCell> cells;
  std::function<double(std::span<const double>)> evaluate;
};

// Superset of { f(x) : x in inputs[0] x ... x inputs[n-1] }.
//
// For every product of input pieces and every cell, the image of the
// intersection is the interval between f at two corners: the lower corner
// picks, coordinate by coordinate, the lower bound where f increases and the
// upper bound where it decreases. That is n choices, never the 2^n corners.
// The per-box images are merged by KInterval union.
KInterval Image(const PiecewiseMonotonicSpec& spec,
                std::span<const KInterval> inputs);

// Tables for the piecewise-monotonic builtins.
namespace monotone {
PiecewiseMonotonicSpec Add();
PiecewiseMonotonicSpec Sub();
PiecewiseMonotonicSpec Mul();
// Cells exclude a zero divisor; `truncate` models integer division.
PiecewiseMonotonicSpec Div(bool truncate);
PiecewiseMonotonicSpec Neg();
PiecewiseMonotonicSpec Abs();
PiecewiseMonotonicSpec Exp();
PiecewiseMonotonicSpec Ln();
PiecewiseMonotonicSpec Log10();
PiecewiseMonotonicSpec Sqrt();
PiecewiseMonotonicSpec Least(int arity);
PiecewiseMonotonicSpec Greatest(int arity);
// Comparisons and connectives as {0, 1}-valued functions.
PiecewiseMonotonicSpec Less(bool or_equal);
PiecewiseMonotonicSpec And();
PiecewiseMonotonicSpec Or();
PiecewiseMonotonicSpec Not();
}  // namespace monotone

// Exact hull of SIN / COS over each piece (clamped to [-1, 1] when a piece
// spans a full period).
KInterval SinImage(const KInterval& input);
KInterval CosImage(const KInterval& input);

// Bounds implied on one column by a predicate.
struct ColumnBounds {
  std::optional<KInterval> numeric;
  std::optional<std::vector<std::string>> text;
};

using BoundsMap = std::map<std::string, ColumnBounds>;

// Per-column bounds implied by a boolean filter. Conjunctions intersect,
// disjunctions union the per-branch bounds of columns constrained on every
// branch. Strict comparisons collapse to closed bounds, or step to the next
// integer when `integral` (bounds for integer columns). Anything that cannot
// be analyzed contributes no constraint.
BoundsMap ExtractIntervals(const Expr& filter,
                           int capacity = KInterval::kDefaultCapacity,
                           bool integral = false);

// Narrows column types of `schema` to the rows passing `filter`; constrained
// columns also lose nullability.
Schema RefineSchema(const Schema& schema, const Expr& filter);

// Pairs of columns required equal by top-level conjuncts of `condition`.
std::vector<std::pair<std::string, std::string>> ExtractColumnEqualities(
    const Expr& condition);

// Type (with a sound range) of a scalar expression over `input`. Throws
// BindError on unknown columns, type mismatches and misplaced aggregates.
DataType InferType(const Expr& expr, const Schema& input);

// Type of an aggregate over an argument of type `arg` (absent for COUNT(*)).
// `max_rows` bounds the input cardinality when known; `grouped` tells whether
// the Reduce has GROUP BY keys (every group then has at least one row).
DataType AggregateType(AggregateKind kind, const std::optional<DataType>& arg,
                       std::optional<std::uint64_t> max_rows, bool grouped);

}  // namespace qrw

#endif  // QRW_RANGE_H_
