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

#include "qrw/range.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qrw/error.h"

namespace qrw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTiny = std::numeric_limits<double>::denorm_min();
constexpr std::size_t kMaxBoxes = 4096;

using M = Monotonicity;

Interval All() { return {-kInf, kInf}; }
Interval NonNegative() { return {0, kInf}; }
Interval NonPositive() { return {-kInf, 0}; }

// 0 * inf is taken as 0: infinite endpoints are limits of finite values.
double SafeMul(double a, double b) {
  if (a == 0 || b == 0) return 0;
  return a * b;
}

int CapacityOf(std::span<const KInterval> inputs) {
  int k = KInterval::kDefaultCapacity;
  for (const KInterval& i : inputs) k = std::max(k, i.capacity());
  return k;
}

// Pushes both ends outward by a few ulps; transcendental functions are not
// guaranteed to be monotone at the last bit.
KInterval Widen(const KInterval& range, int ulps = 2) {
  std::vector<Interval> pieces;
  for (Interval p : range.pieces()) {
    for (int i = 0; i < ulps; ++i) {
      p.lo = std::nextafter(p.lo, -kInf);
      p.hi = std::nextafter(p.hi, kInf);
    }
    pieces.push_back(p);
  }
  return KInterval::FromPieces(std::move(pieces), range.capacity());
}

}  // namespace

KInterval Image(const PiecewiseMonotonicSpec& spec,
                std::span<const KInterval> inputs) {
  if (static_cast<int>(inputs.size()) != spec.arity) {
    throw InvalidArgumentError("image: arity mismatch");
  }
  const int capacity = CapacityOf(inputs);
  std::vector<KInterval> args(inputs.begin(), inputs.end());
  std::size_t boxes = 1;
  for (const KInterval& a : args) {
    if (a.empty()) return KInterval::Empty(capacity);
    boxes *= a.pieces().size();
    if (boxes > kMaxBoxes) break;
  }
  if (boxes > kMaxBoxes) {
    for (KInterval& a : args) a = KInterval::Closed(a.min(), a.max(), capacity);
  }

  const std::size_t n = args.size();
  std::vector<Interval> result;
  std::vector<std::size_t> index(n, 0);
  std::vector<double> lower(n);
  std::vector<double> upper(n);
  while (true) {
    for (const MonotoneCell& cell : spec.cells) {
      bool empty = false;
      for (std::size_t i = 0; i < n; ++i) {
        const Interval& piece = args[i].pieces()[index[i]];
        double lo = std::max(piece.lo, cell.domain[i].lo);
        double hi = std::min(piece.hi, cell.domain[i].hi);
        if (lo > hi) {
          empty = true;
          break;
        }
        bool increasing = cell.directions[i] == M::kIncreasing;
        lower[i] = increasing ? lo : hi;
        upper[i] = increasing ? hi : lo;
      }
      if (empty) continue;
      double a = spec.evaluate(lower);
      double b = spec.evaluate(upper);
      if (std::isnan(a) || std::isnan(b)) return KInterval::Full(capacity);
      result.push_back({std::min(a, b), std::max(a, b)});
    }
    // Odometer over piece combinations.
    std::size_t i = 0;
    while (i < n) {
      if (++index[i] < args[i].pieces().size()) break;
      index[i] = 0;
      ++i;
    }
    if (i == n) break;
  }
  return KInterval::FromPieces(std::move(result), capacity);
}

namespace monotone {

PiecewiseMonotonicSpec Add() {
  return {2,
          {{{All(), All()}, {M::kIncreasing, M::kIncreasing}}},
          [](std::span<const double> x) { return x[0] + x[1]; }};
}

PiecewiseMonotonicSpec Sub() {
  return {2,
          {{{All(), All()}, {M::kIncreasing, M::kDecreasing}}},
          [](std::span<const double> x) { return x[0] - x[1]; }};
}

PiecewiseMonotonicSpec Mul() {
  // d/dx (xy) = y and d/dy (xy) = x, so the sign cells fix both directions.
  return {2,
          {
              {{NonNegative(), NonNegative()}, {M::kIncreasing, M::kIncreasing}},
              {{NonNegative(), NonPositive()}, {M::kDecreasing, M::kIncreasing}},
              {{NonPositive(), NonNegative()}, {M::kIncreasing, M::kDecreasing}},
              {{NonPositive(), NonPositive()}, {M::kDecreasing, M::kDecreasing}},
          },
          [](std::span<const double> x) { return SafeMul(x[0], x[1]); }};
}

PiecewiseMonotonicSpec Div(bool truncate) {
  // d/dx (x/y) = 1/y and d/dy (x/y) = -x/y^2.
  const Interval positive{kTiny, kInf};
  const Interval negative{-kInf, -kTiny};
  PiecewiseMonotonicSpec spec{
      2,
      {
          {{NonNegative(), positive}, {M::kIncreasing, M::kDecreasing}},
          {{NonPositive(), positive}, {M::kIncreasing, M::kIncreasing}},
          {{NonNegative(), negative}, {M::kDecreasing, M::kDecreasing}},
          {{NonPositive(), negative}, {M::kDecreasing, M::kIncreasing}},
      },
      {}};
  if (truncate) {
    spec.evaluate = [](std::span<const double> x) {
      return std::trunc(x[0] / x[1]);
    };
  } else {
    spec.evaluate = [](std::span<const double> x) { return x[0] / x[1]; };
  }
  return spec;
}

PiecewiseMonotonicSpec Neg() {
  return {1,
          {{{All()}, {M::kDecreasing}}},
          [](std::span<const double> x) { return -x[0]; }};
}

PiecewiseMonotonicSpec Abs() {
  return {1,
          {{{NonPositive()}, {M::kDecreasing}},
           {{NonNegative()}, {M::kIncreasing}}},
          [](std::span<const double> x) { return std::fabs(x[0]); }};
}

PiecewiseMonotonicSpec Exp() {
  return {1,
          {{{All()}, {M::kIncreasing}}},
          [](std::span<const double> x) { return std::exp(x[0]); }};
}

PiecewiseMonotonicSpec Ln() {
  return {1,
          {{{{kTiny, kInf}}, {M::kIncreasing}}},
          [](std::span<const double> x) { return std::log(x[0]); }};
}

PiecewiseMonotonicSpec Log10() {
  return {1,
          {{{{kTiny, kInf}}, {M::kIncreasing}}},
          [](std::span<const double> x) { return std::log10(x[0]); }};
}

PiecewiseMonotonicSpec Sqrt() {
  return {1,
          {{{NonNegative()}, {M::kIncreasing}}},
          [](std::span<const double> x) { return std::sqrt(x[0]); }};
}

PiecewiseMonotonicSpec Least(int arity) {
  MonotoneCell cell{std::vector<Interval>(arity, All()),
                    std::vector<M>(arity, M::kIncreasing)};
  return {arity, {cell}, [](std::span<const double> x) {
            return *std::min_element(x.begin(), x.end());
          }};
}

PiecewiseMonotonicSpec Greatest(int arity) {
  MonotoneCell cell{std::vector<Interval>(arity, All()),
                    std::vector<M>(arity, M::kIncreasing)};
  return {arity, {cell}, [](std::span<const double> x) {
            return *std::max_element(x.begin(), x.end());
          }};
}

PiecewiseMonotonicSpec Less(bool or_equal) {
  PiecewiseMonotonicSpec spec{
      2, {{{All(), All()}, {M::kDecreasing, M::kIncreasing}}}, {}};
  if (or_equal) {
    spec.evaluate = [](std::span<const double> x) {
      return x[0] <= x[1] ? 1.0 : 0.0;
    };
  } else {
    spec.evaluate = [](std::span<const double> x) {
      return x[0] < x[1] ? 1.0 : 0.0;
    };
  }
  return spec;
}

PiecewiseMonotonicSpec And() {
  return {2,
          {{{All(), All()}, {M::kIncreasing, M::kIncreasing}}},
          [](std::span<const double> x) { return std::min(x[0], x[1]); }};
}

PiecewiseMonotonicSpec Or() {
  return {2,
          {{{All(), All()}, {M::kIncreasing, M::kIncreasing}}},
          [](std::span<const double> x) { return std::max(x[0], x[1]); }};
}

PiecewiseMonotonicSpec Not() {
  return {1,
          {{{All()}, {M::kDecreasing}}},
          [](std::span<const double> x) { return 1.0 - x[0]; }};
}

}  // namespace monotone

namespace {

// Hull of a periodic function over [lo, hi] given the phases (mod 2 pi) of
// its maxima and minima.
KInterval PeriodicImage(const KInterval& input, double (*f)(double),
                        double max_phase, double min_phase) {
  constexpr double kTwoPi = 2 * std::numbers::pi;
  std::vector<Interval> pieces;
  for (const Interval& p : input.pieces()) {
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || p.hi - p.lo >= kTwoPi) {
      pieces.push_back({-1, 1});
      continue;
    }
    double a = f(p.lo);
    double b = f(p.hi);
    double lo = std::min(a, b);
    double hi = std::max(a, b);
    auto hits = [&](double phase) {
      double k = std::ceil((p.lo - phase) / kTwoPi);
      return phase + k * kTwoPi <= p.hi;
    };
    if (hits(max_phase)) hi = 1;
    if (hits(min_phase)) lo = -1;
    pieces.push_back({lo, hi});
  }
  KInterval widened =
      Widen(KInterval::FromPieces(std::move(pieces), input.capacity()));
  return Intersect(widened, KInterval::Closed(-1, 1, input.capacity()));
}

double Sin(double x) { return std::sin(x); }
double Cos(double x) { return std::cos(x); }

}  // namespace

KInterval SinImage(const KInterval& input) {
  return PeriodicImage(input, &Sin, std::numbers::pi / 2,
                       -std::numbers::pi / 2);
}

KInterval CosImage(const KInterval& input) {
  return PeriodicImage(input, &Cos, 0, std::numbers::pi);
}

// ---------------------------------------------------------------------------
// Predicate analysis

namespace {

std::optional<double> NumericLiteral(const Expr& e) {
  if (!e.is_literal()) return std::nullopt;
  return e.literal().ToDouble();
}

ColumnBounds IntersectBounds(const ColumnBounds& a, const ColumnBounds& b) {
  ColumnBounds out;
  if (a.numeric && b.numeric) {
    out.numeric = Intersect(*a.numeric, *b.numeric);
  } else {
    out.numeric = a.numeric ? a.numeric : b.numeric;
  }
  if (a.text && b.text) {
    std::vector<std::string> both;
    std::set_intersection(a.text->begin(), a.text->end(), b.text->begin(),
                          b.text->end(), std::back_inserter(both));
    out.text = std::move(both);
  } else {
    out.text = a.text ? a.text : b.text;
  }
  return out;
}

// nullopt when the union is unconstrained.
std::optional<ColumnBounds> UnionBounds(const ColumnBounds& a,
                                        const ColumnBounds& b) {
  ColumnBounds out;
  if (a.numeric && b.numeric) out.numeric = Union(*a.numeric, *b.numeric);
  if (a.text && b.text) {
    std::vector<std::string> all;
    std::set_union(a.text->begin(), a.text->end(), b.text->begin(),
                   b.text->end(), std::back_inserter(all));
    out.text = std::move(all);
  }
  if (!out.numeric && !out.text) return std::nullopt;
  return out;
}

std::optional<Function> Mirror(Function f) {
  switch (f) {
    case Function::kEq: return Function::kEq;
    case Function::kLt: return Function::kGt;
    case Function::kLe: return Function::kGe;
    case Function::kGt: return Function::kLt;
    case Function::kGe: return Function::kLe;
    default: return std::nullopt;
  }
}

}  // namespace

BoundsMap ExtractIntervals(const Expr& filter, int capacity, bool integral) {
  BoundsMap out;
  if (!filter.is_function()) return out;
  const auto& a = filter.args();
  switch (filter.function()) {
    case Function::kAnd: {
      out = ExtractIntervals(a[0], capacity, integral);
      for (auto& [name, bounds] : ExtractIntervals(a[1], capacity, integral)) {
        auto it = out.find(name);
        if (it == out.end()) {
          out.emplace(name, bounds);
        } else {
          it->second = IntersectBounds(it->second, bounds);
        }
      }
      return out;
    }
    case Function::kOr: {
      BoundsMap left = ExtractIntervals(a[0], capacity, integral);
      BoundsMap right = ExtractIntervals(a[1], capacity, integral);
      for (auto& [name, bounds] : left) {
        auto it = right.find(name);
        if (it == right.end()) continue;
        if (auto merged = UnionBounds(bounds, it->second)) {
          out.emplace(name, *merged);
        }
      }
      return out;
    }
    case Function::kEq:
    case Function::kLt:
    case Function::kLe:
    case Function::kGt:
    case Function::kGe: {
      Function op = filter.function();
      const Expr* column = &a[0];
      const Expr* literal = &a[1];
      if (!column->is_column()) {
        std::swap(column, literal);
        op = *Mirror(op);
      }
      if (!column->is_column() || !literal->is_literal()) return out;
      if (literal->literal().is_text()) {
        if (op == Function::kEq) {
          out[column->column_name()].text =
              std::vector<std::string>{literal->literal().as_text()};
        }
        return out;
      }
      std::optional<double> v = NumericLiteral(*literal);
      if (!v || std::isnan(*v)) return out;
      KInterval range;
      switch (op) {
        case Function::kEq:
          range = KInterval::Point(*v, capacity);
          break;
        case Function::kLt:
          range = KInterval::Closed(
              -kInf, integral ? std::ceil(*v) - 1 : *v, capacity);
          break;
        case Function::kLe:
          range = KInterval::Closed(-kInf, *v, capacity);
          break;
        case Function::kGt:
          range = KInterval::Closed(integral ? std::floor(*v) + 1 : *v, kInf,
                                    capacity);
          break;
        default:
          range = KInterval::Closed(*v, kInf, capacity);
          break;
      }
      out[column->column_name()].numeric = range;
      return out;
    }
    case Function::kInList: {
      if (!a[0].is_column()) return out;
      std::vector<double> numbers;
      std::vector<std::string> texts;
      for (std::size_t i = 1; i < a.size(); ++i) {
        if (!a[i].is_literal()) return out;
        const Value& v = a[i].literal();
        if (v.is_null()) continue;
        if (v.is_text()) {
          texts.push_back(v.as_text());
        } else {
          numbers.push_back(*v.ToDouble());
        }
      }
      ColumnBounds bounds;
      if (texts.empty()) {
        bounds.numeric = KInterval::FromValues(numbers, capacity);
      } else if (numbers.empty()) {
        std::sort(texts.begin(), texts.end());
        texts.erase(std::unique(texts.begin(), texts.end()), texts.end());
        bounds.text = std::move(texts);
      } else {
        return out;
      }
      out[a[0].column_name()] = std::move(bounds);
      return out;
    }
    default:
      return out;
  }
}

Schema RefineSchema(const Schema& schema, const Expr& filter) {
  BoundsMap bounds = ExtractIntervals(filter);
  if (bounds.empty()) return schema;
  BoundsMap integer_bounds =
      ExtractIntervals(filter, KInterval::kDefaultCapacity, true);
  std::vector<Column> columns = schema.columns();
  for (Column& c : columns) {
    const bool integer = c.type.kind() == TypeKind::kInteger;
    auto it = integer ? integer_bounds.find(c.name) : bounds.find(c.name);
    if (it == (integer ? integer_bounds.end() : bounds.end())) continue;
    const ColumnBounds& b = it->second;
    if (c.type.is_text()) {
      if (!b.text) continue;
      std::vector<std::string> values = *b.text;
      if (c.type.text_values()) {
        std::vector<std::string> both;
        std::set_intersection(values.begin(), values.end(),
                              c.type.text_values()->begin(),
                              c.type.text_values()->end(),
                              std::back_inserter(both));
        values = std::move(both);
      }
      c.type = c.type.WithTextValues(std::move(values)).WithNullable(false);
    } else if (b.numeric) {
      c.type = c.type.WithRange(Intersect(c.type.range(), *b.numeric))
                   .WithNullable(false);
    }
  }
  return Schema(std::move(columns));
}

std::vector<std::pair<std::string, std::string>> ExtractColumnEqualities(
    const Expr& condition) {
  std::vector<std::pair<std::string, std::string>> out;
  if (!condition.is_function()) return out;
  const auto& a = condition.args();
  if (condition.function() == Function::kAnd) {
    out = ExtractColumnEqualities(a[0]);
    auto right = ExtractColumnEqualities(a[1]);
    out.insert(out.end(), right.begin(), right.end());
  } else if (condition.function() == Function::kEq && a[0].is_column() &&
             a[1].is_column()) {
    out.emplace_back(a[0].column_name(), a[1].column_name());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Type inference

namespace {

bool AnyNullable(std::span<const DataType> types) {
  return std::any_of(types.begin(), types.end(),
                     [](const DataType& t) { return t.nullable(); });
}

bool AnyUnbounded(std::span<const DataType> types) {
  return std::any_of(types.begin(), types.end(), [](const DataType& t) {
    return !t.range().empty() && !t.range().IsBounded();
  });
}

void RequireNumeric(const DataType& t, const Expr& e) {
  if (!t.is_numeric()) {
    throw BindError("expected a number in " + e.ToString() + ", got " +
                    t.ToString());
  }
}

void RequireBoolean(const DataType& t, const Expr& e) {
  if (!t.is_boolean()) {
    throw BindError("expected a boolean in " + e.ToString() + ", got " +
                    t.ToString());
  }
}

bool Comparable(const DataType& a, const DataType& b) {
  if (a.is_numeric() && b.is_numeric()) return true;
  return a.kind() == b.kind();
}

bool IsNullOnly(const DataType& t) {
  return t.nullable() && t.kind() == TypeKind::kFloat && t.range().empty();
}

DataType Numeric(bool integer, const KInterval& range) {
  return integer ? DataType::Integer(range) : DataType::Float(range);
}

DataType InferFunction(const Expr& expr, const Schema& input) {
  const auto& a = expr.args();
  std::vector<DataType> types;
  types.reserve(a.size());
  for (const Expr& arg : a) types.push_back(InferType(arg, input));
  auto ranges = [&]() {
    std::vector<KInterval> r;
    for (const DataType& t : types) r.push_back(t.range());
    return r;
  };
  const bool nullable = AnyNullable(types);
  const Function f = expr.function();

  switch (f) {
    case Function::kAdd:
    case Function::kSub:
    case Function::kMul:
    case Function::kDiv: {
      RequireNumeric(types[0], expr);
      RequireNumeric(types[1], expr);
      bool integer = types[0].kind() == TypeKind::kInteger &&
                     types[1].kind() == TypeKind::kInteger;
      PiecewiseMonotonicSpec spec = f == Function::kAdd   ? monotone::Add()
                                    : f == Function::kSub ? monotone::Sub()
                                    : f == Function::kMul ? monotone::Mul()
                                                          : monotone::Div(integer);
      auto r = ranges();
      bool may_be_null = nullable || AnyUnbounded(types);
      if (f == Function::kDiv && !integer) {
        // A float-typed CASE or COALESCE may still carry integers at run
        // time, and the engine then divides with truncation.
        KInterval image = Union(Image(monotone::Div(false), r),
                                Image(monotone::Div(true), r));
        if (types[1].range().Contains(0)) may_be_null = true;
        return DataType::Float(image).WithNullable(may_be_null);
      }
      if (f == Function::kDiv && types[1].range().Contains(0)) {
        may_be_null = true;
      }
      return Numeric(integer, Image(spec, r)).WithNullable(may_be_null);
    }
    case Function::kNeg: {
      RequireNumeric(types[0], expr);
      auto r = ranges();
      return Numeric(types[0].kind() == TypeKind::kInteger,
                     Image(monotone::Neg(), r))
          .WithNullable(nullable);
    }
    case Function::kEq:
    case Function::kNe:
    case Function::kLt:
    case Function::kLe:
    case Function::kGt:
    case Function::kGe: {
      if (!Comparable(types[0], types[1])) {
        throw BindError("cannot compare " + types[0].ToString() + " with " +
                        types[1].ToString() + " in " + expr.ToString());
      }
      if (types[0].is_text()) return DataType::Boolean().WithNullable(nullable);
      const KInterval& x = types[0].range();
      const KInterval& y = types[1].range();
      KInterval result;
      if (f == Function::kEq || f == Function::kNe) {
        bool can_equal = !Intersect(x, y).empty();
        bool can_differ = !(x.IsPoints() && y.IsPoints() &&
                            x.pieces().size() == 1 && x == y);
        if (x.empty() || y.empty()) can_equal = can_differ = false;
        bool can_true = f == Function::kEq ? can_equal : can_differ;
        bool can_false = f == Function::kEq ? can_differ : can_equal;
        std::vector<double> values;
        if (can_false) values.push_back(0);
        if (can_true) values.push_back(1);
        result = KInterval::FromValues(values);
      } else if (f == Function::kLt || f == Function::kLe) {
        std::vector<KInterval> r{x, y};
        result = Image(monotone::Less(f == Function::kLe), r);
      } else {
        std::vector<KInterval> r{y, x};
        result = Image(monotone::Less(f == Function::kGe), r);
      }
      return DataType::Boolean(result).WithNullable(nullable);
    }
    case Function::kAnd:
    case Function::kOr:
    case Function::kNot: {
      for (const DataType& t : types) RequireBoolean(t, expr);
      if (nullable && f != Function::kNot) {
        // Three-valued logic: FALSE AND NULL is FALSE, TRUE OR NULL is TRUE.
        bool and_op = f == Function::kAnd;
        bool x_false = types[0].range().Contains(0);
        bool x_true = types[0].range().Contains(1);
        bool y_false = types[1].range().Contains(0);
        bool y_true = types[1].range().Contains(1);
        std::vector<double> values;
        if (and_op ? (x_false || y_false) : (x_false && y_false)) {
          values.push_back(0);
        }
        if (and_op ? (x_true && y_true) : (x_true || y_true)) {
          values.push_back(1);
        }
        return DataType::Boolean(KInterval::FromValues(values))
            .WithNullable(true);
      }
      auto r = ranges();
      PiecewiseMonotonicSpec spec = f == Function::kAnd  ? monotone::And()
                                    : f == Function::kOr ? monotone::Or()
                                                         : monotone::Not();
      return DataType::Boolean(Image(spec, r)).WithNullable(nullable);
    }
    case Function::kAbs: {
      RequireNumeric(types[0], expr);
      auto r = ranges();
      return Numeric(types[0].kind() == TypeKind::kInteger,
                     Image(monotone::Abs(), r))
          .WithNullable(nullable);
    }
    case Function::kExp:
    case Function::kLn:
    case Function::kLog10:
    case Function::kSqrt: {
      RequireNumeric(types[0], expr);
      auto r = ranges();
      const KInterval& x = types[0].range();
      bool may_be_null = nullable;
      PiecewiseMonotonicSpec spec;
      switch (f) {
        case Function::kExp:
          spec = monotone::Exp();
          break;
        case Function::kLn:
          spec = monotone::Ln();
          may_be_null |= !x.empty() && x.min() <= 0;
          break;
        case Function::kLog10:
          spec = monotone::Log10();
          may_be_null |= !x.empty() && x.min() <= 0;
          break;
        default:
          spec = monotone::Sqrt();
          may_be_null |= !x.empty() && x.min() < 0;
          break;
      }
      KInterval image = Image(spec, r);
      if (f != Function::kSqrt) image = Widen(image);
      return DataType::Float(image).WithNullable(may_be_null);
    }
    case Function::kSin:
    case Function::kCos: {
      RequireNumeric(types[0], expr);
      KInterval image = f == Function::kSin ? SinImage(types[0].range())
                                            : CosImage(types[0].range());
      return DataType::Float(image).WithNullable(nullable);
    }
    case Function::kLeast:
    case Function::kGreatest: {
      if (a.empty()) throw BindError(std::string(FunctionName(f)) + " needs arguments");
      bool all_text = std::all_of(types.begin(), types.end(),
                                  [](const DataType& t) { return t.is_text(); });
      if (all_text) {
        DataType out = types[0];
        for (std::size_t i = 1; i < types.size(); ++i) {
          out = UnifyTypes(out, types[i]);
        }
        bool all_nullable = std::all_of(
            types.begin(), types.end(),
            [](const DataType& t) { return t.nullable(); });
        return out.WithNullable(all_nullable);
      }
      bool integer = true;
      for (const DataType& t : types) {
        RequireNumeric(t, expr);
        integer &= t.kind() == TypeKind::kInteger;
      }
      bool all_nullable = std::all_of(
          types.begin(), types.end(),
          [](const DataType& t) { return t.nullable(); });
      KInterval image;
      if (nullable) {
        // NULL arguments are skipped, so the result is one of the others.
        for (const DataType& t : types) image = Union(image, t.range());
      } else {
        auto r = ranges();
        int n = static_cast<int>(a.size());
        image = Image(f == Function::kLeast ? monotone::Least(n)
                                            : monotone::Greatest(n),
                      r);
      }
      return Numeric(integer, image).WithNullable(all_nullable);
    }
    case Function::kCase: {
      if (a.size() < 3 || a.size() % 2 == 0) {
        throw BindError("malformed CASE expression");
      }
      for (std::size_t i = 0; i + 1 < a.size(); i += 2) {
        if (!IsNullOnly(types[i])) RequireBoolean(types[i], expr);
      }
      DataType out = types[1];
      for (std::size_t i = 3; i < a.size(); i += 2) {
        out = UnifyTypes(out, types[i]);
      }
      return UnifyTypes(out, types.back());
    }
    case Function::kInList: {
      const DataType& needle = types[0];
      bool may_be_null = needle.nullable();
      bool can_true = false;
      std::vector<double> numbers;
      std::vector<std::string> texts;
      for (std::size_t i = 1; i < a.size(); ++i) {
        if (IsNullOnly(types[i])) {
          may_be_null = true;
          continue;
        }
        if (!Comparable(needle, types[i])) {
          throw BindError("IN list item type mismatch in " + expr.ToString());
        }
        if (types[i].nullable()) may_be_null = true;
        if (needle.is_text()) {
          if (a[i].is_literal() && a[i].literal().is_text()) {
            texts.push_back(a[i].literal().as_text());
          }
          can_true = true;
        } else {
          if (!Intersect(needle.range(), types[i].range()).empty()) {
            can_true = true;
          }
          if (types[i].range().IsPoints()) {
            for (double v : types[i].range().Points()) numbers.push_back(v);
          }
        }
      }
      bool can_false = true;
      if (!needle.is_text() && needle.range().IsPoints()) {
        can_false = !needle.range().IsSubsetOf(KInterval::FromValues(
            numbers, static_cast<int>(numbers.size()) + 1));
      }
      if (needle.is_text() && needle.text_values()) {
        can_false = !std::all_of(
            needle.text_values()->begin(), needle.text_values()->end(),
            [&](const std::string& s) {
              return std::find(texts.begin(), texts.end(), s) != texts.end();
            });
      }
      std::vector<double> values;
      if (can_false) values.push_back(0);
      if (can_true) values.push_back(1);
      return DataType::Boolean(KInterval::FromValues(values))
          .WithNullable(may_be_null);
    }
    case Function::kIsNull:
      return DataType::Boolean(types[0].nullable() ? KInterval::Closed(0, 1)
                                                   : KInterval::Point(0));
    case Function::kIsNotNull:
      return DataType::Boolean(types[0].nullable() ? KInterval::Closed(0, 1)
                                                   : KInterval::Point(1));
    case Function::kCoalesce: {
      if (a.empty()) throw BindError("COALESCE needs arguments");
      DataType out = types[0];
      for (std::size_t i = 1; i < types.size(); ++i) {
        out = UnifyTypes(out, types[i]);
      }
      bool all_nullable = std::all_of(
          types.begin(), types.end(),
          [](const DataType& t) { return t.nullable(); });
      return out.WithNullable(all_nullable);
    }
    case Function::kCastText: {
      const DataType& t = types[0];
      std::optional<std::vector<std::string>> values;
      if (t.is_text()) {
        values = t.text_values();
      } else if (t.kind() == TypeKind::kInteger && t.range().IsPoints()) {
        values.emplace();
        for (double v : t.range().Points()) {
          values->push_back(std::to_string(static_cast<std::int64_t>(v)));
        }
      }
      return DataType::Text(values).WithNullable(t.nullable());
    }
    case Function::kCastFloat: {
      const DataType& t = types[0];
      if (t.is_text()) return DataType::Float().WithNullable(t.nullable());
      return DataType::Float(t.range()).WithNullable(t.nullable());
    }
    case Function::kCastInteger: {
      const DataType& t = types[0];
      if (t.is_text()) return DataType::Integer().WithNullable(t.nullable());
      std::vector<Interval> pieces;
      for (const Interval& p : t.range().pieces()) {
        pieces.push_back({std::floor(p.lo), std::ceil(p.hi)});
      }
      return DataType::Integer(KInterval::FromPieces(std::move(pieces)))
          .WithNullable(t.nullable());
    }
    case Function::kRandom:
      return DataType::Float(KInterval::Closed(0, 1));
  }
  throw BindError("unsupported function in " + expr.ToString());
}

}  // namespace

DataType InferType(const Expr& expr, const Schema& input) {
  switch (expr.kind()) {
    case Expr::Kind::kColumn:
      return input.Get(expr.column_name()).type;
    case Expr::Kind::kLiteral: {
      const Value& v = expr.literal();
      if (v.is_null()) return DataType::Float(KInterval()).WithNullable(true);
      if (v.is_bool()) return DataType::Boolean(KInterval::Point(v.as_bool()));
      if (v.is_int()) {
        return DataType::Integer(
            KInterval::Point(static_cast<double>(v.as_int())));
      }
      if (v.is_double()) {
        return DataType::Float(KInterval::Point(v.as_double_exact()));
      }
      return DataType::Text(std::vector<std::string>{v.as_text()});
    }
    case Expr::Kind::kAggregate:
      throw BindError("aggregate not allowed here: " + expr.ToString());
    case Expr::Kind::kFunction:
      return InferFunction(expr, input);
  }
  throw BindError("unknown expression");
}

DataType AggregateType(AggregateKind kind, const std::optional<DataType>& arg,
                       std::optional<std::uint64_t> max_rows, bool grouped) {
  const double rows =
      max_rows ? static_cast<double>(*max_rows) : kInf;
  if (kind == AggregateKind::kCountAll || kind == AggregateKind::kCount) {
    double lo = (grouped && kind == AggregateKind::kCountAll) ? 1 : 0;
    return DataType::Integer(KInterval::Closed(lo, rows));
  }
  if (!arg) throw BindError("aggregate needs an argument");
  // Empty input (global aggregation) or all-NULL groups yield NULL.
  const bool nullable = !grouped || arg->nullable();
  if (kind == AggregateKind::kFirst) return *arg;
  if (kind == AggregateKind::kMin || kind == AggregateKind::kMax) {
    return arg->WithNullable(nullable);
  }
  if (!arg->is_numeric() && !arg->is_boolean()) {
    throw BindError(std::string(AggregateName(kind)) +
                    " needs a numeric argument, got " + arg->ToString());
  }
  const KInterval& r = arg->range();
  if (r.empty()) return DataType::Float(KInterval()).WithNullable(true);
  const double lo = r.min();
  const double hi = r.max();
  switch (kind) {
    case AggregateKind::kSum: {
      double sum_lo = lo < 0 ? SafeMul(rows, lo) : 0;
      double sum_hi = hi > 0 ? SafeMul(rows, hi) : 0;
      KInterval range = KInterval::Closed(sum_lo, sum_hi);
      return (arg->kind() == TypeKind::kFloat ? DataType::Float(range)
                                              : DataType::Integer(range))
          .WithNullable(nullable);
    }
    case AggregateKind::kAvg:
      return DataType::Float(KInterval::Closed(lo, hi)).WithNullable(nullable);
    case AggregateKind::kVariance:
    case AggregateKind::kStddev: {
      // Sample variance of values in [lo, hi] peaks at two points: (hi-lo)^2/2.
      double width = hi - lo;
      double variance = width * width / 2;
      double bound = kind == AggregateKind::kVariance ? variance
                                                      : std::sqrt(variance);
      KInterval range = Intersect(Widen(KInterval::Closed(0, bound)),
                                  KInterval::Closed(0, kInf));
      return DataType::Float(range).WithNullable(true);
    }
    default:
      break;
  }
  throw BindError("unsupported aggregate");
}

}  // namespace qrw
