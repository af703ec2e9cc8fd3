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

#include "qrw/dp_mechanisms.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

#include "qrw/error.h"
#include "qrw/privacy_unit.h"
#include "qrw/range.h"

namespace qrw {
namespace {

Expr F(double v) { return Lit(Value(v)); }
Expr Add(Expr a, Expr b) { return Call(Function::kAdd, {a, b}); }
Expr Sub(Expr a, Expr b) { return Call(Function::kSub, {a, b}); }
Expr Mul(Expr a, Expr b) { return Call(Function::kMul, {a, b}); }
Expr Div(Expr a, Expr b) { return Call(Function::kDiv, {a, b}); }
Expr Greatest(Expr a, Expr b) { return Call(Function::kGreatest, {a, b}); }
Expr Least(Expr a, Expr b) { return Call(Function::kLeast, {a, b}); }
Expr Sqrt(Expr a) { return Call(Function::kSqrt, {a}); }
Expr AsFloat(Expr a) { return Call(Function::kCastFloat, {a}); }
Expr Sum(Expr a) { return Expr::Aggregate(AggregateKind::kSum, a); }
Expr First(Expr a) { return Expr::Aggregate(AggregateKind::kFirst, a); }

std::string Indexed(const char* prefix, std::size_t i) {
  return prefix + std::to_string(i);
}

void CheckShare(double epsilon, double delta, const std::string& what) {
  if (epsilon < kMinMechanismBudget || delta < kMinMechanismBudget) {
    throw RewriteError("privacy budget share of " + what +
                       " is below 1e-9; raise epsilon/delta or simplify "
                       "the query");
  }
}

std::vector<std::vector<Value>> Cartesian(
    const std::vector<std::vector<Value>>& domains) {
  std::vector<std::vector<Value>> rows = {{}};
  for (const std::vector<Value>& domain : domains) {
    std::vector<std::vector<Value>> next;
    for (const std::vector<Value>& row : rows) {
      for (const Value& v : domain) {
        next.push_back(row);
        next.back().push_back(v);
      }
    }
    rows = std::move(next);
  }
  return rows;
}

}  // namespace

void ValidateBudget(const Budget& budget) {
  if (!(budget.epsilon > 0) || !std::isfinite(budget.epsilon)) {
    throw InvalidArgumentError("epsilon must be positive");
  }
  if (!(budget.delta > 0) || !(budget.delta < 1)) {
    throw InvalidArgumentError("delta must lie in (0, 1)");
  }
}

double GaussianSigma(double epsilon, double delta, double c) {
  ValidateBudget({epsilon, delta});
  if (!(c > 0) || !std::isfinite(c)) {
    throw InvalidArgumentError("sensitivity must be positive");
  }
  return std::sqrt(2 * std::log(1.25 / delta)) * c / epsilon;
}

std::vector<double> ClipNorm(std::span<const double> s, double c) {
  if (!(c > 0)) throw InvalidArgumentError("clipping norm must be positive");
  double norm = 0;
  for (double v : s) norm += v * v;
  norm = std::sqrt(norm);
  const double factor = std::max(1.0, norm / c);
  std::vector<double> out(s.begin(), s.end());
  for (double& v : out) v /= factor;
  return out;
}

TauThresholdSpec MakeTauThreshold(double epsilon_keys, double delta_keys) {
  TauThresholdSpec spec;
  spec.epsilon_keys = epsilon_keys;
  spec.delta_keys = delta_keys;
  spec.sigma_keys = GaussianSigma(epsilon_keys, delta_keys / 2, 1);
  boost::math::normal normal;
  spec.tau =
      1 + spec.sigma_keys * boost::math::quantile(normal, 1 - delta_keys / 2);
  return spec;
}

Expr GaussianNoise() {
  Expr u1 = Call(Function::kRandom, {});
  Expr u2 = Call(Function::kRandom, {});
  Expr radius = Sqrt(Mul(F(-2), Call(Function::kLn, {Sub(F(1), u1)})));
  Expr angle = Call(Function::kCos, {Mul(F(2 * std::numbers::pi), u2)});
  return Mul(radius, angle);
}

Decomposition DecomposeAggregates(const Relation& reduce) {
  const ReduceNode& node = reduce.reduce();
  const Schema& input = node.input->schema();
  Decomposition d;
  d.keys = node.group_by;

  auto add_sum = [&](const Expr& value, const Expr& source,
                     AggregateKind kind) -> Expr {
    for (const SumSpec& s : d.sums) {
      if (s.value == value) return Col(s.name);
    }
    const KInterval range = InferType(value, input).range();
    if (!range.IsBounded()) {
      const std::string arg = source.ToString();
      throw RewriteError(
          "cannot bound " + std::string(AggregateName(kind)) + "(" + arg +
          ") under differential privacy: " + arg +
          " has no finite range; add a WHERE condition such as " + arg +
          " < b or " + arg + " BETWEEN a AND b");
    }
    std::string name = Indexed("_s", d.sums.size());
    d.sums.push_back(
        {name, value, std::max(std::abs(range.min()), std::abs(range.max()))});
    return Col(name);
  };
  auto count_of = [&](const Expr& x, AggregateKind kind) {
    if (!InferType(x, input).nullable()) return add_sum(F(1), F(1), kind);
    return add_sum(Call(Function::kCase,
                        {Call(Function::kIsNull, {x}), F(0), F(1)}),
                   x, kind);
  };
  auto sum_of = [&](const Expr& x, AggregateKind kind) {
    return add_sum(Call(Function::kCoalesce, {AsFloat(x), F(0)}), x, kind);
  };
  auto square_sum_of = [&](const Expr& x, AggregateKind kind) {
    return add_sum(
        Call(Function::kCoalesce, {Mul(AsFloat(x), AsFloat(x)), F(0)}), x,
        kind);
  };
  auto variance_of = [&](const Expr& x, AggregateKind kind) {
    Expr s = sum_of(x, kind);
    Expr s2 = square_sum_of(x, kind);
    Expr n = Greatest(F(2), count_of(x, kind));
    Expr var = Greatest(F(0), Div(Sub(s2, Div(Mul(s, s), n)), Sub(n, F(1))));
    const KInterval range = InferType(x, input).range();
    const double width = range.max() - range.min();
    return Least(var, F(width * width / 2));
  };

  auto rewrite = [&](const Expr& e) -> std::optional<Expr> {
    if (!e.is_aggregate()) return std::nullopt;
    const AggregateKind kind = e.aggregate();
    if (kind == AggregateKind::kCountAll) {
      return add_sum(F(1), F(1), kind);
    }
    const Expr& x = e.args().at(0);
    switch (kind) {
      case AggregateKind::kFirst:
        for (std::size_t i = 0; i < d.keys.size(); ++i) {
          if (d.keys[i] == x) return Col(Indexed("_k", i));
        }
        throw RewriteError("FIRST(" + x.ToString() + ") is not a grouping key");
      case AggregateKind::kCount:
        return count_of(x, kind);
      case AggregateKind::kSum:
        return sum_of(x, kind);
      case AggregateKind::kAvg: {
        Expr s = sum_of(x, kind);
        Expr n = count_of(x, kind);
        const KInterval range = InferType(x, input).range();
        return Least(F(range.max()),
                     Greatest(F(range.min()), Div(s, Greatest(F(1), n))));
      }
      case AggregateKind::kVariance:
        return variance_of(x, kind);
      case AggregateKind::kStddev:
        return Sqrt(variance_of(x, kind));
      default:
        throw RewriteError(std::string(AggregateName(kind)) +
                           " is not supported under differential privacy");
    }
  };
  for (const NamedExpr& a : node.aggregates) {
    d.outputs.push_back({a.name, a.expr.Transform(rewrite)});
  }
  return d;
}

std::optional<std::vector<std::vector<Value>>> PublicKeyValues(
    const Relation& reduce, std::size_t max_combinations) {
  const ReduceNode& node = reduce.reduce();
  std::vector<std::vector<Value>> domains;
  double combinations = 1;
  for (const Expr& key : node.group_by) {
    DataType type = InferType(key, node.input->schema());
    if (type.nullable()) return std::nullopt;
    std::vector<Value> values;
    switch (type.kind()) {
      case TypeKind::kText:
        if (!type.text_values()) return std::nullopt;
        for (const std::string& v : *type.text_values()) values.push_back(v);
        break;
      case TypeKind::kBoolean:
        if (type.range().Contains(0)) values.push_back(false);
        if (type.range().Contains(1)) values.push_back(true);
        break;
      case TypeKind::kFloat:
        if (!type.range().IsPoints()) return std::nullopt;
        for (double v : type.range().Points()) values.push_back(v);
        break;
      case TypeKind::kInteger: {
        KInterval range = type.range().RoundedToIntegers();
        if (!range.IsBounded()) return std::nullopt;
        double count = 0;
        for (const Interval& p : range.pieces()) count += p.hi - p.lo + 1;
        if (count > static_cast<double>(max_combinations)) return std::nullopt;
        for (const Interval& p : range.pieces()) {
          for (double v = p.lo; v <= p.hi; ++v) {
            values.push_back(static_cast<std::int64_t>(v));
          }
        }
        break;
      }
    }
    if (values.empty()) return std::nullopt;
    combinations *= static_cast<double>(values.size());
    if (combinations > static_cast<double>(max_combinations)) {
      return std::nullopt;
    }
    domains.push_back(std::move(values));
  }
  return domains;
}

DpReduce RewriteReduceDp(const Relation& reduce, const RelationPtr& pup_input,
                         const Budget& budget, const DpOptions& options) {
  ValidateBudget(budget);
  if (!(options.clip_multiplier > 0)) {
    throw InvalidArgumentError("clip multiplier must be positive");
  }
  if (!(options.key_fraction > 0) || !(options.key_fraction < 1)) {
    throw InvalidArgumentError("key fraction must lie in (0, 1)");
  }
  if (!pup_input->schema().Find(kPidColumn)) {
    throw RewriteError("input of a DP Reduce lacks the privacy id column");
  }
  const Decomposition d = DecomposeAggregates(reduce);
  const std::size_t n_keys = d.keys.size();
  std::optional<std::vector<std::vector<Value>>> public_keys =
      PublicKeyValues(reduce, options.max_public_keys);
  const bool thresholded = !public_keys.has_value();

  std::vector<double> clip(d.sums.size());
  std::size_t noised = 0;
  for (std::size_t j = 0; j < d.sums.size(); ++j) {
    clip[j] = options.clip_multiplier * d.sums[j].bound;
    if (clip[j] > 0) ++noised;
  }

  DpReduce result;
  result.public_keys = !thresholded;
  double key_share = 0;
  if (thresholded) key_share = noised == 0 ? 1.0 : options.key_fraction;
  if (thresholded) {
    const double eps = budget.epsilon * key_share;
    const double delta = budget.delta * key_share;
    CheckShare(eps, delta, "key release");
    result.tau = MakeTauThreshold(eps, delta);
    MechanismEvent e;
    e.kind = MechanismKind::kTauThreshold;
    e.c = 1;
    e.sigma = result.tau->sigma_keys;
    e.epsilon = eps;
    e.delta = delta;
    e.tau = result.tau->tau;
    e.label = "keys";
    result.events.push_back(e);
  }
  std::vector<double> sigma(d.sums.size(), 0.0);
  if (noised > 0) {
    const double eps = budget.epsilon * (1 - key_share) / noised;
    const double delta = budget.delta * (1 - key_share) / noised;
    for (std::size_t j = 0; j < d.sums.size(); ++j) {
      if (clip[j] == 0) continue;
      CheckShare(eps, delta, "SUM(" + d.sums[j].value.ToString() + ")");
      sigma[j] = GaussianSigma(eps, delta, clip[j]);
      MechanismEvent e;
      e.kind = MechanismKind::kGaussianSum;
      e.c = clip[j];
      e.sigma = sigma[j];
      e.epsilon = eps;
      e.delta = delta;
      e.label = "SUM(" + d.sums[j].value.ToString() + ")";
      result.events.push_back(e);
    }
  }

  const std::string pid = kPidColumn;
  auto key = [](std::size_t i) { return Indexed("_k", i); };
  std::vector<Expr> key_columns;
  for (std::size_t i = 0; i < n_keys; ++i) key_columns.push_back(Col(key(i)));

  // Per-row keys and summand values.
  std::vector<NamedExpr> rows = {{pid, Col(pid)}};
  for (std::size_t i = 0; i < n_keys; ++i) rows.push_back({key(i), d.keys[i]});
  for (std::size_t j = 0; j < d.sums.size(); ++j) {
    rows.push_back({Indexed("_v", j), d.sums[j].value});
  }
  RelationPtr values =
      Relation::Map(std::move(rows), std::nullopt, std::nullopt, pup_input);

  // Partial sums per (privacy unit, group).
  std::vector<NamedExpr> partial_aggs = {{pid, First(Col(pid))}};
  std::vector<Expr> partial_keys = {Col(pid)};
  for (std::size_t i = 0; i < n_keys; ++i) {
    partial_aggs.push_back({key(i), First(Col(key(i)))});
    partial_keys.push_back(Col(key(i)));
  }
  for (std::size_t j = 0; j < d.sums.size(); ++j) {
    partial_aggs.push_back({Indexed("_p", j), Sum(Col(Indexed("_v", j)))});
  }
  RelationPtr partial = Relation::Reduce(std::move(partial_aggs),
                                         std::move(partial_keys), values);

  // Squared norms and group counts per privacy unit.
  std::vector<NamedExpr> norm_aggs = {{pid, First(Col(pid))}};
  for (std::size_t j = 0; j < d.sums.size(); ++j) {
    Expr p = Col(Indexed("_p", j));
    norm_aggs.push_back({Indexed("_n", j), Sum(Mul(p, p))});
  }
  norm_aggs.push_back(
      {"_g", Expr::Aggregate(AggregateKind::kCountAll, std::nullopt)});
  RelationPtr norms =
      Relation::Reduce(std::move(norm_aggs), {Col(pid)}, partial);

  RelationPtr joined = Relation::Join(
      JoinKind::kInner,
      Call(Function::kEq,
           {Col(JoinColumnName("_c", pid)), Col(JoinColumnName("_n", pid))}),
      "_c", "_n", partial, norms);

  // Contributions scaled so each unit's vector has norm at most c.
  std::vector<NamedExpr> clipped_cols = {{pid, Col(JoinColumnName("_c", pid))}};
  for (std::size_t i = 0; i < n_keys; ++i) {
    clipped_cols.push_back({key(i), Col(JoinColumnName("_c", key(i)))});
  }
  for (std::size_t j = 0; j < d.sums.size(); ++j) {
    Expr value = F(0);
    if (clip[j] > 0) {
      Expr norm = Sqrt(Col(JoinColumnName("_n", Indexed("_n", j))));
      value = Div(Col(JoinColumnName("_c", Indexed("_p", j))),
                  Greatest(F(1), Div(norm, F(clip[j]))));
    }
    clipped_cols.push_back({Indexed("_q", j), value});
  }
  if (thresholded) {
    clipped_cols.push_back(
        {"_w", Div(F(1), Greatest(F(1), Sqrt(AsFloat(Col(
                                            JoinColumnName("_n", "_g"))))))});
  }
  RelationPtr clipped = Relation::Map(std::move(clipped_cols), std::nullopt,
                                      std::nullopt, joined);

  // Per-group totals.
  std::vector<NamedExpr> total_aggs;
  for (std::size_t i = 0; i < n_keys; ++i) {
    total_aggs.push_back({key(i), First(Col(key(i)))});
  }
  for (std::size_t j = 0; j < d.sums.size(); ++j) {
    total_aggs.push_back({Indexed("_S", j), Sum(Col(Indexed("_q", j)))});
  }
  if (thresholded) total_aggs.push_back({"_N", Sum(Col("_w"))});
  if (total_aggs.empty()) {
    total_aggs.push_back(
        {"_N", Expr::Aggregate(AggregateKind::kCountAll, std::nullopt)});
  }
  RelationPtr totals =
      Relation::Reduce(std::move(total_aggs), key_columns, clipped);

  if (!thresholded && n_keys > 0) {
    // Every public key is released, with zero totals where no row exists.
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n_keys; ++i) names.push_back(key(i));
    RelationPtr domain = Relation::Values(names, Cartesian(*public_keys));
    std::vector<Expr> equal;
    for (std::size_t i = 0; i < n_keys; ++i) {
      equal.push_back(Call(Function::kEq, {Col(JoinColumnName("_pk", key(i))),
                                           Col(JoinColumnName("_a", key(i)))}));
    }
    Expr on = equal[0];
    for (std::size_t i = 1; i < equal.size(); ++i) {
      on = Call(Function::kAnd, {on, equal[i]});
    }
    RelationPtr padded =
        Relation::Join(JoinKind::kLeft, on, "_pk", "_a", domain, totals);
    std::vector<NamedExpr> cols;
    for (std::size_t i = 0; i < n_keys; ++i) {
      cols.push_back({key(i), Col(JoinColumnName("_pk", key(i)))});
    }
    for (std::size_t j = 0; j < d.sums.size(); ++j) {
      cols.push_back(
          {Indexed("_S", j), Col(JoinColumnName("_a", Indexed("_S", j)))});
    }
    if (d.sums.empty()) {
      cols.push_back({"_N", Col(JoinColumnName("_a", "_N"))});
    }
    totals =
        Relation::Map(std::move(cols), std::nullopt, std::nullopt, padded);
  }

  // Gaussian noise and key thresholding.
  std::vector<NamedExpr> noisy;
  for (std::size_t i = 0; i < n_keys; ++i) noisy.push_back({key(i), Col(key(i))});
  for (std::size_t j = 0; j < d.sums.size(); ++j) {
    Expr total = Call(Function::kCoalesce, {Col(Indexed("_S", j)), F(0)});
    if (sigma[j] > 0 && options.add_noise) {
      total = Add(total, Mul(F(sigma[j]), GaussianNoise()));
    }
    noisy.push_back({d.sums[j].name, total});
  }
  if (noisy.empty()) noisy.push_back({"_N", Col("_N")});
  std::optional<Expr> filter;
  if (thresholded) {
    Expr count = Col("_N");
    if (options.add_noise) {
      count = Add(count, Mul(F(result.tau->sigma_keys), GaussianNoise()));
    }
    filter = Call(Function::kGe, {count, F(result.tau->tau)});
  }
  RelationPtr released =
      Relation::Map(std::move(noisy), filter, std::nullopt, totals);

  result.relation =
      Relation::Map(d.outputs, std::nullopt, std::nullopt, released);
  return result;
}

}  // namespace qrw
