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

// Acceptance checks: one PASS or FAIL line per criterion. Exits non-zero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qrw/accountant.h"
#include "qrw/connector.h"
#include "qrw/dp_eval.h"
#include "qrw/dp_mechanisms.h"
#include "qrw/error.h"
#include "qrw/expr.h"
#include "qrw/privacy_unit.h"
#include "qrw/range.h"
#include "qrw/relation.h"
#include "qrw/rewriting.h"
#include "qrw/sql/binder.h"
#include "qrw/sql/catalog.h"
#include "qrw/sql/renderer.h"
#include "support/fixtures.h"
#include "support/random_expr.h"

namespace qrw {
namespace {

using testing::DataPath;
using testing::LoadCatalogFixtures;
using testing::ReadFile;
using testing::TestCatalog;
using testing::TestPrivacyUnit;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr char kFig2[] =
    "SELECT a, count(abs(10*a+b)) AS x FROM table_1 "
    "WHERE b>-0.1 AND a IN (1,2,3) GROUP BY a";

// Outcome of one criterion: passed, with a short explanation.
struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), format, a, b, c);
  return buffer;
}

RewriteResult RewriteQuery(const std::string& sql, const Budget& budget,
                           DpOptions options = {}) {
  Rewriter rewriter(TestCatalog(), TestPrivacyUnit(), options);
  return rewriter.Rewrite(BindSql(sql, TestCatalog()).relation,
                          Property::kPubd, budget);
}

Outcome RangeSoundness() {
  testing::RandomExprGenerator gen(20260101);
  const int kExpressions = 500;
  const int kPoints = 10000;
  long long evaluated = 0;
  long long violations = 0;
  std::string example;
  for (int trial = 0; trial < kExpressions; ++trial) {
    Schema schema = gen.RandomSchema();
    Expr e = gen.Coin() ? gen.Numeric(4) : gen.Boolean(3);
    DataType type = InferType(e, schema);
    std::vector<Value> row(schema.size());
    auto lookup = [&](const std::string& name) {
      return row[*schema.Find(name)];
    };
    for (int i = 0; i < kPoints; ++i) {
      for (std::size_t c = 0; c < schema.size(); ++c) {
        row[c] = gen.Sample(schema[c].type);
      }
      Value v = Eval(e, lookup);
      ++evaluated;
      const bool ok = v.is_null() ? type.nullable()
                                  : type.range().Contains(*v.ToDouble());
      if (!ok) {
        ++violations;
        if (example.empty()) example = e.ToString() + " -> " + v.ToString();
      }
    }
  }
  std::ostringstream out;
  out << kExpressions << " expressions, " << evaluated << " points, "
      << violations << " outside the propagated range";
  if (!example.empty()) out << " (e.g. " << example << ")";
  return {violations == 0, out.str()};
}

Outcome PaperRangeExamples() {
  Catalog catalog = Catalog::FromJson(R"({"tables": [
    {"name": "r", "visibility": "public", "columns": [
      {"name": "x", "type": "float"}, {"name": "y", "type": "integer"}]}]})");
  auto column_range = [&](const std::string& sql, std::size_t column) {
    return BindSql(sql, catalog).relation->schema()[column].type.range();
  };
  const KInterval half_open =
      column_range("SELECT x FROM r WHERE x > 0 AND x <= 1", 0);
  const KInterval in_list =
      column_range("SELECT y FROM r WHERE y IN (1, 2, 3)", 0);
  const bool first = half_open == KInterval::Closed(0, 1);
  const bool second = in_list.pieces().size() == 3 && in_list.IsPoints() &&
                      in_list.Points() == std::vector<double>{1, 2, 3};

  const std::string inspect =
      ToText(BindSql(kFig2, TestCatalog()).relation);
  const std::string golden =
      ReadFile(std::string(QRW_GOLDEN_DIR) + "/inspect/fig2.txt");
  // The filtered Map (#1) lists a: integer{1, 2, 3}.
  const std::size_t map = inspect.find("#1 Map");
  const bool third = inspect == golden && map != std::string::npos &&
                     inspect.find("a: integer{1, 2, 3}", map) <
                         inspect.find("#2", map);
  return {first && second && third,
          "x>0 AND x<=1 -> " + half_open.ToString() + "; y IN (1,2,3) -> " +
              in_list.ToString() + "; inspect golden " +
              (third ? "matches" : "differs")};
}

Outcome MonotoneImageOracle() {
  // Every sign cell per coordinate: negative, straddling, positive and the
  // degenerate points.
  const std::vector<Interval> cells = {{-3, -1},  {-2, 2},  {1, 4},
                                       {0, 0},    {-1.5, -1.5}, {2.5, 2.5},
                                       {-2, 0},   {0, 3}};
  struct Case {
    const char* name;
    PiecewiseMonotonicSpec spec;
  };
  std::vector<Case> cases = {
      {"+", monotone::Add()},           {"-", monotone::Sub()},
      {"*", monotone::Mul()},           {"/", monotone::Div(false)},
      {"ABS", monotone::Abs()},         {"LEAST1", monotone::Least(1)},
      {"LEAST2", monotone::Least(2)},   {"LEAST3", monotone::Least(3)},
      {"GREATEST1", monotone::Greatest(1)},
      {"GREATEST2", monotone::Greatest(2)},
      {"GREATEST3", monotone::Greatest(3)},
  };
  int compared = 0;
  int mismatches = 0;
  std::string example;
  for (const Case& c : cases) {
    const int n = c.spec.arity;
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      std::vector<Interval> box;
      std::vector<KInterval> inputs;
      for (int i = 0; i < n; ++i) {
        box.push_back(cells[idx[i]]);
        inputs.push_back(KInterval::Closed(box.back().lo, box.back().hi));
      }
      // Convex hull of every corner of every (cell x box) intersection.
      std::vector<Interval> pieces;
      for (const MonotoneCell& cell : c.spec.cells) {
        std::vector<Interval> clipped;
        bool empty = false;
        for (int i = 0; i < n; ++i) {
          Interval k{std::max(box[i].lo, cell.domain[i].lo),
                     std::min(box[i].hi, cell.domain[i].hi)};
          empty |= k.lo > k.hi;
          clipped.push_back(k);
        }
        if (empty) continue;
        double lo = kInf;
        double hi = -kInf;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          std::vector<double> x(n);
          for (int i = 0; i < n; ++i) {
            x[i] = (mask >> i) & 1 ? clipped[i].hi : clipped[i].lo;
          }
          const double v = c.spec.evaluate(x);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        pieces.push_back({lo, hi});
      }
      const KInterval expected = KInterval::FromPieces(std::move(pieces));
      const KInterval actual = Image(c.spec, inputs);
      ++compared;
      if (!(actual == expected)) {
        ++mismatches;
        if (example.empty()) {
          example = std::string(c.name) + ": " + actual.ToString() + " vs " +
                    expected.ToString();
        }
      }
      int i = 0;
      while (i < n && ++idx[i] == cells.size()) idx[i++] = 0;
      if (i == n) break;
    }
  }
  std::string detail = std::to_string(compared) + " cell combinations, " +
                       std::to_string(mismatches) + " mismatches";
  if (!example.empty()) detail += " (" + example + ")";
  return {mismatches == 0, detail};
}

Outcome ClippingInvariant() {
  Catalog catalog = Catalog::FromJson(R"({"tables": [
    {"name": "v", "visibility": "private", "columns": [
      {"name": "uid", "type": "integer"}, {"name": "g", "type": "integer"},
      {"name": "x", "type": "float", "min": -5, "max": 5}]}]})");
  PrivacyUnitDefinition pu({{"v", {}, "uid"}}, catalog);
  Rewriter rewriter(catalog, pu);
  // One unit dominating one group; one unit spread over many groups.
  std::vector<std::vector<Value>> dominating;
  for (int i = 0; i < 200; ++i) dominating.push_back({1, 0, 4.5});
  for (int u = 2; u < 30; ++u) dominating.push_back({u, u % 7, -0.5 * (u % 3)});
  std::vector<std::vector<Value>> spread;
  for (int g = 0; g < 100; ++g) {
    for (int i = 0; i < 3; ++i) spread.push_back({1, g, (g % 2 ? 5.0 : -5.0)});
  }
  for (int u = 2; u < 30; ++u) spread.push_back({u, u, 1.0});

  int units = 0;
  int violations = 0;
  for (const char* sql :
       {"SELECT g, SUM(x) AS s, COUNT(*) AS n, AVG(x) AS a FROM v GROUP BY g",
        "SELECT g, SUM(x) AS s FROM v WHERE g BETWEEN 0 AND 99 GROUP BY g"}) {
    RewriteResult result = rewriter.Rewrite(
        BindSql(sql, catalog).relation, Property::kPubd, {1, 1e-5});
    std::vector<double> clip;
    for (const MechanismEvent& e : result.mechanisms[0].events) {
      if (e.kind == MechanismKind::kGaussianSum) clip.push_back(e.c);
    }
    RelationPtr clipped;
    for (const RelationPtr& node : TopoOrder(result.relation)) {
      if (node->schema().Find("_q0") && node->schema().Find(kPidColumn)) {
        clipped = node;
      }
    }
    if (!clipped) return {false, "no clipped contribution node"};
    for (const auto* rows : {&dominating, &spread}) {
      EmbeddedConnection connection;
      connection.LoadFixture(Fixture{"v", catalog.Get("v").schema, *rows});
      ResultSet out = connection.Execute(Render(clipped, Dialect::Embedded()));
      const std::size_t pid = out.ColumnIndex(kPidColumn);
      std::map<std::string, std::vector<double>> norms;
      for (const auto& r : out.rows) {
        auto& n = norms[r[pid].as_text()];
        n.resize(clip.size());
        for (std::size_t j = 0; j < clip.size(); ++j) {
          const double q = *r[out.ColumnIndex("_q" + std::to_string(j))]
                                .ToDouble();
          n[j] += q * q;
        }
      }
      for (const auto& [unit, n] : norms) {
        ++units;
        for (std::size_t j = 0; j < clip.size(); ++j) {
          if (std::sqrt(n[j]) > clip[j] * (1 + 1e-12)) ++violations;
        }
      }
    }
  }
  return {violations == 0 && units > 0,
          std::to_string(units) + " unit contribution vectors checked, " +
              std::to_string(violations) + " violations"};
}

Outcome GaussianCalibration() {
  const double sigma = GaussianSigma(1, 1e-5, 1);
  const double closed_form = std::sqrt(2 * std::log(1.25 / 1e-5));
  // A single noisy count over a fixed fixture, executed 10^4 times.
  const std::string sql = "SELECT COUNT(*) AS n FROM table_1";
  DpOptions exact_options;
  exact_options.add_noise = false;
  EmbeddedConnection connection(42);
  LoadCatalogFixtures(connection);
  const double truth = *connection
                            .Execute(Render(
                                RewriteQuery(sql, {1, 1e-5}, exact_options)
                                    .relation,
                                Dialect::Embedded()))
                            .rows[0][0]
                            .ToDouble();
  RewriteResult noisy = RewriteQuery(sql, {1, 1e-5});
  const double used = noisy.mechanisms[0].events[0].sigma;
  const std::string rendered = Render(noisy.relation, Dialect::Embedded());
  const int kRuns = 10000;
  double sum = 0;
  double sum_sq = 0;
  for (int i = 0; i < kRuns; ++i) {
    const double e = *connection.Execute(rendered).rows[0][0].ToDouble() - truth;
    sum += e;
    sum_sq += e * e;
  }
  const double mean = sum / kRuns;
  const double variance = sum_sq / kRuns - mean * mean;
  const double ratio = variance / (used * used);
  const bool ok = std::fabs(sigma - 4.8446) <= 1e-3 &&
                  std::fabs(sigma - closed_form) < 1e-12 && used == sigma &&
                  std::fabs(ratio - 1) <= 0.1;
  return {ok, Fmt("sigma=%.6f; empirical variance / sigma^2 = %.4f over "
                  "%.0f runs",
                  sigma, ratio, kRuns)};
}

Outcome BudgetSplit() {
  const Budget budget{0.7, 3e-6};
  RewriteResult r = RewriteQuery(
      "SELECT (SELECT COUNT(*) FROM orders) AS n, "
      "(SELECT AVG(age) FROM users) AS a",
      budget);
  if (r.allocation.n_dp != 2 || r.mechanisms.size() != 2) {
    return {false, "expected 2 DP Reduces, got " +
                       std::to_string(r.allocation.n_dp)};
  }
  double epsilon = 0;
  double delta = 0;
  bool each = true;
  for (const DpReduceReport& m : r.mechanisms) {
    each &= m.budget.epsilon == budget.epsilon / 2 &&
            m.budget.delta == budget.delta / 2;
    epsilon += m.budget.epsilon;
    delta += m.budget.delta;
  }
  const double ulp_e = std::nextafter(budget.epsilon, kInf) - budget.epsilon;
  const double ulp_d = std::nextafter(budget.delta, kInf) - budget.delta;
  const bool ok = each && std::fabs(epsilon - budget.epsilon) <= 2 * ulp_e &&
                  std::fabs(delta - budget.delta) <= 2 * ulp_d;
  return {ok, Fmt("n=2, per mechanism (%.3g, %.3g), total epsilon %.17g",
                  r.mechanisms[0].budget.epsilon,
                  r.mechanisms[0].budget.delta, epsilon)};
}

Outcome EmpiricalDp() {
  const double kDelta = 1e-3;
  int checked = 0;
  int failed = 0;
  std::ostringstream out;
  for (RowsPerUser law : {RowsPerUser::kExactlyOne, RowsPerUser::kNormal}) {
    HaltonParams params;
    params.law = law;
    Catalog catalog = HaltonCatalog(params);
    PrivacyUnitDefinition pu = HaltonPrivacyUnit(params, catalog);
    Rewriter rewriter(catalog, pu);
    Fixture fixture = BuildHaltonFixture(params);
    std::vector<AdjacentFixture> adjacent =
        AdjacentFixtures(fixture, "user_id", 10);
    for (const char* sql : {"SELECT g, SUM(x) AS s FROM halton GROUP BY g",
                            "SELECT g, COUNT(*) AS n FROM halton GROUP BY g"}) {
      RewriteResult result = rewriter.Rewrite(
          BindSql(sql, catalog).relation, Property::kPubd, {1, kDelta});
      ProfileOptions options;
      options.runs = 2000;
      options.epsilons = {0.0, 0.5, 1.0};
      PrivacyProfile profile = EstimatePrivacyProfile(
          Render(result.relation, Dialect::Embedded()), {"g"}, fixture,
          adjacent, options);
      const double d = profile.DeltaAt(1);
      const double m = profile.MarginAt(1);
      ++checked;
      if (!(d <= kDelta + m)) ++failed;
      out << (law == RowsPerUser::kNormal ? "scenario 2 " : "scenario 1 ")
          << (std::string(sql).find("SUM") != std::string::npos ? "SUM"
                                                                : "COUNT")
          << ": delta(e^1)=" << d << " margin=" << m << "; ";
    }
  }
  return {failed == 0 && checked == 4, out.str()};
}

Outcome TauThresholding() {
  // delta = 0.1 leaves delta_keys = 0.05 to key release.
  const Budget budget{1, 0.1};
  RewriteResult open =
      RewriteQuery("SELECT SUM(x) FROM t GROUP BY g", budget);
  RewriteResult pinned =
      RewriteQuery("SELECT SUM(x) FROM t GROUP BY g WHERE g IN (1,2,3)",
                   budget);
  if (!open.mechanisms[0].tau || pinned.mechanisms[0].tau) {
    return {false, "unexpected thresholding choice"};
  }
  const double delta_keys = open.mechanisms[0].tau->delta_keys;
  const Schema& schema = TestCatalog().Get("t").schema;
  EmbeddedConnection connection(8);
  connection.LoadFixture(Fixture{"t", schema, {{1, 0.5, 7}}});
  const std::string open_sql = Render(open.relation, Dialect::Embedded());
  const int kTrials = 2000;
  int released = 0;
  for (int i = 0; i < kTrials; ++i) {
    released += static_cast<int>(connection.Execute(open_sql).rows.size());
  }
  const double rate = static_cast<double>(released) / kTrials;
  const double margin =
      1.96 * std::sqrt(delta_keys * (1 - delta_keys) / kTrials);

  connection.LoadFixture(Fixture{"t", schema, {{1, 0.5, 1}, {2, -0.25, 2}}});
  const std::string pinned_sql = Render(pinned.relation, Dialect::Embedded());
  int always = 0;
  for (int i = 0; i < kTrials; ++i) {
    always += connection.Execute(pinned_sql).rows.size() == 3 ? 1 : 0;
  }
  const bool ok = std::fabs(delta_keys - 0.05) < 1e-15 &&
                  rate <= delta_keys + margin && always == kTrials;
  return {ok, Fmt("singleton released in %.4f of trials (bound %.4f); "
                  "pinned groups released in %.0f%% of trials",
                  rate, delta_keys + margin, 100.0 * always / kTrials)};
}

Outcome RoundTrip() {
  const std::vector<std::string> corpus =
      testing::ReadStatements(DataPath("corpus.sql"));
  int equal = 0;
  int stable = 0;
  std::set<std::string> distinct;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    BoundQuery bound = BindSql(corpus[i], TestCatalog());
    const std::string sql =
        Render(bound.relation, Dialect::Generic(), bound.order_by);
    BoundQuery again = BindSql(sql, TestCatalog());
    if (StructurallyEqual(bound.relation, again.relation) &&
        again.order_by == bound.order_by) {
      ++equal;
    }
    char name[64];
    std::snprintf(name, sizeof(name), "/render/%02zu.sql", i);
    if (ReadFile(std::string(QRW_GOLDEN_DIR) + name) == sql + "\n" &&
        Render(bound.relation, Dialect::Generic(), bound.order_by) == sql) {
      ++stable;
    }
    distinct.insert(sql);
  }
  const int n = static_cast<int>(corpus.size());
  return {n >= 30 && equal == n && stable == n &&
              static_cast<int>(distinct.size()) == n,
          std::to_string(equal) + "/" + std::to_string(n) +
              " structurally equal after re-binding, " +
              std::to_string(stable) + "/" + std::to_string(n) +
              " golden renderings stable"};
}

Outcome RdpAccountant() {
  auto event = [](double epsilon, double delta, double c) {
    MechanismEvent e;
    e.c = c;
    e.sigma = GaussianSigma(epsilon, delta, c);
    e.epsilon = epsilon;
    e.delta = delta;
    return e;
  };
  std::vector<MechanismEvent> one = {event(1, 1e-5, 1)};
  std::vector<MechanismEvent> two = {event(1, 1e-5, 1), event(1, 1e-5, 1)};
  const double single = Compose(one, 1e-5).epsilon;
  const double pair = Compose(two, 1e-5).epsilon;
  const bool sublinear = pair < 2 * single;

  std::vector<MechanismEvent> mixed = {event(0.3, 1e-6, 2), event(1, 1e-5, 1),
                                       event(0.7, 1e-4, 3),
                                       event(2, 1e-3, 5)};
  mixed[2].kind = MechanismKind::kTauThreshold;
  const PrivacyLoss base = Compose(mixed, 1e-5);
  bool invariant = true;
  std::sort(mixed.begin(), mixed.end(),
            [](const auto& a, const auto& b) { return a.sigma < b.sigma; });
  do {
    PrivacyLoss loss = Compose(mixed, 1e-5);
    invariant &= std::fabs(loss.epsilon - base.epsilon) <= 1e-12 &&
                 std::fabs(loss.delta - base.delta) <= 1e-18;
  } while (std::next_permutation(
      mixed.begin(), mixed.end(),
      [](const auto& a, const auto& b) { return a.sigma < b.sigma; }));

  int sweep = 0;
  int above = 0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double epsilon = 0.1 + 0.1 * i;
      const double delta = std::pow(10.0, -3 - 0.5 * j);
      std::vector<MechanismEvent> e = {event(epsilon, delta, 1 + j)};
      ++sweep;
      if (Compose(e, delta).epsilon > epsilon) ++above;
    }
  }
  return {sublinear && invariant && above == 0 && sweep == 100,
          Fmt("two events %.4f < 2 x %.4f; ", pair, single) +
              (invariant ? "permutation invariant over 24 orders; "
                         : "order dependent; ") +
              std::to_string(above) + "/100 sweep points above classical"};
}

Outcome EndToEnd() {
  EmbeddedConnection connection(2026);
  LoadCatalogFixtures(connection);
  RewriteResult noisy = RewriteQuery(kFig2, {1, 1e-5});
  ResultSet out = connection.Execute(Render(noisy.relation, Dialect::Embedded()));
  const bool columns = out.columns == std::vector<std::string>{"a", "x"};
  bool groups = !out.rows.empty();
  bool noised = false;
  for (const auto& r : out.rows) {
    const std::int64_t a = r[0].as_int();
    groups &= a >= 1 && a <= 3;
    const double x = *r[1].ToDouble();
    noised |= x != std::round(x);
  }

  DpOptions exact_options;
  exact_options.add_noise = false;
  RewriteResult exact = RewriteQuery(kFig2, {1, 1e-5}, exact_options);
  ResultSet rewritten =
      connection.Execute(Render(exact.relation, Dialect::Embedded()));
  ResultSet direct = connection.Execute(kFig2);
  std::map<std::int64_t, double> expected;
  for (const auto& r : direct.rows) expected[r[0].as_int()] = *r[1].ToDouble();
  bool matches = !expected.empty();
  for (const auto& r : rewritten.rows) {
    auto it = expected.find(r[0].as_int());
    // Public keys absent from the data are released with a zero count.
    const double want = it == expected.end() ? 0 : it->second;
    matches &= *r[1].ToDouble() == want;
  }
  matches &= rewritten.rows.size() >= expected.size();
  std::ostringstream detail;
  detail << out.rows.size() << " released groups, columns "
         << (columns ? "{a, x}" : "unexpected") << ", noise "
         << (noised ? "present" : "absent") << "; noise-free variant "
         << (matches ? "matches" : "differs from") << " the direct query";
  return {columns && groups && noised && matches, detail.str()};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> check;
};

int Main() {
  const std::vector<Criterion> criteria = {
      {"range propagation soundness", RangeSoundness},
      {"range examples and inspect golden", PaperRangeExamples},
      {"monotone image equals corner enumeration", MonotoneImageOracle},
      {"clipping invariant", ClippingInvariant},
      {"Gaussian calibration", GaussianCalibration},
      {"budget split", BudgetSplit},
      {"empirical privacy profile", EmpiricalDp},
      {"tau-thresholding", TauThresholding},
      {"render round trip", RoundTrip},
      {"RDP accountant", RdpAccountant},
      {"end to end", EndToEnd},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    if (!outcome.passed) ++failures;
    std::printf("%s %2zu %s: %s [%.1fs]\n", outcome.passed ? "PASS" : "FAIL",
                i + 1, criteria[i].name, outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace qrw

int main() { return qrw::Main(); }
