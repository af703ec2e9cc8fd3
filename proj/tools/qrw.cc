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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrw/accountant.h"
#include "qrw/connector.h"
#include "qrw/dp_eval.h"
#include "qrw/dp_mechanisms.h"
#include "qrw/error.h"
#include "qrw/kinterval.h"
#include "qrw/privacy_unit.h"
#include "qrw/relation.h"
#include "qrw/report.h"
#include "qrw/rewriting.h"
#include "qrw/sql/binder.h"
#include "qrw/sql/catalog.h"
#include "qrw/sql/renderer.h"

namespace qrw {
namespace {

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kBind = 3,
  kRewrite = 4,
  kBackend = 5,
};

struct Config {
  std::string query;
  std::string query_file;
  std::string catalog;
  std::string privacy_unit;
  double epsilon = 1;
  double delta = 1e-5;
  std::string target = "pubd";
  std::string dialect;
  std::string backend = "embedded";
  std::string dsn;
  std::string database = ":memory:";
  std::vector<std::string> fixtures;
  std::uint64_t seed = 0;
  double clip_multiplier = 1;
  std::string session = "default";
  std::string ledger = ".qrw_ledger.jsonl";
  bool no_account = false;
  bool json = false;
};

std::string ReadText(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string QueryText(const Config& c) {
  if (!c.query.empty() && c.query != "-") return c.query;
  if (!c.query_file.empty()) return ReadText(c.query_file);
  std::string text((std::istreambuf_iterator<char>(std::cin)),
                   std::istreambuf_iterator<char>());
  if (text.empty()) throw InvalidArgumentError("no query given");
  return text;
}

Catalog LoadCatalog(const Config& c) {
  if (c.catalog.empty()) throw InvalidArgumentError("--catalog is required");
  return Catalog::FromFile(c.catalog);
}

PrivacyUnitDefinition LoadPrivacyUnit(const Config& c,
                                      const Catalog& catalog) {
  if (c.privacy_unit.empty()) return {};
  return PrivacyUnitDefinition::FromFile(c.privacy_unit, catalog);
}

std::unique_ptr<Connection> OpenBackend(const Config& c) {
  std::unique_ptr<Connection> connection;
  if (c.backend == "embedded") {
    connection = std::make_unique<EmbeddedConnection>(c.seed, c.database);
  } else {
    connection = Connect(c.backend, c.dsn.empty()
                                        ? std::nullopt
                                        : std::optional<std::string>(c.dsn),
                         c.seed);
  }
  for (const std::string& path : c.fixtures) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(ReadText(path));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(path + ": " + e.what());
    }
    if (!doc.is_array()) doc = nlohmann::json::array({doc});
    for (const auto& f : doc) connection->LoadFixture(FixtureFromJson(f.dump()));
  }
  return connection;
}

struct Rewritten {
  RewriteResult result;
  RewriteReport report;
};

Rewritten RewriteQuery(const Config& c, const Dialect& dialect) {
  Catalog catalog = LoadCatalog(c);
  PrivacyUnitDefinition privacy_unit = LoadPrivacyUnit(c, catalog);
  BoundQuery bound = BindSql(QueryText(c), catalog);
  DpOptions options;
  options.clip_multiplier = c.clip_multiplier;
  Rewriter rewriter(catalog, privacy_unit, options);
  Rewritten out{rewriter.Rewrite(bound.relation, PropertyFromName(c.target),
                                 {c.epsilon, c.delta}),
                {}};
  out.report.sql = Render(out.result.relation, dialect, bound.order_by);
  out.report.session = c.session;
  if (!c.no_account) {
    Accountant accountant(c.session, c.ledger);
    out.report.query_id = accountant.NextQueryId();
    for (MechanismEvent e : out.result.events()) {
      e.query = out.report.query_id;
      accountant.Record(std::move(e));
    }
    out.report.query_loss =
        accountant.ComposeQuery(out.report.query_id, c.delta);
    out.report.session_loss = accountant.ComposeSession(c.delta);
  }
  return out;
}

const Dialect& ChosenDialect(const Config& c, const Dialect& fallback) {
  return c.dialect.empty() ? fallback : Dialect::ByName(c.dialect);
}

int CmdRewrite(const Config& c) {
  Rewritten r = RewriteQuery(c, ChosenDialect(c, Dialect::Generic()));
  if (c.json) {
    std::cout << ReportJson(r.result, r.report) << "\n";
  } else {
    std::cout << r.report.sql << ";\n" << ReportText(r.result, r.report);
  }
  return kOk;
}

int CmdInspect(const Config& c) {
  Catalog catalog = LoadCatalog(c);
  BoundQuery bound = BindSql(QueryText(c), catalog);
  std::cout << ToText(bound.relation);
  return kOk;
}

int CmdDot(const Config& c) {
  Catalog catalog = LoadCatalog(c);
  BoundQuery bound = BindSql(QueryText(c), catalog);
  std::cout << ToDot(bound.relation);
  return kOk;
}

std::string Cell(const Value& v) {
  if (v.is_double()) return FormatDouble(v.as_double_exact());
  if (v.is_text()) return v.as_text();
  return v.ToString();
}

int CmdRun(const Config& c) {
  std::unique_ptr<Connection> connection = OpenBackend(c);
  Rewritten r = RewriteQuery(c, ChosenDialect(c, connection->dialect()));
  ResultSet rows = connection->Execute(r.report.sql);
  if (c.json) {
    nlohmann::json out = nlohmann::json::parse(ReportJson(r.result, r.report));
    out["result"] = nlohmann::json::parse(ResultSetToJson(rows));
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  for (std::size_t i = 0; i < rows.columns.size(); ++i) {
    std::cout << (i ? "\t" : "") << rows.columns[i];
  }
  std::cout << "\n";
  for (const auto& row : rows.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::cout << (i ? "\t" : "") << Cell(row[i]);
    }
    std::cout << "\n";
  }
  std::cerr << ReportText(r.result, r.report);
  return kOk;
}

struct EvalConfig {
  std::string scenario = "one";
  int users = 100;
  int groups = 5;
  int runs = 2000;
  std::size_t adjacent = 10;
  std::string query = "SELECT g, SUM(x) AS s FROM halton GROUP BY g";
  std::vector<std::string> keys = {"g"};
  bool gaussian_oracle = false;
  std::string csv;
};

int CmdDpEval(const Config& c, const EvalConfig& e) {
  ProfileOptions options;
  options.runs = e.runs;
  options.seed = c.seed == 0 ? 1 : c.seed;
  PrivacyProfile profile;
  nlohmann::json out;
  if (e.gaussian_oracle) {
    const double sigma = GaussianSigma(c.epsilon, c.delta, 1);
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> noise(0, sigma);
    std::vector<Sample> on_d;
    std::vector<Sample> on_dk;
    for (int i = 0; i < e.runs; ++i) {
      on_d.push_back({{"value", 1 + noise(rng)}});
      on_dk.push_back({{"value", noise(rng)}});
    }
    profile = EstimateProfile(on_d, {on_dk}, options.epsilons,
                              options.confidence);
    out = nlohmann::json::parse(profile.ToJson());
    std::vector<double> exact;
    for (double eps : options.epsilons) {
      exact.push_back(GaussianProfileDelta(eps, sigma, 1));
    }
    out["closed_form"] = exact;
    out["sigma"] = sigma;
  } else {
    HaltonParams params;
    params.n_users = e.users;
    params.n_groups = e.groups;
    if (e.scenario == "normal") {
      params.law = RowsPerUser::kNormal;
    } else if (e.scenario != "one") {
      throw InvalidArgumentError("--scenario must be one or normal");
    }
    Catalog catalog = HaltonCatalog(params);
    PrivacyUnitDefinition privacy_unit = HaltonPrivacyUnit(params, catalog);
    DpOptions dp;
    dp.clip_multiplier = c.clip_multiplier;
    Rewriter rewriter(catalog, privacy_unit, dp);
    RewriteResult result = rewriter.Rewrite(
        BindSql(e.query, catalog).relation, Property::kPubd,
        {c.epsilon, c.delta});
    const std::string sql = Render(result.relation, Dialect::Embedded());
    Fixture fixture = BuildHaltonFixture(params);
    profile = EstimatePrivacyProfile(
        sql, e.keys, fixture, AdjacentFixtures(fixture, "user_id", e.adjacent),
        options);
    out = nlohmann::json::parse(profile.ToJson());
    out["sql"] = sql;
  }
  out["target_epsilon"] = c.epsilon;
  out["target_delta"] = c.delta;
  std::cout << out.dump(2) << "\n";
  if (!e.csv.empty()) {
    std::ofstream csv(e.csv);
    if (!csv) throw IoError("cannot write " + e.csv);
    csv << profile.ToCsv();
  }
  return kOk;
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return kParse;
    case ErrorKind::kBind: return kBind;
    case ErrorKind::kRewrite: return kRewrite;
    case ErrorKind::kBackend: return kBackend;
    default: return kUsage;
  }
}

void AddQueryOptions(CLI::App* cmd, Config& c) {
  cmd->add_option("query", c.query, "SQL text ('-' or omitted: stdin)");
  cmd->add_option("-f,--file", c.query_file, "Read the query from a file");
  cmd->add_option("--catalog", c.catalog, "Catalog JSON")->required();
}

void AddRewriteOptions(CLI::App* cmd, Config& c) {
  cmd->add_option("--privacy-unit", c.privacy_unit,
                  "Privacy unit definition JSON");
  cmd->add_option("--epsilon", c.epsilon, "Total epsilon")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--delta", c.delta, "Total delta")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--target", c.target, "Target property")
      ->check(CLI::IsMember({"pub", "pubd"}));
  cmd->add_option("--dialect", c.dialect, "generic, postgres or embedded");
  cmd->add_option("--clip-multiplier", c.clip_multiplier,
                  "Clipping norm multiplier")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--session", c.session, "Accounting session");
  cmd->add_option("--ledger", c.ledger, "Ledger file (JSON lines)");
  cmd->add_flag("--no-account", c.no_account,
                "Do not record mechanisms in the ledger");
  cmd->add_flag("--json", c.json, "Machine-readable output");
}

void AddBackendOptions(CLI::App* cmd, Config& c) {
  cmd->add_option("--backend", c.backend, "embedded or dsn")
      ->check(CLI::IsMember({"embedded", "dsn"}));
  cmd->add_option("--dsn", c.dsn, "Server address (QRW_DSN overrides)");
  cmd->add_option("--database", c.database, "Embedded database file");
  cmd->add_option("--fixtures", c.fixtures, "Fixture JSON files to load");
  cmd->add_option("--seed", c.seed, "Seed of the embedded random source");
}

int Main(int argc, char** argv) {
  CLI::App app{"Differentially private SQL query rewriter"};
  app.require_subcommand(1);
  Config c;
  EvalConfig e;

  CLI::App* rewrite = app.add_subcommand("rewrite", "Rewrite a query");
  AddQueryOptions(rewrite, c);
  AddRewriteOptions(rewrite, c);

  CLI::App* inspect =
      app.add_subcommand("inspect", "Print node schemas and ranges");
  AddQueryOptions(inspect, c);

  CLI::App* dot = app.add_subcommand("dot", "Print the graph as Graphviz");
  AddQueryOptions(dot, c);

  CLI::App* run = app.add_subcommand("run", "Rewrite and execute a query");
  AddQueryOptions(run, c);
  AddRewriteOptions(run, c);
  AddBackendOptions(run, c);

  CLI::App* eval =
      app.add_subcommand("dp-eval", "Estimate an empirical privacy profile");
  eval->add_option("--epsilon", c.epsilon, "Epsilon")
      ->check(CLI::PositiveNumber);
  eval->add_option("--delta", c.delta, "Delta")->check(CLI::Range(0.0, 1.0));
  eval->add_option("--clip-multiplier", c.clip_multiplier,
                   "Clipping norm multiplier")
      ->check(CLI::PositiveNumber);
  eval->add_option("--seed", c.seed, "Seed");
  eval->add_option("--scenario", e.scenario, "one or normal");
  eval->add_option("--users", e.users, "Number of users");
  eval->add_option("--groups", e.groups, "Number of groups");
  eval->add_option("--runs", e.runs, "Runs per database");
  eval->add_option("--adjacent", e.adjacent, "Adjacent databases (0: all)");
  eval->add_option("--query", e.query, "Query over table halton");
  eval->add_option("--keys", e.keys, "Grouping columns of the output");
  eval->add_flag("--gaussian-oracle", e.gaussian_oracle,
                 "Profile a plain Gaussian mechanism instead");
  eval->add_option("--csv", e.csv, "Also write the profile as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    return app.exit(error) == 0 ? kOk : kUsage;
  }
  try {
    if (c.delta <= 0 || c.delta >= 1) {
      throw InvalidArgumentError("delta must lie in (0, 1)");
    }
    if (*rewrite) return CmdRewrite(c);
    if (*inspect) return CmdInspect(c);
    if (*dot) return CmdDot(c);
    if (*run) return CmdRun(c);
    if (*eval) return CmdDpEval(c, e);
  } catch (const Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return ExitCodeFor(error.kind());
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace
}  // namespace qrw

int main(int argc, char** argv) { return qrw::Main(argc, argv); }
