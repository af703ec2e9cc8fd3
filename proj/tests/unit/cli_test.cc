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

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "support/fixtures.h"
#include "support/golden.h"

namespace qrw {
namespace {

using testing::DataPath;

constexpr char kFig2[] =
    "SELECT a, count(abs(10*a+b)) AS x FROM table_1 "
    "WHERE b>-0.1 AND a IN (1,2,3) GROUP BY a";

struct Output {
  int code = -1;
  std::string text;
};

// Runs the CLI with `args`; stderr is captured only when `with_stderr`.
Output Cli(const std::string& args, bool with_stderr = false) {
  std::string command = std::string(QRW_CLI_PATH) + " " + args;
  command += with_stderr ? " 2>&1" : " 2>/dev/null";
  Output out;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return out;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    out.text.append(buffer, n);
  }
  const int status = pclose(pipe);
  out.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::string Quote(const std::string& s) { return "'" + s + "'"; }

std::string CatalogArgs() {
  return "--catalog " + DataPath("catalog.json") + " --privacy-unit " +
         DataPath("privacy_unit.json");
}

std::string TempPath(const std::string& name) {
  std::string path =
      (std::filesystem::temp_directory_path() / name).string();
  std::remove(path.c_str());
  return path;
}

TEST(CliTest, InspectShowsFilteredRanges) {
  Output out = Cli("inspect --catalog " + DataPath("catalog.json") + " " +
                   Quote(kFig2));
  ASSERT_EQ(out.code, 0);
  EXPECT_NE(out.text.find("a: integer{1, 2, 3}"), std::string::npos);
  testing::ExpectGolden("inspect/fig2.txt", out.text);
}

TEST(CliTest, InspectEchoesCatalogRanges) {
  Output out = Cli("inspect --catalog " + DataPath("catalog.json") +
                   " 'SELECT * FROM countries'");
  ASSERT_EQ(out.code, 0);
  EXPECT_NE(out.text.find("population: integer[0, 2e+09]"),
            std::string::npos);
}

TEST(CliTest, DotIsAGraph) {
  Output out = Cli("dot --catalog " + DataPath("catalog.json") + " " +
                   Quote(kFig2));
  ASSERT_EQ(out.code, 0);
  EXPECT_EQ(out.text.rfind("digraph", 0), 0u);
  EXPECT_EQ(out.text.back(), '\n');
  EXPECT_NE(out.text.find("->"), std::string::npos);
}

TEST(CliTest, RewriteReportsOneMechanism) {
  Output out = Cli("rewrite --no-account --json " + CatalogArgs() + " " +
                   Quote(kFig2));
  ASSERT_EQ(out.code, 0) << out.text;
  nlohmann::json report = nlohmann::json::parse(out.text);
  EXPECT_EQ(report["budget"]["n_dp"], 1);
  ASSERT_EQ(report["mechanisms"].size(), 1u);
  EXPECT_TRUE(report["mechanisms"][0]["public_keys"].get<bool>());
  EXPECT_NEAR(report["mechanisms"][0]["events"][0]["sigma"].get<double>(),
              4.8446, 1e-3);
  EXPECT_EQ(report["budget"]["total_allocated"]["epsilon"], 1.0);
  EXPECT_EQ(report["budget"]["total_allocated"]["delta"], 1e-5);

  Output text =
      Cli("rewrite --no-account " + CatalogArgs() + " " + Quote(kFig2));
  ASSERT_EQ(text.code, 0);
  EXPECT_NE(text.text.find("WITH"), std::string::npos);
  EXPECT_NE(text.text.find("-- allocation:"), std::string::npos);
  EXPECT_NE(text.text.find("sigma=4.84"), std::string::npos);
}

TEST(CliTest, PublicQueryHasNoMechanisms) {
  Output out = Cli("rewrite --no-account --json " + CatalogArgs() +
                   " 'SELECT code FROM countries'");
  ASSERT_EQ(out.code, 0);
  nlohmann::json report = nlohmann::json::parse(out.text);
  EXPECT_EQ(report["budget"]["n_dp"], 0);
  EXPECT_TRUE(report["mechanisms"].empty());
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(Cli("rewrite " + CatalogArgs() + " 'SELEC 1'").code, 2);
  EXPECT_EQ(Cli("rewrite " + CatalogArgs() + " 'SELECT zz FROM users'").code,
            3);
  EXPECT_EQ(
      Cli("rewrite --no-account " + CatalogArgs() + " 'SELECT * FROM users'")
          .code,
      4);
  EXPECT_EQ(Cli("rewrite --catalog /nonexistent.json 'SELECT 1'").code, 1);
  EXPECT_EQ(Cli("rewrite " + CatalogArgs() + " --epsilon -1 'SELECT 1'").code,
            1);
  EXPECT_EQ(Cli("frobnicate").code, 1);
  EXPECT_EQ(Cli("run --no-account --backend dsn --dsn http://127.0.0.1:1 " +
                CatalogArgs() + " 'SELECT code FROM countries'")
                .code,
            5);
}

TEST(CliTest, UnboundedColumnSuggestsWhereHint) {
  Output out = Cli("rewrite --no-account " + CatalogArgs() +
                       " 'SELECT SUM(g) AS s FROM t'",
                   true);
  EXPECT_EQ(out.code, 4);
  EXPECT_NE(out.text.find("WHERE"), std::string::npos) << out.text;
  EXPECT_EQ(Cli("rewrite --no-account " + CatalogArgs() +
                " 'SELECT SUM(g) AS s FROM t WHERE g < 100 AND g >= 0'")
                .code,
            0);
}

TEST(CliTest, RunIsReproducibleWithSeed) {
  const std::string args = "run --no-account --seed 9 --fixtures " +
                           DataPath("fixtures.json") + " " + CatalogArgs() +
                           " 'SELECT city, COUNT(*) AS n FROM users "
                           "GROUP BY city ORDER BY city'";
  Output first = Cli(args);
  Output second = Cli(args);
  ASSERT_EQ(first.code, 0);
  EXPECT_EQ(first.text, second.text);
  EXPECT_EQ(first.text.rfind("city\tn\n", 0), 0u);
  EXPECT_NE(first.text.find("Berlin"), std::string::npos);
  EXPECT_NE(Cli("run --no-account --seed 10 --fixtures " +
                DataPath("fixtures.json") + " " + CatalogArgs() +
                " 'SELECT city, COUNT(*) AS n FROM users GROUP BY city "
                "ORDER BY city'")
                .text,
            first.text);
}

TEST(CliTest, LedgerAccumulatesAcrossInvocations) {
  const std::string ledger = TempPath("qrw_cli_test_ledger.jsonl");
  const std::string args = "rewrite --json --session s --ledger " + ledger +
                           " " + CatalogArgs() + " " + Quote(kFig2);
  nlohmann::json first = nlohmann::json::parse(Cli(args).text);
  nlohmann::json second = nlohmann::json::parse(Cli(args).text);
  EXPECT_NE(first["accounting"]["query"], second["accounting"]["query"]);
  const double one = first["accounting"]["session_loss"]["epsilon"];
  const double two = second["accounting"]["session_loss"]["epsilon"];
  EXPECT_LE(one, 1.0);
  EXPECT_GT(two, one);
  EXPECT_EQ(second["accounting"]["query_loss"]["epsilon"], one);
  std::remove(ledger.c_str());
}

TEST(CliTest, DpEvalGaussianOracle) {
  Output out = Cli("dp-eval --gaussian-oracle --runs 500 --delta 1e-3");
  ASSERT_EQ(out.code, 0);
  nlohmann::json profile = nlohmann::json::parse(out.text);
  EXPECT_EQ(profile["runs"], 500);
  EXPECT_EQ(profile["eps"].size(), profile["delta"].size());
  EXPECT_EQ(profile["closed_form"].size(), profile["eps"].size());
}

}  // namespace
}  // namespace qrw
