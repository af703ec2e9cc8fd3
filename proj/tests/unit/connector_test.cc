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

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qrw/connector.h"
#include "qrw/error.h"
#include "qrw/sql/binder.h"
#include "qrw/sql/renderer.h"
#include "support/fixtures.h"
#include "support/golden.h"

namespace qrw {
namespace {

using testing::TestCatalog;

std::vector<std::vector<Value>> Sorted(std::vector<std::vector<Value>> rows) {
  std::sort(rows.begin(), rows.end());
  return rows;
}

bool SameValue(const Value& a, const Value& b) {
  if (a.is_numeric() && b.is_numeric()) {
    double x = *a.ToDouble();
    double y = *b.ToDouble();
    return x == y || std::fabs(x - y) <= 1e-9 * std::max(1.0, std::fabs(x));
  }
  return a == b;
}

void ExpectSameRows(const ResultSet& a, const ResultSet& b) {
  auto x = Sorted(a.rows);
  auto y = Sorted(b.rows);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ASSERT_EQ(x[i].size(), y[i].size());
    for (std::size_t j = 0; j < x[i].size(); ++j) {
      EXPECT_TRUE(SameValue(x[i][j], y[i][j]))
          << x[i][j].ToString() << " vs " << y[i][j].ToString();
    }
  }
}

TEST(EmbeddedTest, SelectOne) {
  EmbeddedConnection db;
  ResultSet r = db.Execute("SELECT 1");
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0], std::vector<Value>{Value(1)});
}

TEST(EmbeddedTest, RenderedCountOverTenRows) {
  EmbeddedConnection db;
  Fixture f{"ten", Schema({{"x", DataType::Integer()}}), {}};
  for (int i = 0; i < 10; ++i) f.rows.push_back({Value(i)});
  db.LoadFixture(f);
  Catalog catalog;
  catalog.Add({"ten", f.schema, Visibility::kPublic, std::nullopt});
  RelationPtr r = BindSql("SELECT COUNT(*) AS n FROM ten", catalog).relation;
  ResultSet result = db.Execute(Render(r, db.dialect()));
  EXPECT_EQ(result.columns, std::vector<std::string>{"n"});
  EXPECT_EQ(result.rows, (std::vector<std::vector<Value>>{{Value(10)}}));
}

TEST(EmbeddedTest, EmptyFixtureAndReplacement) {
  EmbeddedConnection db;
  Schema schema({{"a", DataType::Integer()},
                 {"b", DataType::Float()},
                 {"c", DataType::Text()}});
  db.LoadFixture({"empty", schema, {}});
  EXPECT_TRUE(db.Execute("SELECT * FROM empty").rows.empty());
  EXPECT_EQ(db.Execute("SELECT * FROM empty").columns.size(), 3u);
  db.LoadFixture({"empty", schema, {{Value(1), Value(2.5), Value("x")}}});
  EXPECT_EQ(db.Execute("SELECT * FROM empty").rows.size(), 1u);
}

TEST(EmbeddedTest, TypeMismatchIsRejected) {
  EmbeddedConnection db;
  Schema schema({{"a", DataType::Integer()}});
  EXPECT_THROW(db.LoadFixture({"bad", schema, {{Value("text")}}}),
               InvalidArgumentError);
  EXPECT_THROW(db.LoadFixture({"bad", schema, {{Value(1), Value(2)}}}),
               InvalidArgumentError);
}

TEST(EmbeddedTest, SqlErrorsNameTheStatement) {
  EmbeddedConnection db;
  try {
    db.Execute("SELECT * FROM missing_table");
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_NE(std::string(e.what()).find("missing_table"), std::string::npos);
  }
}

TEST(EmbeddedTest, Functions) {
  EmbeddedConnection db;
  ResultSet r = db.Execute(
      "SELECT LEAST(3, NULL, 2), GREATEST(1, 2.5), LN(-1), LOG10(1000), "
      "LOG(100), SQRT(-4), LEAST(NULL, NULL)");
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0][0], Value(2));
  EXPECT_EQ(r.rows[0][1], Value(2.5));
  EXPECT_TRUE(r.rows[0][2].is_null());
  EXPECT_NEAR(*r.rows[0][3].ToDouble(), 3.0, 1e-12);
  EXPECT_NEAR(*r.rows[0][4].ToDouble(), 2.0, 1e-12);
  EXPECT_TRUE(r.rows[0][5].is_null());
  EXPECT_TRUE(r.rows[0][6].is_null());
  Fixture f{"v", Schema({{"x", DataType::Float()}}),
            {{Value(1.0)}, {Value(2.0)}, {Value(3.0)}, {Value::Null()}}};
  db.LoadFixture(f);
  ResultSet v = db.Execute("SELECT VARIANCE(x), STDDEV(x) FROM v");
  EXPECT_DOUBLE_EQ(*v.rows[0][0].ToDouble(), 1.0);
  EXPECT_DOUBLE_EQ(*v.rows[0][1].ToDouble(), 1.0);
}

TEST(EmbeddedTest, SeededUniformIsReproducible) {
  auto draws = [](std::uint64_t seed) {
    EmbeddedConnection db(seed);
    db.Execute("CREATE TABLE r (i INTEGER)");
    db.Execute(
        "WITH RECURSIVE s(i) AS (SELECT 1 UNION ALL SELECT i + 1 FROM s "
        "WHERE i < 100) INSERT INTO r SELECT i FROM s");
    return db.Execute("SELECT qrw_uniform() FROM r").rows;
  };
  auto a = draws(7);
  EXPECT_EQ(a, draws(7));
  EXPECT_NE(a, draws(8));
  std::sort(a.begin(), a.end());
  EXPECT_NE(a.front(), a.back());
  for (const auto& row : a) {
    double u = row[0].as_double_exact();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(EmbeddedTest, ConnectSelectsBackend) {
  EXPECT_EQ(Connect("embedded")->dialect().name, "embedded");
  EXPECT_THROW(Connect("oracle"), InvalidArgumentError);
  unsetenv("QRW_DSN");
  EXPECT_THROW(Connect("dsn"), InvalidArgumentError);
  EXPECT_THROW(NetworkConnection("postgres://x"), InvalidArgumentError);
}

// The rendered SQL of every corpus query returns what the original query
// returns.
TEST(EmbeddedTest, RenderedCorpusMatchesDirectExecution) {
  EmbeddedConnection db;
  testing::LoadCatalogFixtures(db);
  for (const std::string& text :
       testing::ReadStatements(testing::DataPath("corpus.sql"))) {
    SCOPED_TRACE(text);
    BoundQuery bound = BindSql(text, TestCatalog());
    ResultSet rendered =
        db.Execute(Render(bound.relation, db.dialect(), bound.order_by));
    EXPECT_EQ(rendered.columns, bound.relation->schema().Names());
    // The embedded engine has no native RIGHT or FULL JOIN to compare with.
    if (text.find("RIGHT JOIN") != std::string::npos ||
        text.find("FULL JOIN") != std::string::npos) {
      continue;
    }
    ExpectSameRows(rendered, db.Execute(text));
  }
}

TEST(EmbeddedTest, EmulatedOuterJoins) {
  EmbeddedConnection db;
  testing::LoadCatalogFixtures(db);
  auto run = [&](const std::string& text) {
    return db.Execute(
        Render(BindSql(text, TestCatalog()).relation, db.dialect()));
  };
  ResultSet right = run(
      "SELECT * FROM orders o RIGHT JOIN users u ON o.user_id = u.id AND "
      "o.day < 5");
  ResultSet left_swapped = run(
      "SELECT o.id, o.user_id, o.amount, o.day, u.id, u.name, u.age, u.city "
      "FROM users u LEFT JOIN orders o ON o.user_id = u.id AND o.day < 5");
  ExpectSameRows(right, left_swapped);
  ResultSet full = run(
      "SELECT * FROM orders o FULL JOIN users u ON o.user_id = u.id AND "
      "u.age < 40");
  ResultSet left = run(
      "SELECT * FROM orders o LEFT JOIN users u ON o.user_id = u.id AND "
      "u.age < 40");
  ResultSet unmatched = db.Execute(
      "SELECT COUNT(*) FROM users u WHERE NOT (u.age < 40 AND EXISTS "
      "(SELECT 1 FROM orders o WHERE o.user_id = u.id))");
  EXPECT_EQ(static_cast<std::int64_t>(full.rows.size()),
            static_cast<std::int64_t>(left.rows.size()) +
                unmatched.rows[0][0].as_int());
}

// Starts tools/qrw_sqld on a free port for the lifetime of the test.
class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    int out[2];
    ASSERT_EQ(pipe(out), 0);
    pid_ = fork();
    ASSERT_GE(pid_, 0);
    if (pid_ == 0) {
      dup2(out[1], STDOUT_FILENO);
      close(out[0]);
      execl(QRW_SQLD_PATH, QRW_SQLD_PATH, "--port", "0", "--seed", "3",
            static_cast<char*>(nullptr));
      _exit(127);
    }
    close(out[1]);
    FILE* f = fdopen(out[0], "r");
    char line[256] = {0};
    ASSERT_NE(fgets(line, sizeof(line), f), nullptr);
    std::string text(line);
    std::size_t at = text.find("http://");
    ASSERT_NE(at, std::string::npos) << text;
    dsn_ = text.substr(at, text.find_last_not_of("\r\n") - at + 1);
    fclose(f);
  }

  void TearDown() override {
    if (pid_ > 0) {
      kill(pid_, SIGTERM);
      waitpid(pid_, nullptr, 0);
    }
  }

  pid_t pid_ = -1;
  std::string dsn_;
};

TEST_F(ServerTest, NetworkMatchesEmbedded) {
  NetworkConnection remote(dsn_);
  EXPECT_EQ(remote.dialect().name, "embedded");
  EmbeddedConnection local;
  for (const Fixture& f : testing::CatalogFixtures()) {
    remote.LoadFixture(f);
    local.LoadFixture(f);
  }
  for (const std::string& text :
       testing::ReadStatements(testing::DataPath("corpus.sql"))) {
    SCOPED_TRACE(text);
    BoundQuery bound = BindSql(text, TestCatalog());
    std::string sql = Render(bound.relation, Dialect::Embedded(), bound.order_by);
    ResultSet a = remote.Execute(sql);
    ResultSet b = local.Execute(sql);
    EXPECT_EQ(a.columns, b.columns);
    EXPECT_EQ(a.rows, b.rows);
  }
  EXPECT_THROW(remote.Execute("SELECT * FROM nowhere"), BackendError);
}

TEST_F(ServerTest, DsnFromEnvironment) {
  setenv("QRW_DSN", dsn_.c_str(), 1);
  auto connection = Connect("dsn");
  unsetenv("QRW_DSN");
  EXPECT_EQ(connection->Execute("SELECT 1 AS one").rows[0][0], Value(1));
}

TEST(WireFormatTest, RoundTrip) {
  ResultSet r{{"a", "b"},
              {{Value(1), Value(2.5)},
               {Value::Null(), Value(std::numeric_limits<double>::infinity())},
               {Value("x"), Value(true)}}};
  ResultSet back = ResultSetFromJson(ResultSetToJson(r));
  EXPECT_EQ(back.columns, r.columns);
  EXPECT_EQ(back.rows, r.rows);
  Fixture f{"f", Schema({{"a", DataType::Integer().WithNullable(true)}}),
            {{Value(1)}, {Value::Null()}}};
  Fixture g = FixtureFromJson(FixtureToJson(f));
  EXPECT_EQ(g.name, "f");
  EXPECT_TRUE(g.schema[0].type.nullable());
  EXPECT_EQ(g.rows, f.rows);
}

}  // namespace
}  // namespace qrw
