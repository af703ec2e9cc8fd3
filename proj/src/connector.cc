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

#include "qrw/connector.h"

#include <sqlite3.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <random>

#include <httplib.h>
#include <json.hpp>

#include "qrw/error.h"
#include "qrw/sql/ast.h"

namespace qrw {
namespace {

using nlohmann::json;

std::string Excerpt(const std::string& sql) {
  constexpr std::size_t kMax = 2000;
  return sql.size() <= kMax ? sql : sql.substr(0, kMax) + " ...";
}

// ------------------------------------------------------------ SQLite UDFs

struct Rng {
  std::mt19937_64 engine;
};

void Uniform(sqlite3_context* ctx, int, sqlite3_value**) {
  auto* rng = static_cast<Rng*>(sqlite3_user_data(ctx));
  sqlite3_result_double(ctx, static_cast<double>(rng->engine() >> 11) *
                                 0x1.0p-53);
}

template <double (*F)(double), bool (*Domain)(double)>
void Math(sqlite3_context* ctx, int, sqlite3_value** argv) {
  if (sqlite3_value_type(argv[0]) == SQLITE_NULL) {
    sqlite3_result_null(ctx);
    return;
  }
  double x = sqlite3_value_double(argv[0]);
  if (!Domain(x)) {
    sqlite3_result_null(ctx);
    return;
  }
  sqlite3_result_double(ctx, F(x));
}

bool Any(double) { return true; }
bool Positive(double x) { return x > 0; }
bool NonNegative(double x) { return x >= 0; }
double Exp(double x) { return std::exp(x); }
double Ln(double x) { return std::log(x); }
double Log10(double x) { return std::log10(x); }
double Sqrt(double x) { return std::sqrt(x); }
double Sin(double x) { return std::sin(x); }
double Cos(double x) { return std::cos(x); }

// LEAST / GREATEST skipping NULLs; a REAL argument makes the result REAL.
template <bool kGreatest>
void Extremum(sqlite3_context* ctx, int argc, sqlite3_value** argv) {
  int best = -1;
  bool any_real = false;
  for (int i = 0; i < argc; ++i) {
    int type = sqlite3_value_type(argv[i]);
    if (type == SQLITE_NULL) continue;
    if (type == SQLITE_FLOAT) any_real = true;
    if (best < 0) {
      best = i;
      continue;
    }
    int c;
    if (type == SQLITE_TEXT || sqlite3_value_type(argv[best]) == SQLITE_TEXT) {
      std::string a = reinterpret_cast<const char*>(sqlite3_value_text(argv[i]));
      std::string b =
          reinterpret_cast<const char*>(sqlite3_value_text(argv[best]));
      c = a.compare(b);
    } else if (type == SQLITE_INTEGER &&
               sqlite3_value_type(argv[best]) == SQLITE_INTEGER) {
      sqlite3_int64 a = sqlite3_value_int64(argv[i]);
      sqlite3_int64 b = sqlite3_value_int64(argv[best]);
      c = (a > b) - (a < b);
    } else {
      double a = sqlite3_value_double(argv[i]);
      double b = sqlite3_value_double(argv[best]);
      c = (a > b) - (a < b);
    }
    if (kGreatest ? c > 0 : c < 0) best = i;
  }
  if (best < 0) {
    sqlite3_result_null(ctx);
  } else if (any_real && sqlite3_value_type(argv[best]) == SQLITE_INTEGER) {
    sqlite3_result_double(ctx, sqlite3_value_double(argv[best]));
  } else {
    sqlite3_result_value(ctx, argv[best]);
  }
}

// Sample variance (Welford); NULL below two values.
struct Moments {
  std::int64_t n;
  double mean;
  double m2;
};

void MomentsStep(sqlite3_context* ctx, int, sqlite3_value** argv) {
  auto* m = static_cast<Moments*>(
      sqlite3_aggregate_context(ctx, sizeof(Moments)));
  if (m == nullptr || sqlite3_value_type(argv[0]) == SQLITE_NULL) return;
  double x = sqlite3_value_double(argv[0]);
  ++m->n;
  double d = x - m->mean;
  m->mean += d / static_cast<double>(m->n);
  m->m2 += d * (x - m->mean);
}

template <bool kSqrt>
void MomentsFinal(sqlite3_context* ctx) {
  auto* m = static_cast<Moments*>(sqlite3_aggregate_context(ctx, 0));
  if (m == nullptr || m->n < 2) {
    sqlite3_result_null(ctx);
    return;
  }
  double v = std::max(0.0, m->m2 / static_cast<double>(m->n - 1));
  sqlite3_result_double(ctx, kSqrt ? std::sqrt(v) : v);
}

Value ColumnValue(sqlite3_stmt* stmt, int i) {
  switch (sqlite3_column_type(stmt, i)) {
    case SQLITE_INTEGER:
      return Value(static_cast<std::int64_t>(sqlite3_column_int64(stmt, i)));
    case SQLITE_FLOAT:
      return Value(sqlite3_column_double(stmt, i));
    case SQLITE_NULL:
      return Value::Null();
    default: {
      const auto* text =
          reinterpret_cast<const char*>(sqlite3_column_text(stmt, i));
      return Value(std::string(text, sqlite3_column_bytes(stmt, i)));
    }
  }
}

std::string SqliteType(TypeKind kind) {
  switch (kind) {
    case TypeKind::kBoolean:
    case TypeKind::kInteger:
      return "INTEGER";
    case TypeKind::kFloat:
      return "REAL";
    case TypeKind::kText:
      return "TEXT";
  }
  return "TEXT";
}

void CheckValue(const Fixture& f, std::size_t column, const Value& v) {
  const Column& c = f.schema[column];
  bool ok = v.is_null() || (c.type.is_text() ? v.is_text() : v.is_numeric());
  if (c.type.kind() == TypeKind::kInteger && v.is_double()) ok = false;
  if (!ok) {
    throw InvalidArgumentError("fixture " + f.name + ": value " +
                               v.ToString() + " does not fit column " + c.name +
                               " of type " + c.type.ToString());
  }
}

// --------------------------------------------------------- JSON encoding

json ValueToJson(const Value& v) {
  if (v.is_null()) return nullptr;
  if (v.is_bool()) return v.as_bool();
  if (v.is_int()) return v.as_int();
  if (v.is_text()) return v.as_text();
  double d = v.as_double_exact();
  if (std::isfinite(d)) return d;
  return json{{"float", std::isnan(d) ? "nan" : (d > 0 ? "inf" : "-inf")}};
}

Value ValueFromJson(const json& j) {
  if (j.is_null()) return Value::Null();
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_number()) return Value(j.get<double>());
  if (j.is_string()) return Value(j.get<std::string>());
  if (j.is_object() && j.contains("float")) {
    std::string s = j.at("float").get<std::string>();
    if (s == "inf") return Value(std::numeric_limits<double>::infinity());
    if (s == "-inf") return Value(-std::numeric_limits<double>::infinity());
    return Value(std::numeric_limits<double>::quiet_NaN());
  }
  throw InvalidArgumentError("cannot decode value " + j.dump());
}

std::string TypeText(const DataType& t) {
  std::string base(TypeKindName(t.kind()));
  return t.nullable() ? "optional<" + base + ">" : base;
}

DataType TypeFromText(const std::string& text) {
  std::string base = text;
  bool nullable = false;
  if (base.rfind("optional<", 0) == 0 && base.back() == '>') {
    base = base.substr(9, base.size() - 10);
    nullable = true;
  }
  DataType t = DataType::Text();
  if (base == "integer") {
    t = DataType::Integer();
  } else if (base == "float") {
    t = DataType::Float();
  } else if (base == "boolean") {
    t = DataType::Boolean();
  } else if (base != "text") {
    throw InvalidArgumentError("unknown column type " + text);
  }
  return t.WithNullable(nullable);
}

}  // namespace

std::size_t ResultSet::ColumnIndex(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw InvalidArgumentError("result has no column " + std::string(name));
}

// --------------------------------------------------------------- embedded

struct EmbeddedConnection::State {
  sqlite3* db = nullptr;
  Rng rng;
};

EmbeddedConnection::EmbeddedConnection(std::uint64_t seed,
                                       const std::string& path)
    : state_(std::make_unique<State>()) {
  state_->rng.engine.seed(seed);
  if (sqlite3_open(path.c_str(), &state_->db) != SQLITE_OK) {
    std::string message = sqlite3_errmsg(state_->db);
    sqlite3_close(state_->db);
    throw BackendError("cannot open " + path + ": " + message);
  }
  sqlite3* db = state_->db;
  constexpr int kPure = SQLITE_UTF8 | SQLITE_DETERMINISTIC;
  sqlite3_create_function(db, "qrw_uniform", 0, SQLITE_UTF8, &state_->rng,
                          Uniform, nullptr, nullptr);
  sqlite3_create_function(db, "exp", 1, kPure, nullptr, Math<Exp, Any>,
                          nullptr, nullptr);
  sqlite3_create_function(db, "ln", 1, kPure, nullptr, Math<Ln, Positive>,
                          nullptr, nullptr);
  sqlite3_create_function(db, "log", 1, kPure, nullptr, Math<Log10, Positive>,
                          nullptr, nullptr);
  sqlite3_create_function(db, "log10", 1, kPure, nullptr,
                          Math<Log10, Positive>, nullptr, nullptr);
  sqlite3_create_function(db, "sqrt", 1, kPure, nullptr,
                          Math<Sqrt, NonNegative>, nullptr, nullptr);
  sqlite3_create_function(db, "sin", 1, kPure, nullptr, Math<Sin, Any>,
                          nullptr, nullptr);
  sqlite3_create_function(db, "cos", 1, kPure, nullptr, Math<Cos, Any>,
                          nullptr, nullptr);
  sqlite3_create_function(db, "least", -1, kPure, nullptr, Extremum<false>,
                          nullptr, nullptr);
  sqlite3_create_function(db, "greatest", -1, kPure, nullptr, Extremum<true>,
                          nullptr, nullptr);
  sqlite3_create_function(db, "variance", 1, kPure, nullptr, nullptr,
                          MomentsStep, MomentsFinal<false>);
  sqlite3_create_function(db, "stddev", 1, kPure, nullptr, nullptr,
                          MomentsStep, MomentsFinal<true>);
}

EmbeddedConnection::~EmbeddedConnection() { sqlite3_close(state_->db); }

void EmbeddedConnection::Reseed(std::uint64_t seed) {
  state_->rng.engine.seed(seed);
}

ResultSet EmbeddedConnection::Execute(const std::string& sql) {
  sqlite3_stmt* stmt = nullptr;
  const char* tail = nullptr;
  if (sqlite3_prepare_v2(state_->db, sql.c_str(),
                         static_cast<int>(sql.size()), &stmt,
                         &tail) != SQLITE_OK) {
    throw BackendError(std::string(sqlite3_errmsg(state_->db)) +
                       "\nin statement: " + Excerpt(sql));
  }
  std::unique_ptr<sqlite3_stmt, int (*)(sqlite3_stmt*)> guard(stmt,
                                                              sqlite3_finalize);
  ResultSet result;
  int n = sqlite3_column_count(stmt);
  for (int i = 0; i < n; ++i) result.columns.push_back(sqlite3_column_name(stmt, i));
  while (true) {
    int rc = sqlite3_step(stmt);
    if (rc == SQLITE_DONE) break;
    if (rc != SQLITE_ROW) {
      throw BackendError(std::string(sqlite3_errmsg(state_->db)) +
                         "\nin statement: " + Excerpt(sql));
    }
    std::vector<Value> row;
    row.reserve(n);
    for (int i = 0; i < n; ++i) row.push_back(ColumnValue(stmt, i));
    result.rows.push_back(std::move(row));
  }
  return result;
}

void EmbeddedConnection::LoadFixture(const Fixture& fixture) {
  for (const auto& row : fixture.rows) {
    if (row.size() != fixture.schema.size()) {
      throw InvalidArgumentError("fixture " + fixture.name +
                                 ": row width does not match the schema");
    }
    for (std::size_t i = 0; i < row.size(); ++i) CheckValue(fixture, i, row[i]);
  }
  std::string table = sql::QuoteQualified(fixture.name);
  std::string columns;
  std::string params;
  for (std::size_t i = 0; i < fixture.schema.size(); ++i) {
    const Column& c = fixture.schema[i];
    if (i > 0) {
      columns += ", ";
      params += ", ";
    }
    columns += sql::QuoteIdentifier(c.name) + " " + SqliteType(c.type.kind());
    params += "?";
  }
  Execute("DROP TABLE IF EXISTS " + table);
  Execute("CREATE TABLE " + table + " (" + columns + ")");
  Execute("BEGIN");
  std::string insert = "INSERT INTO " + table + " VALUES (" + params + ")";
  sqlite3_stmt* stmt = nullptr;
  if (sqlite3_prepare_v2(state_->db, insert.c_str(), -1, &stmt, nullptr) !=
      SQLITE_OK) {
    Execute("ROLLBACK");
    throw BackendError(sqlite3_errmsg(state_->db));
  }
  std::unique_ptr<sqlite3_stmt, int (*)(sqlite3_stmt*)> guard(stmt,
                                                              sqlite3_finalize);
  for (const auto& row : fixture.rows) {
    sqlite3_reset(stmt);
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Value& v = row[i];
      int p = static_cast<int>(i) + 1;
      if (v.is_null()) {
        sqlite3_bind_null(stmt, p);
      } else if (v.is_bool()) {
        sqlite3_bind_int64(stmt, p, v.as_bool() ? 1 : 0);
      } else if (v.is_int()) {
        sqlite3_bind_int64(stmt, p, v.as_int());
      } else if (v.is_double()) {
        sqlite3_bind_double(stmt, p, v.as_double_exact());
      } else {
        sqlite3_bind_text(stmt, p, v.as_text().c_str(),
                          static_cast<int>(v.as_text().size()),
                          SQLITE_TRANSIENT);
      }
    }
    if (sqlite3_step(stmt) != SQLITE_DONE) {
      std::string message = sqlite3_errmsg(state_->db);
      guard.reset();
      Execute("ROLLBACK");
      throw BackendError("loading " + fixture.name + ": " + message);
    }
  }
  guard.reset();
  Execute("COMMIT");
}

// ---------------------------------------------------------------- network

struct NetworkConnection::Client {
  explicit Client(const std::string& url) : http(url) {}
  httplib::Client http;
};

NetworkConnection::NetworkConnection(const std::string& dsn) {
  if (dsn.rfind("http://", 0) != 0) {
    throw InvalidArgumentError("DSN must look like http://host:port, got " +
                               dsn);
  }
  client_ = std::make_unique<Client>(dsn);
  client_->http.set_connection_timeout(5);
  client_->http.set_read_timeout(600);
  auto res = client_->http.Get("/info");
  if (!res) {
    throw BackendError("cannot reach " + dsn + ": " +
                       httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw BackendError(dsn + "/info returned HTTP " +
                       std::to_string(res->status));
  }
  dialect_ = &Dialect::ByName(json::parse(res->body).at("dialect").get<std::string>());
}

NetworkConnection::~NetworkConnection() = default;

namespace {

std::string Post(httplib::Client& http, const std::string& path,
                 const std::string& body, const std::string& type,
                 const std::string& context) {
  auto res = http.Post(path, body, type);
  if (!res) {
    throw BackendError("request failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    std::string message = res->body;
    try {
      message = json::parse(res->body).at("error").get<std::string>();
    } catch (const std::exception&) {
    }
    throw BackendError(message + "\nin statement: " + Excerpt(context));
  }
  return res->body;
}

}  // namespace

ResultSet NetworkConnection::Execute(const std::string& sql) {
  return ResultSetFromJson(
      Post(client_->http, "/query", sql, "application/sql", sql));
}

void NetworkConnection::LoadFixture(const Fixture& fixture) {
  Post(client_->http, "/fixture", FixtureToJson(fixture), "application/json",
       "load " + fixture.name);
}

std::unique_ptr<Connection> Connect(std::string_view backend,
                                    const std::optional<std::string>& dsn,
                                    std::uint64_t seed) {
  if (backend == "embedded") return std::make_unique<EmbeddedConnection>(seed);
  if (backend == "dsn") {
    const char* env = std::getenv("QRW_DSN");
    std::optional<std::string> target = dsn;
    if (env != nullptr && *env != '\0') target = std::string(env);
    if (!target) {
      throw InvalidArgumentError("backend dsn needs --dsn or QRW_DSN");
    }
    return std::make_unique<NetworkConnection>(*target);
  }
  throw InvalidArgumentError("unknown backend " + std::string(backend) +
                             " (expected embedded or dsn)");
}

std::string ResultSetToJson(const ResultSet& result) {
  json rows = json::array();
  for (const auto& row : result.rows) {
    json r = json::array();
    for (const Value& v : row) r.push_back(ValueToJson(v));
    rows.push_back(std::move(r));
  }
  return json{{"columns", result.columns}, {"rows", rows}}.dump();
}

ResultSet ResultSetFromJson(std::string_view text) {
  json j = json::parse(text);
  ResultSet result;
  result.columns = j.at("columns").get<std::vector<std::string>>();
  for (const json& row : j.at("rows")) {
    std::vector<Value> values;
    for (const json& v : row) values.push_back(ValueFromJson(v));
    result.rows.push_back(std::move(values));
  }
  return result;
}

std::string FixtureToJson(const Fixture& fixture) {
  json columns = json::array();
  for (const Column& c : fixture.schema.columns()) {
    columns.push_back({{"name", c.name}, {"type", TypeText(c.type)}});
  }
  json rows = json::array();
  for (const auto& row : fixture.rows) {
    json r = json::array();
    for (const Value& v : row) r.push_back(ValueToJson(v));
    rows.push_back(std::move(r));
  }
  return json{{"name", fixture.name}, {"columns", columns}, {"rows", rows}}
      .dump();
}

Fixture FixtureFromJson(std::string_view text) {
  json j = json::parse(text);
  Fixture f;
  f.name = j.at("name").get<std::string>();
  std::vector<Column> columns;
  for (const json& c : j.at("columns")) {
    columns.push_back({c.at("name").get<std::string>(),
                       TypeFromText(c.at("type").get<std::string>())});
  }
  f.schema = Schema(std::move(columns));
  for (const json& row : j.at("rows")) {
    std::vector<Value> values;
    for (const json& v : row) values.push_back(ValueFromJson(v));
    f.rows.push_back(std::move(values));
  }
  return f;
}

}  // namespace qrw
