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

#ifndef QRW_CONNECTOR_H_
#define QRW_CONNECTOR_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrw/data_type.h"
#include "qrw/sql/renderer.h"
#include "qrw/value.h"

namespace qrw {

struct ResultSet {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  // Index of `name`; throws InvalidArgumentError.
  std::size_t ColumnIndex(std::string_view name) const;
};

// A table to (re)create: column types are declared from the schema kinds.
struct Fixture {
  std::string name;
  Schema schema;
  std::vector<std::vector<Value>> rows;
};

// One connection per thread; connections are not shared concurrently.
class Connection {
 public:
  virtual ~Connection() = default;

  // Runs one statement. Throws BackendError carrying the statement.
  virtual ResultSet Execute(const std::string& sql) = 0;
  // Drops `fixture.name` if present, then creates and fills it. Throws
  // InvalidArgumentError on values that do not match the column kinds.
  virtual void LoadFixture(const Fixture& fixture) = 0;
  virtual const Dialect& dialect() const = 0;
};

// In-process SQLite database with the functions the embedded dialect needs:
// qrw_uniform() (seeded, one draw per call), LN, LOG, LOG10, EXP, SQRT, SIN,
// COS, LEAST, GREATEST and the VARIANCE / STDDEV aggregates.
class EmbeddedConnection : public Connection {
 public:
  // `path` is a database file, or ":memory:".
  explicit EmbeddedConnection(std::uint64_t seed = 0,
                              const std::string& path = ":memory:");
  ~EmbeddedConnection() override;
  EmbeddedConnection(const EmbeddedConnection&) = delete;
  EmbeddedConnection& operator=(const EmbeddedConnection&) = delete;

  ResultSet Execute(const std::string& sql) override;
  void LoadFixture(const Fixture& fixture) override;
  const Dialect& dialect() const override { return Dialect::Embedded(); }

  // Restarts the qrw_uniform() stream.
  void Reseed(std::uint64_t seed);

 private:
  struct State;
  std::unique_ptr<State> state_;
};

// Client for a qrw SQL server (tools/qrw_sqld) reached at a DSN of the form
// http://host:port.
class NetworkConnection : public Connection {
 public:
  explicit NetworkConnection(const std::string& dsn);
  ~NetworkConnection() override;

  ResultSet Execute(const std::string& sql) override;
  void LoadFixture(const Fixture& fixture) override;
  const Dialect& dialect() const override { return *dialect_; }

 private:
  struct Client;
  std::unique_ptr<Client> client_;
  const Dialect* dialect_ = &Dialect::Embedded();
};

// "embedded" opens an in-memory database; "dsn" connects to the DSN given
// here or, when the QRW_DSN environment variable is set, to that one.
std::unique_ptr<Connection> Connect(std::string_view backend,
                                    const std::optional<std::string>& dsn = {},
                                    std::uint64_t seed = 0);

// Wire format shared by NetworkConnection and the server.
std::string ResultSetToJson(const ResultSet& result);
ResultSet ResultSetFromJson(std::string_view json);
std::string FixtureToJson(const Fixture& fixture);
Fixture FixtureFromJson(std::string_view json);

}  // namespace qrw

#endif  // QRW_CONNECTOR_H_
