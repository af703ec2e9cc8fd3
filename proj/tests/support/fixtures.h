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

#ifndef QRW_TESTS_SUPPORT_FIXTURES_H_
#define QRW_TESTS_SUPPORT_FIXTURES_H_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qrw/connector.h"
#include "qrw/privacy_unit.h"
#include "qrw/sql/catalog.h"

namespace qrw::testing {

inline std::string DataPath(const std::string& name) {
  return std::string(QRW_TEST_DATA_DIR) + "/" + name;
}

inline const Catalog& TestCatalog() {
  static const Catalog* catalog =
      new Catalog(Catalog::FromFile(DataPath("catalog.json")));
  return *catalog;
}

inline const PrivacyUnitDefinition& TestPrivacyUnit() {
  static const PrivacyUnitDefinition* definition = new PrivacyUnitDefinition(
      PrivacyUnitDefinition::FromFile(DataPath("privacy_unit.json"),
                                      TestCatalog()));
  return *definition;
}

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Deterministic contents for every table of the test catalog: users own
// orders, orders own items (every foreign key resolves).
inline std::vector<Fixture> CatalogFixtures() {
  const Catalog& catalog = TestCatalog();
  auto fixture = [&](const std::string& name) {
    return Fixture{name, catalog.Get(name).schema, {}};
  };
  const char* cities[] = {"Paris", "Berlin", "Rome"};
  std::vector<Fixture> out;
  Fixture users = fixture("users");
  for (int i = 1; i <= 20; ++i) {
    users.rows.push_back({Value(i), Value("user" + std::to_string(i)),
                          Value((i * 37) % 90 + 10), Value(cities[i % 3])});
  }
  Fixture orders = fixture("orders");
  for (int i = 1; i <= 50; ++i) {
    orders.rows.push_back({Value(i), Value((i * 7) % 20 + 1),
                           Value(((i * 131) % 1000) / 2.0),
                           Value((i * 11) % 31 + 1)});
  }
  Fixture items = fixture("items");
  for (int i = 1; i <= 100; ++i) {
    items.rows.push_back({Value(i), Value((i * 13) % 50 + 1),
                          Value(((i * 17) % 200) / 2.0),
                          Value((i * 3) % 10 + 1)});
  }
  Fixture table_1 = fixture("table_1");
  for (int i = 1; i <= 30; ++i) {
    table_1.rows.push_back(
        {Value(i), Value(i % 5), Value(((i * 29) % 21 - 10) / 10.0)});
  }
  Fixture t = fixture("t");
  for (int i = 1; i <= 40; ++i) {
    t.rows.push_back(
        {Value(i), Value(((i * 19) % 21 - 10) / 10.0), Value(i % 4)});
  }
  Fixture visits = fixture("visits");
  Fixture visits_sd = fixture("visits_sd");
  for (int i = 1; i <= 30; ++i) {
    visits.rows.push_back({Value(i % 20 + 1), Value(i * 1.5)});
    visits_sd.rows.push_back({Value(i % 20 + 1), Value(i * 1.25)});
  }
  Fixture countries = fixture("countries");
  countries.rows = {{Value("FR"), Value(68000000)},
                    {Value("DE"), Value(84000000)},
                    {Value("IT"), Value(59000000)}};
  for (Fixture* f : {&users, &orders, &items, &table_1, &t, &visits,
                     &visits_sd, &countries}) {
    out.push_back(std::move(*f));
  }
  return out;
}

// Statements of a ';'-separated file; lines starting with "--" are skipped.
inline std::vector<std::string> ReadStatements(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  std::string line;
  std::string current;
  while (std::getline(in, line)) {
    if (line.rfind("--", 0) == 0) continue;
    current += (current.empty() ? "" : " ") + line;
    while (true) {
      std::size_t semi = current.find(';');
      if (semi == std::string::npos) break;
      std::string statement = current.substr(0, semi);
      current = current.substr(semi + 1);
      if (statement.find_first_not_of(" \t") != std::string::npos) {
        out.push_back(statement.substr(statement.find_first_not_of(" \t")));
      }
    }
  }
  return out;
}

inline void LoadCatalogFixtures(Connection& connection) {
  for (const Fixture& f : CatalogFixtures()) connection.LoadFixture(f);
}

}  // namespace qrw::testing

#endif  // QRW_TESTS_SUPPORT_FIXTURES_H_
