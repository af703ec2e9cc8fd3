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

// Serves an embedded database over HTTP so that NetworkConnection can reach
// it: GET /info, POST /query (SQL text), POST /fixture (fixture JSON).

#include <iostream>
#include <mutex>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "qrw/connector.h"
#include "qrw/error.h"

int main(int argc, char** argv) {
  CLI::App app{"qrw SQL server"};
  std::string host = "127.0.0.1";
  int port = 8787;
  std::string database = ":memory:";
  std::uint64_t seed = 0;
  app.add_option("--host", host, "Address to bind");
  app.add_option("--port", port, "Port to listen on (0 picks a free one)");
  app.add_option("--database", database, "SQLite file or :memory:");
  app.add_option("--seed", seed, "Seed of qrw_uniform()");
  CLI11_PARSE(app, argc, argv);

  qrw::EmbeddedConnection db(seed, database);
  std::mutex mu;
  httplib::Server server;
  auto fail = [](httplib::Response& res, const std::exception& e) {
    res.status = 400;
    res.set_content(nlohmann::json{{"error", e.what()}}.dump(),
                    "application/json");
  };
  server.Get("/info", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"dialect":"embedded"})", "application/json");
  });
  server.Post("/query", [&](const httplib::Request& req,
                            httplib::Response& res) {
    std::lock_guard<std::mutex> lock(mu);
    try {
      res.set_content(qrw::ResultSetToJson(db.Execute(req.body)),
                      "application/json");
    } catch (const std::exception& e) {
      fail(res, e);
    }
  });
  server.Post("/fixture", [&](const httplib::Request& req,
                              httplib::Response& res) {
    std::lock_guard<std::mutex> lock(mu);
    try {
      db.LoadFixture(qrw::FixtureFromJson(req.body));
      res.set_content("{}", "application/json");
    } catch (const std::exception& e) {
      fail(res, e);
    }
  });
  if (port == 0) {
    port = server.bind_to_any_port(host);
  } else if (!server.bind_to_port(host, port)) {
    std::cerr << "cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  std::cout << "listening on http://" << host << ":" << port << std::endl;
  server.listen_after_bind();
  return 0;
}
