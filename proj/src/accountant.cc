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

#include "qrw/accountant.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include <json.hpp>

#include "qrw/error.h"

namespace qrw {

using nlohmann::json;

std::string_view MechanismKindName(MechanismKind kind) {
  return kind == MechanismKind::kGaussianSum ? "gaussian-sum"
                                             : "tau-threshold";
}

MechanismKind MechanismKindFromName(std::string_view name) {
  if (name == "gaussian-sum") return MechanismKind::kGaussianSum;
  if (name == "tau-threshold") return MechanismKind::kTauThreshold;
  throw InvalidArgumentError("unknown mechanism kind " + std::string(name));
}

void ValidateEvent(const MechanismEvent& e) {
  if (!(e.sigma > 0) || !std::isfinite(e.sigma)) {
    throw InvalidArgumentError("mechanism event needs sigma > 0");
  }
  if (!(e.c > 0) || !std::isfinite(e.c)) {
    throw InvalidArgumentError("mechanism event needs c > 0");
  }
  if (!(e.epsilon > 0) || !(e.delta >= 0) || !(e.delta < 1)) {
    throw InvalidArgumentError("mechanism event has an invalid budget share");
  }
}

std::string EventToJson(const MechanismEvent& e) {
  json j = {{"session", e.session},     {"query", e.query},
            {"kind", MechanismKindName(e.kind)},
            {"c", e.c},                 {"sigma", e.sigma},
            {"epsilon", e.epsilon},     {"delta", e.delta},
            {"label", e.label},         {"timestamp", e.timestamp}};
  if (e.tau) j["tau"] = *e.tau;
  return j.dump();
}

MechanismEvent EventFromJson(std::string_view line) {
  try {
    json j = json::parse(line);
    MechanismEvent e;
    e.kind = MechanismKindFromName(j.at("kind").get<std::string>());
    e.c = j.at("c").get<double>();
    e.sigma = j.at("sigma").get<double>();
    e.epsilon = j.at("epsilon").get<double>();
    e.delta = j.at("delta").get<double>();
    e.query = j.at("query").get<std::string>();
    e.session = j.value("session", "");
    e.label = j.value("label", "");
    e.timestamp = j.value("timestamp", std::int64_t{0});
    if (j.contains("tau")) e.tau = j["tau"].get<double>();
    return e;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed ledger line: ") + e.what());
  }
}

const std::vector<double>& DefaultAlphaGrid() {
  static const std::vector<double> grid = {
      1.25, 1.5, 1.75, 2,  2.5, 3,  4,  5,  6,   8,
      10,   12,  16,   20, 24,  32, 48, 64, 128, 256};
  return grid;
}

RdpCurve::RdpCurve(std::vector<double> alphas)
    : alphas_(std::move(alphas)), values_(alphas_.size(), 0.0) {}

RdpCurve RdpCurve::Gaussian(double c, double sigma,
                            std::vector<double> alphas) {
  RdpCurve curve(std::move(alphas));
  for (std::size_t i = 0; i < curve.alphas_.size(); ++i) {
    curve.values_[i] = curve.alphas_[i] * c * c / (2 * sigma * sigma);
  }
  return curve;
}

void RdpCurve::Add(const RdpCurve& other) {
  if (other.alphas_ != alphas_) {
    throw InvalidArgumentError("RDP curves use different orders");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] += other.values_[i];
  }
}

double RdpCurve::EpsilonAt(double delta) const {
  if (!(delta > 0) || !(delta < 1)) {
    throw InvalidArgumentError("delta must lie in (0, 1)");
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    const double a = alphas_[i];
    const double eps = values_[i] + std::log((a - 1) / a) -
                       (std::log(delta) + std::log(a)) / (a - 1);
    best = std::min(best, eps);
  }
  return std::max(0.0, best);
}

PrivacyLoss Compose(std::span<const MechanismEvent> events, double delta,
                    const std::vector<double>& alphas) {
  if (events.empty()) return {};
  RdpCurve curve(alphas);
  double extra_delta = 0;
  for (const MechanismEvent& e : events) {
    curve.Add(RdpCurve::Gaussian(e.c, e.sigma, alphas));
    if (e.kind == MechanismKind::kTauThreshold) extra_delta += e.delta;
  }
  return {curve.EpsilonAt(delta), delta + extra_delta};
}

Accountant::Accountant(std::string session,
                       std::optional<std::string> ledger_path)
    : session_(std::move(session)), path_(std::move(ledger_path)) {
  if (!path_) return;
  std::ifstream in(*path_);
  if (!in) return;
  std::set<std::string> queries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    MechanismEvent e = EventFromJson(line);
    if (e.session != session_) continue;
    queries.insert(e.query);
    events_.push_back(std::move(e));
  }
  next_query_ = static_cast<int>(queries.size()) + 1;
}

std::string Accountant::NextQueryId() {
  std::lock_guard lock(mutex_);
  std::set<std::string> used;
  for (const MechanismEvent& e : events_) used.insert(e.query);
  std::string id;
  do {
    id = "q" + std::to_string(next_query_++);
  } while (used.contains(id));
  return id;
}

void Accountant::Record(MechanismEvent event) {
  ValidateEvent(event);
  event.session = session_;
  if (event.timestamp == 0) {
    event.timestamp = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::system_clock::now().time_since_epoch())
                          .count();
  }
  std::lock_guard lock(mutex_);
  if (path_) {
    std::ofstream out(*path_, std::ios::app);
    if (!out) throw IoError("cannot append to ledger " + *path_);
    out << EventToJson(event) << '\n';
    if (!out.flush()) throw IoError("cannot append to ledger " + *path_);
  }
  events_.push_back(std::move(event));
}

std::vector<MechanismEvent> Accountant::events() const {
  std::lock_guard lock(mutex_);
  return events_;
}

std::vector<MechanismEvent> Accountant::QueryEvents(
    std::string_view query) const {
  std::lock_guard lock(mutex_);
  std::vector<MechanismEvent> out;
  for (const MechanismEvent& e : events_) {
    if (e.query == query) out.push_back(e);
  }
  return out;
}

PrivacyLoss Accountant::ComposeSession(double delta) const {
  std::vector<MechanismEvent> snapshot = events();
  return Compose(snapshot, delta);
}

PrivacyLoss Accountant::ComposeQuery(std::string_view query,
                                     double delta) const {
  std::vector<MechanismEvent> snapshot = QueryEvents(query);
  return Compose(snapshot, delta);
}

}  // namespace qrw
