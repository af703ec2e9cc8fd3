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

#include "qrw/dp_eval.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include "qrw/error.h"

namespace qrw {
namespace {

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

Schema HaltonSchema(const HaltonParams& p) {
  return Schema({{"user_id", DataType::Integer(KInterval::Closed(1, p.n_users))},
                 {"g", DataType::Integer(KInterval::Closed(0, p.n_groups - 1))},
                 {"x", DataType::Float(KInterval::Closed(0, 1))}});
}

void Validate(const HaltonParams& p) {
  if (p.n_users < 1) throw InvalidArgumentError("n_users must be positive");
  if (p.n_groups < 1) throw InvalidArgumentError("n_groups must be positive");
  if (p.offset < 1) throw InvalidArgumentError("offset must be at least 1");
  if (p.law == RowsPerUser::kNormal && p.stddev < 0 && p.stddev != -1) {
    throw InvalidArgumentError("stddev must be non-negative");
  }
}

}  // namespace

double Halton(std::uint64_t index, int base) {
  if (base < 2) throw InvalidArgumentError("Halton base must be at least 2");
  double f = 1;
  double r = 0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
  }
  return r;
}

Fixture BuildHaltonFixture(const HaltonParams& p) {
  Validate(p);
  Fixture fixture{p.table, HaltonSchema(p), {}};
  const double mean = p.mean >= 0 ? p.mean : p.n_users / 2.0;
  const double stddev = p.stddev >= 0 ? p.stddev : mean / 4;
  boost::math::normal normal;
  std::uint64_t row = p.offset;
  for (int user = 1; user <= p.n_users; ++user) {
    std::int64_t count = 1;
    if (p.law == RowsPerUser::kNormal) {
      const double u = Halton(p.offset + static_cast<std::uint64_t>(user), 5);
      const double draw = mean + stddev * boost::math::quantile(normal, u);
      count = std::max<std::int64_t>(0, std::llround(draw));
    }
    for (std::int64_t i = 0; i < count; ++i, ++row) {
      const auto g = static_cast<std::int64_t>(
          std::floor(p.n_groups * Halton(row, 3)));
      fixture.rows.push_back({Value(std::int64_t{user}), Value(g),
                              Value(Halton(row, 2))});
    }
  }
  return fixture;
}

Catalog HaltonCatalog(const HaltonParams& params) {
  Validate(params);
  Catalog catalog;
  catalog.Add({params.table, HaltonSchema(params), Visibility::kPrivate, {}});
  return catalog;
}

PrivacyUnitDefinition HaltonPrivacyUnit(const HaltonParams& params,
                                        const Catalog& catalog) {
  return PrivacyUnitDefinition({{params.table, {}, "user_id"}}, catalog);
}

std::vector<AdjacentFixture> AdjacentFixtures(const Fixture& fixture,
                                              const std::string& pid_column,
                                              std::size_t max_users) {
  auto column = fixture.schema.Find(pid_column);
  if (!column) {
    throw InvalidArgumentError("fixture has no column " + pid_column);
  }
  std::map<Value, std::size_t> counts;
  for (const auto& row : fixture.rows) ++counts[row[*column]];
  std::vector<Value> ids;
  for (const auto& [id, n] : counts) ids.push_back(id);
  if (max_users > 0 && ids.size() > max_users) {
    Value heaviest = ids.front();
    for (const auto& [id, n] : counts) {
      if (n > counts[heaviest]) heaviest = id;
    }
    std::vector<Value> chosen;
    for (std::size_t i = 0; i < max_users; ++i) {
      chosen.push_back(ids[i * ids.size() / max_users]);
    }
    if (std::find(chosen.begin(), chosen.end(), heaviest) == chosen.end()) {
      chosen.back() = heaviest;
    }
    ids = std::move(chosen);
  }
  std::vector<AdjacentFixture> out;
  for (const Value& id : ids) {
    AdjacentFixture adjacent{id, {fixture.name, fixture.schema, {}}};
    for (const auto& row : fixture.rows) {
      if (!(row[*column] == id)) adjacent.fixture.rows.push_back(row);
    }
    out.push_back(std::move(adjacent));
  }
  return out;
}

std::vector<double> DefaultEpsilonGrid() {
  std::vector<double> grid;
  for (int i = 0; i <= 12; ++i) grid.push_back(0.25 * i);
  return grid;
}

double PrivacyProfile::DeltaAt(double epsilon) const {
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (std::abs(epsilons[i] - epsilon) < 1e-12) return deltas[i];
  }
  throw InvalidArgumentError("epsilon is not on the profile grid");
}

double PrivacyProfile::MarginAt(double epsilon) const {
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (std::abs(epsilons[i] - epsilon) < 1e-12) return margins[i];
  }
  throw InvalidArgumentError("epsilon is not on the profile grid");
}

std::string PrivacyProfile::ToJson() const {
  nlohmann::json j = {{"eps", epsilons}, {"delta", deltas},
                      {"runs", runs},    {"margin", margins},
                      {"bins", bins},    {"degenerate", degenerate}};
  return j.dump();
}

std::string PrivacyProfile::ToCsv() const {
  std::ostringstream out;
  out << "eps,delta,margin\n";
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    out << epsilons[i] << ',' << deltas[i] << ',' << margins[i] << '\n';
  }
  return out.str();
}

PrivacyProfile EstimateProfile(const std::vector<Sample>& reference,
                               const std::vector<std::vector<Sample>>& adjacent,
                               const std::vector<double>& epsilons,
                               double confidence) {
  if (reference.empty()) throw InvalidArgumentError("no reference runs");
  if (!(confidence > 0) || !(confidence < 1)) {
    throw InvalidArgumentError("confidence must lie in (0, 1)");
  }
  PrivacyProfile profile;
  profile.epsilons = epsilons;
  profile.deltas.assign(epsilons.size(), 0.0);
  profile.runs = static_cast<int>(reference.size());
  profile.bins = static_cast<int>(
      std::ceil(std::sqrt(static_cast<double>(reference.size()))));
  const std::size_t bins = static_cast<std::size_t>(profile.bins);

  for (const std::vector<Sample>& other : adjacent) {
    if (other.empty()) throw InvalidArgumentError("no adjacent runs");
    std::set<std::string> cells;
    for (const auto* runs : {&reference, &other}) {
      for (const Sample& s : *runs) {
        for (const auto& [cell, v] : s) cells.insert(cell);
      }
    }
    for (const std::string& cell : cells) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto* runs : {&reference, &other}) {
        for (const Sample& s : *runs) {
          auto it = s.find(cell);
          if (it == s.end()) continue;
          lo = std::min(lo, it->second);
          hi = std::max(hi, it->second);
        }
      }
      if (lo == hi) profile.degenerate = true;
      // Last bin: the cell is absent from the run.
      auto histogram = [&](const std::vector<Sample>& runs) {
        std::vector<double> p(bins + 1, 0.0);
        for (const Sample& s : runs) {
          auto it = s.find(cell);
          std::size_t b = bins;
          if (it != s.end()) {
            b = hi > lo ? static_cast<std::size_t>(
                              (it->second - lo) / (hi - lo) * bins)
                        : 0;
            b = std::min(b, bins - 1);
          }
          p[b] += 1;
        }
        for (double& v : p) v /= static_cast<double>(runs.size());
        return p;
      };
      const std::vector<double> p = histogram(reference);
      const std::vector<double> q = histogram(other);
      for (std::size_t i = 0; i < epsilons.size(); ++i) {
        const double scale = std::exp(epsilons[i]);
        double forward = 0;
        double backward = 0;
        for (std::size_t b = 0; b <= bins; ++b) {
          forward += std::max(0.0, p[b] - scale * q[b]);
          backward += std::max(0.0, q[b] - scale * p[b]);
        }
        profile.deltas[i] =
            std::max({profile.deltas[i], forward, backward});
      }
    }
  }
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    profile.deltas[i] = std::clamp(profile.deltas[i], 0.0, 1.0);
    if (i > 0 && epsilons[i] >= epsilons[i - 1]) {
      profile.deltas[i] = std::min(profile.deltas[i], profile.deltas[i - 1]);
    }
    profile.margins.push_back(
        (1 + std::exp(epsilons[i])) *
        std::sqrt(std::log(2 / (1 - confidence)) / (2.0 * profile.runs)));
  }
  return profile;
}

std::vector<Sample> RunSamples(Connection& connection, const std::string& sql,
                               const std::vector<std::string>& keys,
                               int runs) {
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r) {
    ResultSet result = connection.Execute(sql);
    std::vector<std::size_t> key_index;
    for (const std::string& k : keys) {
      key_index.push_back(result.ColumnIndex(k));
    }
    Sample sample;
    for (const auto& row : result.rows) {
      std::string group;
      for (std::size_t k : key_index) group += row[k].ToString() + "|";
      for (std::size_t c = 0; c < result.columns.size(); ++c) {
        if (std::find(key_index.begin(), key_index.end(), c) !=
            key_index.end()) {
          continue;
        }
        if (auto v = row[c].ToDouble()) {
          sample[group + result.columns[c]] = *v;
        }
      }
    }
    samples.push_back(std::move(sample));
  }
  return samples;
}

PrivacyProfile EstimatePrivacyProfile(
    const std::string& sql, const std::vector<std::string>& keys,
    const Fixture& reference, const std::vector<AdjacentFixture>& adjacent,
    const ProfileOptions& options) {
  if (options.runs < 1) throw InvalidArgumentError("runs must be positive");
  EmbeddedConnection connection(options.seed);
  connection.LoadFixture(reference);
  std::vector<Sample> base = RunSamples(connection, sql, keys, options.runs);
  std::vector<std::vector<Sample>> others;
  for (std::size_t k = 0; k < adjacent.size(); ++k) {
    connection.LoadFixture(adjacent[k].fixture);
    connection.Reseed(options.seed + k + 1);
    others.push_back(RunSamples(connection, sql, keys, options.runs));
  }
  return EstimateProfile(base, others, options.epsilons, options.confidence);
}

double GaussianProfileDelta(double epsilon, double sigma, double c) {
  const double a = c / (2 * sigma);
  const double b = epsilon * sigma / c;
  return NormalCdf(a - b) - std::exp(epsilon) * NormalCdf(-a - b);
}

}  // namespace qrw
