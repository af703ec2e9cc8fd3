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

#ifndef QRW_ACCOUNTANT_H_
#define QRW_ACCOUNTANT_H_

#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrw {

enum class MechanismKind { kGaussianSum, kTauThreshold };

// "gaussian-sum" or "tau-threshold".
std::string_view MechanismKindName(MechanismKind kind);
MechanismKind MechanismKindFromName(std::string_view name);

// One noise-adding step of a rewritten query. A tau-threshold event is the
// Gaussian noise on group counts (sensitivity `c`, scale `sigma`) together
// with the probability `delta` of releasing a key it should not.
struct MechanismEvent {
  MechanismKind kind = MechanismKind::kGaussianSum;
  double c = 0;
  double sigma = 0;
  double epsilon = 0;
  double delta = 0;
  std::optional<double> tau;
  std::string label;
  std::string query;
  std::string session;
  std::int64_t timestamp = 0;
};

// Throws InvalidArgumentError unless sigma > 0, c > 0 and the budget share
// is valid.
void ValidateEvent(const MechanismEvent& event);

std::string EventToJson(const MechanismEvent& event);
MechanismEvent EventFromJson(std::string_view line);

// 1.25 to 256, 20 points.
const std::vector<double>& DefaultAlphaGrid();

// Renyi divergence bound at each order of a fixed grid.
class RdpCurve {
 public:
  explicit RdpCurve(std::vector<double> alphas = DefaultAlphaGrid());

  // alpha * c^2 / (2 sigma^2) at every order.
  static RdpCurve Gaussian(double c, double sigma,
                           std::vector<double> alphas = DefaultAlphaGrid());

  void Add(const RdpCurve& other);
  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& values() const { return values_; }

  // Smallest epsilon over the grid such that the curve implies
  // (epsilon, delta)-DP.
  double EpsilonAt(double delta) const;

 private:
  std::vector<double> alphas_;
  std::vector<double> values_;
};

struct PrivacyLoss {
  double epsilon = 0;
  double delta = 0;
};

// Composes the Gaussian parts by RDP and converts at `delta`; the key
// release probabilities of tau-threshold events are added to delta.
PrivacyLoss Compose(std::span<const MechanismEvent> events, double delta,
                    const std::vector<double>& alphas = DefaultAlphaGrid());

// Session ledger. With a path, events of the session already in the file
// are loaded and every recorded event is appended to it as one JSON line.
class Accountant {
 public:
  explicit Accountant(std::string session = "default",
                      std::optional<std::string> ledger_path = {});

  // Fresh query id, distinct from those already in the session.
  std::string NextQueryId();

  // Validates, tags with the session (and a timestamp if unset), appends.
  void Record(MechanismEvent event);

  std::vector<MechanismEvent> events() const;
  std::vector<MechanismEvent> QueryEvents(std::string_view query) const;
  PrivacyLoss ComposeSession(double delta) const;
  PrivacyLoss ComposeQuery(std::string_view query, double delta) const;

  const std::string& session() const { return session_; }

 private:
  mutable std::mutex mutex_;
  std::string session_;
  std::optional<std::string> path_;
  std::vector<MechanismEvent> events_;
  int next_query_ = 1;
};

}  // namespace qrw

#endif  // QRW_ACCOUNTANT_H_
