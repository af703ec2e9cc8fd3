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
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qrw/dp_mechanisms.h"
#include "qrw/error.h"

namespace qrw {
namespace {

MechanismEvent Gaussian(double epsilon, double delta, double c = 1) {
  MechanismEvent e;
  e.c = c;
  e.sigma = GaussianSigma(epsilon, delta, c);
  e.epsilon = epsilon;
  e.delta = delta;
  return e;
}

std::string TempPath(const std::string& name) {
  std::string path =
      (std::filesystem::temp_directory_path() / name).string();
  std::remove(path.c_str());
  return path;
}

TEST(RdpCurveTest, GaussianIsLinearInAlpha) {
  RdpCurve curve = RdpCurve::Gaussian(2, 4);
  ASSERT_EQ(curve.alphas().size(), 20u);
  for (std::size_t i = 0; i < curve.alphas().size(); ++i) {
    EXPECT_DOUBLE_EQ(curve.values()[i], curve.alphas()[i] * 4 / 32);
    if (i > 0) EXPECT_GE(curve.values()[i], curve.values()[i - 1]);
  }
}

TEST(ComposeTest, NoEventsIsZeroLoss) {
  PrivacyLoss loss = Compose({}, 1e-5);
  EXPECT_EQ(loss.epsilon, 0);
  EXPECT_EQ(loss.delta, 0);
}

TEST(ComposeTest, SingleGaussianMatchesGridOracle) {
  std::vector<MechanismEvent> one = {Gaussian(1, 1e-5)};
  PrivacyLoss loss = Compose(one, 1e-5);
  EXPECT_LE(loss.epsilon, 1.0);
  EXPECT_NEAR(loss.epsilon, 0.823017, 1e-5);
  EXPECT_EQ(loss.delta, 1e-5);
}

TEST(ComposeTest, TwoGaussiansBeatNaiveComposition) {
  std::vector<MechanismEvent> one = {Gaussian(1, 1e-5)};
  std::vector<MechanismEvent> two = {Gaussian(1, 1e-5), Gaussian(1, 1e-5)};
  const double single = Compose(one, 1e-5).epsilon;
  const double pair = Compose(two, 1e-5).epsilon;
  EXPECT_LT(pair, 2 * single);
  EXPECT_GT(pair, single);
  EXPECT_NEAR(pair, 1.199810, 1e-5);
}

TEST(ComposeTest, PermutationInvariant) {
  std::vector<MechanismEvent> events = {Gaussian(0.3, 1e-6, 2),
                                        Gaussian(1, 1e-5), Gaussian(0.7, 1e-4),
                                        Gaussian(2, 1e-3, 5)};
  events[1].kind = MechanismKind::kTauThreshold;
  const PrivacyLoss base = Compose(events, 1e-5);
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(events.begin(), events.end(), rng);
    PrivacyLoss loss = Compose(events, 1e-5);
    EXPECT_NEAR(loss.epsilon, base.epsilon, 1e-12);
    EXPECT_NEAR(loss.delta, base.delta, 1e-18);
  }
}

TEST(ComposeTest, MonotoneInDeltaAndEvents) {
  std::vector<MechanismEvent> events = {Gaussian(1, 1e-5)};
  double previous = Compose(events, 1e-9).epsilon;
  for (double delta : {1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3}) {
    const double eps = Compose(events, delta).epsilon;
    EXPECT_LE(eps, previous);
    previous = eps;
  }
  previous = 0;
  for (int n = 1; n <= 5; ++n) {
    events.push_back(Gaussian(0.5, 1e-5));
    const double eps = Compose(events, 1e-5).epsilon;
    EXPECT_GE(eps, previous);
    previous = eps;
  }
}

TEST(ComposeTest, TauEventsAddTheirDelta) {
  MechanismEvent tau = Gaussian(0.5, 1e-6);
  tau.kind = MechanismKind::kTauThreshold;
  tau.tau = 10;
  std::vector<MechanismEvent> events = {Gaussian(0.5, 1e-6), tau};
  PrivacyLoss loss = Compose(events, 1e-5);
  EXPECT_DOUBLE_EQ(loss.delta, 1e-5 + 1e-6);
  std::vector<MechanismEvent> gaussians = {Gaussian(0.5, 1e-6),
                                           Gaussian(0.5, 1e-6)};
  EXPECT_DOUBLE_EQ(loss.epsilon, Compose(gaussians, 1e-5).epsilon);
}

// For epsilon <= 1 the converted bound never exceeds the classical one.
TEST(ComposeTest, SingleEventNeverWorseThanClassical) {
  int checked = 0;
  for (int i = 0; i < 10; ++i) {
    const double epsilon = 0.1 + 0.1 * i;
    for (int j = 0; j < 10; ++j) {
      const double delta = std::pow(10.0, -3 - 0.5 * j);
      std::vector<MechanismEvent> one = {Gaussian(epsilon, delta, 1 + j)};
      EXPECT_LE(Compose(one, delta).epsilon, epsilon)
          << "epsilon=" << epsilon << " delta=" << delta;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 100);
}

TEST(ValidateEventTest, RejectsMalformedEvents) {
  MechanismEvent e = Gaussian(1, 1e-5);
  EXPECT_NO_THROW(ValidateEvent(e));
  e.sigma = 0;
  EXPECT_THROW(ValidateEvent(e), InvalidArgumentError);
  e = Gaussian(1, 1e-5);
  e.c = -1;
  EXPECT_THROW(ValidateEvent(e), InvalidArgumentError);
  e = Gaussian(1, 1e-5);
  e.delta = 1;
  EXPECT_THROW(ValidateEvent(e), InvalidArgumentError);
}

TEST(EventJsonTest, RoundTrip) {
  MechanismEvent e = Gaussian(0.5, 1e-6, 3);
  e.kind = MechanismKind::kTauThreshold;
  e.tau = 12.5;
  e.label = "keys";
  e.query = "q3";
  e.session = "s";
  e.timestamp = 42;
  MechanismEvent back = EventFromJson(EventToJson(e));
  EXPECT_EQ(back.kind, e.kind);
  EXPECT_EQ(back.c, e.c);
  EXPECT_EQ(back.sigma, e.sigma);
  EXPECT_EQ(back.epsilon, e.epsilon);
  EXPECT_EQ(back.delta, e.delta);
  EXPECT_EQ(back.tau, e.tau);
  EXPECT_EQ(back.label, e.label);
  EXPECT_EQ(back.query, e.query);
  EXPECT_EQ(back.session, e.session);
  EXPECT_EQ(back.timestamp, e.timestamp);
}

TEST(AccountantTest, RecordsAndTagsQueries) {
  Accountant accountant("s1");
  EXPECT_TRUE(accountant.events().empty());
  const std::string q1 = accountant.NextQueryId();
  MechanismEvent e = Gaussian(1, 1e-5);
  e.query = q1;
  accountant.Record(e);
  EXPECT_EQ(accountant.events().size(), 1u);
  const std::string q2 = accountant.NextQueryId();
  EXPECT_NE(q1, q2);
  e.query = q2;
  accountant.Record(e);
  EXPECT_EQ(accountant.QueryEvents(q1).size(), 1u);
  EXPECT_EQ(accountant.QueryEvents(q2).size(), 1u);
  EXPECT_EQ(accountant.events()[0].session, "s1");
  EXPECT_GT(accountant.events()[0].timestamp, 0);

  MechanismEvent bad = e;
  bad.sigma = -1;
  EXPECT_THROW(accountant.Record(bad), InvalidArgumentError);
  EXPECT_EQ(accountant.events().size(), 2u);

  EXPECT_NEAR(accountant.ComposeQuery(q1, 1e-5).epsilon, 0.823017, 1e-5);
  EXPECT_NEAR(accountant.ComposeSession(1e-5).epsilon, 1.199810, 1e-5);
}

TEST(AccountantTest, LedgerPersistsPerSession) {
  const std::string path = TempPath("qrw_accountant_test.jsonl");
  {
    Accountant a("alpha", path);
    MechanismEvent e = Gaussian(1, 1e-5);
    e.query = a.NextQueryId();
    a.Record(e);
    Accountant b("beta", path);
    e.query = b.NextQueryId();
    b.Record(e);
    b.Record(e);
  }
  Accountant a("alpha", path);
  Accountant b("beta", path);
  EXPECT_EQ(a.events().size(), 1u);
  EXPECT_EQ(b.events().size(), 2u);
  EXPECT_NE(a.NextQueryId(), a.events()[0].query);

  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++lines;
  }
  EXPECT_EQ(lines, 3);
  std::remove(path.c_str());
}

}  // namespace
}  // namespace qrw
