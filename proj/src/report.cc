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

#include "qrw/report.h"

#include <sstream>

#include <json.hpp>

#include "qrw/kinterval.h"

namespace qrw {
namespace {

using nlohmann::json;

Budget Allocated(const RewriteResult& result) {
  Budget total{0, 0};
  for (const DpReduceReport& m : result.mechanisms) {
    total.epsilon += m.budget.epsilon;
    total.delta += m.budget.delta;
  }
  return total;
}

std::string Num(double v) { return FormatDouble(v); }

}  // namespace

std::string ReportText(const RewriteResult& result,
                       const RewriteReport& report) {
  std::ostringstream out;
  const Allocation& a = result.allocation;
  out << "-- target: " << PropertyName(result.target) << "\n";
  out << "-- allocation:\n";
  for (std::size_t i = 0; i < result.graph.nodes.size(); ++i) {
    out << "--   " << result.graph.Describe(i) << ": "
        << a.rules[i].ToString() << "\n";
  }
  out << "-- budget: epsilon=" << Num(a.budget.epsilon)
      << " delta=" << Num(a.budget.delta) << " over " << a.n_dp
      << " DP mechanism(s)";
  if (a.n_dp > 0) {
    out << ", each epsilon=" << Num(a.per_mechanism.epsilon)
        << " delta=" << Num(a.per_mechanism.delta);
  }
  out << "\n";
  for (const DpReduceReport& m : result.mechanisms) {
    out << "-- mechanism " << result.graph.Describe(m.node)
        << ": epsilon=" << Num(m.budget.epsilon)
        << " delta=" << Num(m.budget.delta)
        << (m.public_keys ? ", public keys" : ", tau-thresholded keys")
        << "\n";
    for (const MechanismEvent& e : m.events) {
      out << "--   " << MechanismKindName(e.kind) << " c=" << Num(e.c)
          << " sigma=" << Num(e.sigma) << " epsilon=" << Num(e.epsilon)
          << " delta=" << Num(e.delta);
      if (e.tau) out << " tau=" << Num(*e.tau);
      out << " (" << e.label << ")\n";
    }
  }
  const Budget total = Allocated(result);
  out << "-- allocated total: epsilon=" << Num(total.epsilon)
      << " delta=" << Num(total.delta) << "\n";
  if (report.query_loss) {
    out << "-- accounted query " << report.query_id
        << ": epsilon=" << Num(report.query_loss->epsilon)
        << " delta=" << Num(report.query_loss->delta) << "\n";
  }
  if (report.session_loss) {
    out << "-- accounted session " << report.session
        << ": epsilon=" << Num(report.session_loss->epsilon)
        << " delta=" << Num(report.session_loss->delta) << "\n";
  }
  return out.str();
}

std::string ReportJson(const RewriteResult& result,
                       const RewriteReport& report) {
  const Allocation& a = result.allocation;
  json allocation = json::array();
  for (std::size_t i = 0; i < result.graph.nodes.size(); ++i) {
    allocation.push_back({{"node", i},
                          {"label", result.graph.nodes[i]->Label()},
                          {"rule", a.rules[i].ToString()}});
  }
  json mechanisms = json::array();
  for (const DpReduceReport& m : result.mechanisms) {
    json events = json::array();
    for (const MechanismEvent& e : m.events) {
      json ej = {{"kind", MechanismKindName(e.kind)},
                 {"c", e.c},
                 {"sigma", e.sigma},
                 {"epsilon", e.epsilon},
                 {"delta", e.delta},
                 {"label", e.label}};
      if (e.tau) ej["tau"] = *e.tau;
      events.push_back(ej);
    }
    json tau = nullptr;
    if (m.tau) {
      tau = {{"epsilon_keys", m.tau->epsilon_keys},
             {"delta_keys", m.tau->delta_keys},
             {"sigma_keys", m.tau->sigma_keys},
             {"tau", m.tau->tau}};
    }
    mechanisms.push_back({{"node", m.node},
                          {"epsilon", m.budget.epsilon},
                          {"delta", m.budget.delta},
                          {"public_keys", m.public_keys},
                          {"tau", tau},
                          {"events", events}});
  }
  const Budget total = Allocated(result);
  json accounting = nullptr;
  if (report.query_loss) {
    accounting = {{"query", report.query_id}, {"session", report.session}};
    accounting["query_loss"] = {{"epsilon", report.query_loss->epsilon},
                                {"delta", report.query_loss->delta}};
    if (report.session_loss) {
      accounting["session_loss"] = {{"epsilon", report.session_loss->epsilon},
                                    {"delta", report.session_loss->delta}};
    }
  }
  json j = {
      {"sql", report.sql},
      {"target", PropertyName(result.target)},
      {"allocation", allocation},
      {"budget",
       {{"epsilon", a.budget.epsilon},
        {"delta", a.budget.delta},
        {"n_dp", a.n_dp},
        {"per_mechanism",
         {{"epsilon", a.per_mechanism.epsilon},
          {"delta", a.per_mechanism.delta}}},
        {"total_allocated",
         {{"epsilon", total.epsilon}, {"delta", total.delta}}}}},
      {"mechanisms", mechanisms},
      {"accounting", accounting}};
  return j.dump(2);
}

}  // namespace qrw
