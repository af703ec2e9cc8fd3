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

#ifndef QRW_REWRITING_H_
#define QRW_REWRITING_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qrw/accountant.h"
#include "qrw/dp_mechanisms.h"
#include "qrw/privacy_unit.h"
#include "qrw/relation.h"
#include "qrw/sql/catalog.h"

namespace qrw {

enum class Property { kPup, kDp, kSd, kPub, kPubd };

// "PUP", "DP", "SD", "Pub", "Pubd".
std::string_view PropertyName(Property property);
Property PropertyFromName(std::string_view name);

// Whether an input with property `produced` meets a requirement. Pubd is met
// by every releasable property (Pub, DP, SD, Pubd); the others only by
// themselves.
bool Satisfies(Property produced, Property required);

struct RewritingRule {
  std::vector<Property> inputs;
  Property output;

  bool is_dp() const;
  // "() -> PUP", "PUP -> DP", "(PUP, Pubd) -> PUP".
  std::string ToString() const;

  friend bool operator==(const RewritingRule&, const RewritingRule&) = default;
};

// The graph of a query with the candidate rules of every node.
struct RuleSets {
  RelationPtr root;
  // Topological order, inputs first; the root is last.
  std::vector<RelationPtr> nodes;
  // Indices into `nodes` of each node's inputs.
  std::vector<std::vector<std::size_t>> inputs;
  // Candidate rules per node in preference order.
  std::vector<std::vector<RewritingRule>> rules;
  // Why some rules are not candidates, per node.
  std::vector<std::vector<std::string>> notes;
  // Columns equal to the privacy id when the node is privacy preserving.
  std::vector<std::set<std::string>> pid_sources;

  std::size_t IndexOf(const Relation* node) const;
  std::string Describe(std::size_t node) const;  // "#3 Reduce GROUP BY a"
};

struct Allocation {
  // One rule per node of `graph.nodes`.
  std::vector<RewritingRule> rules;
  std::size_t n_dp = 0;
  Budget budget;
  // Share of each PUP -> DP rule: (epsilon / n, delta / n).
  Budget per_mechanism;
};

// Throws RewriteError unless every node's inputs produce what its rule
// requires and the root produces `target`.
void CheckFeasible(const RuleSets& graph, const Allocation& allocation,
                   Property target);

struct DpReduceReport {
  std::size_t node = 0;
  Budget budget;
  std::optional<TauThresholdSpec> tau;
  bool public_keys = false;
  std::vector<MechanismEvent> events;
};

struct RewriteResult {
  RelationPtr relation;
  RuleSets graph;
  Allocation allocation;
  Property target = Property::kPubd;
  std::vector<DpReduceReport> mechanisms;

  std::vector<MechanismEvent> events() const;
};

class Rewriter {
 public:
  Rewriter(const Catalog& catalog, const PrivacyUnitDefinition& privacy_unit,
           DpOptions options = {});

  // Candidate rules per node. Throws RewriteError for a private table with
  // neither a privacy unit nor a synthetic twin.
  RuleSets SetRules(const RelationPtr& root) const;

  // Keeps only rules whose requirements can be met (to a fixpoint) and root
  // rules producing `target`. Throws RewriteError naming the node that
  // blocks the target.
  void Eliminate(RuleSets& graph, Property target) const;

  // Best feasible allocation: matches the target, then prefers DP over
  // synthetic data over public-only, then fewer DP rules, then earlier
  // preferred rules in node order.
  Allocation SelectAllocation(const RuleSets& graph, Property target,
                              const Budget& budget) const;

  RewriteResult Apply(RuleSets graph, Allocation allocation,
                      Property target) const;

  RewriteResult Rewrite(const RelationPtr& root, Property target,
                        const Budget& budget) const;

 private:
  const Catalog& catalog_;
  const PrivacyUnitDefinition& privacy_unit_;
  DpOptions options_;
};

}  // namespace qrw

#endif  // QRW_REWRITING_H_
