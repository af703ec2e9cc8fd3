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

#include "qrw/rewriting.h"

#include <algorithm>
#include <functional>

#include "qrw/error.h"

namespace qrw {
namespace {

constexpr std::size_t kMaxAllocations = 1'000'000;

RewritingRule R(std::vector<Property> inputs, Property output) {
  return {std::move(inputs), output};
}

using P = Property;

// Allocation ranking: higher class, fewer DP rules, smaller rule indices.
struct Score {
  int category = -1;
  std::size_t n_dp = 0;
  std::vector<std::size_t> choice;

  bool BetterThan(const Score& other) const {
    if (category != other.category) return category > other.category;
    if (n_dp != other.n_dp) return n_dp < other.n_dp;
    return choice < other.choice;
  }
};

bool Reads(const std::vector<RelationPtr>& a,
           const std::vector<RelationPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

std::string_view PropertyName(Property property) {
  switch (property) {
    case P::kPup: return "PUP";
    case P::kDp: return "DP";
    case P::kSd: return "SD";
    case P::kPub: return "Pub";
    case P::kPubd: return "Pubd";
  }
  return "?";
}

Property PropertyFromName(std::string_view name) {
  for (Property p : {P::kPup, P::kDp, P::kSd, P::kPub, P::kPubd}) {
    std::string lower(PropertyName(p));
    std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
    std::string given(name);
    std::transform(given.begin(), given.end(), given.begin(), ::tolower);
    if (lower == given) return p;
  }
  throw InvalidArgumentError("unknown property " + std::string(name));
}

bool Satisfies(Property produced, Property required) {
  if (produced == required) return true;
  return required == P::kPubd && produced != P::kPup;
}

bool RewritingRule::is_dp() const {
  return output == P::kDp && inputs.size() == 1 && inputs[0] == P::kPup;
}

std::string RewritingRule::ToString() const {
  std::string out;
  if (inputs.size() == 1) {
    out = std::string(PropertyName(inputs[0]));
  } else {
    out = "(";
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (i > 0) out += ", ";
      out += PropertyName(inputs[i]);
    }
    out += ")";
  }
  return out + " -> " + std::string(PropertyName(output));
}

std::size_t RuleSets::IndexOf(const Relation* node) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].get() == node) return i;
  }
  throw InvalidArgumentError("node is not part of the graph");
}

std::string RuleSets::Describe(std::size_t node) const {
  return "#" + std::to_string(node) + " " + nodes[node]->Label();
}

void CheckFeasible(const RuleSets& graph, const Allocation& allocation,
                   Property target) {
  if (allocation.rules.size() != graph.nodes.size()) {
    throw RewriteError("allocation does not cover the graph");
  }
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const RewritingRule& rule = allocation.rules[i];
    if (rule.inputs.size() != graph.inputs[i].size()) {
      throw RewriteError("rule arity mismatch at " + graph.Describe(i));
    }
    for (std::size_t k = 0; k < rule.inputs.size(); ++k) {
      const RewritingRule& input = allocation.rules[graph.inputs[i][k]];
      if (!Satisfies(input.output, rule.inputs[k])) {
        throw RewriteError("infeasible allocation at " + graph.Describe(i));
      }
    }
  }
  if (!Satisfies(allocation.rules.back().output, target)) {
    throw RewriteError("allocation does not reach the target");
  }
}

std::vector<MechanismEvent> RewriteResult::events() const {
  std::vector<MechanismEvent> out;
  for (const DpReduceReport& m : mechanisms) {
    out.insert(out.end(), m.events.begin(), m.events.end());
  }
  return out;
}

Rewriter::Rewriter(const Catalog& catalog,
                   const PrivacyUnitDefinition& privacy_unit,
                   DpOptions options)
    : catalog_(catalog), privacy_unit_(privacy_unit), options_(options) {}

RuleSets Rewriter::SetRules(const RelationPtr& root) const {
  RuleSets g;
  g.root = root;
  g.nodes = TopoOrder(root);
  const std::size_t n = g.nodes.size();
  g.inputs.resize(n);
  g.rules.resize(n);
  g.notes.resize(n);
  g.pid_sources.resize(n);
  std::map<const Relation*, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[g.nodes[i].get()] = i;

  for (std::size_t i = 0; i < n; ++i) {
    const RelationPtr& node = g.nodes[i];
    for (const RelationPtr& in : node->inputs()) {
      g.inputs[i].push_back(index.at(in.get()));
    }
    std::vector<RewritingRule>& rules = g.rules[i];
    std::set<std::string>& sources = g.pid_sources[i];
    auto input_sources = [&](std::size_t k) -> const std::set<std::string>& {
      return g.pid_sources[g.inputs[i][k]];
    };
    switch (node->kind()) {
      case Relation::Kind::kTable: {
        const TableNode& t = node->table();
        if (t.visibility == Visibility::kPublic) {
          rules.push_back(R({}, P::kPub));
          break;
        }
        if (const PrivacyUnitEntry* entry = privacy_unit_.Find(t.name)) {
          rules.push_back(R({}, P::kPup));
          if (auto source = PidSourceColumn(*entry)) sources.insert(*source);
        }
        if (t.synthetic) rules.push_back(R({}, P::kSd));
        if (rules.empty()) {
          throw RewriteError("table " + t.name +
                             " is private but has neither a privacy unit "
                             "definition nor a synthetic twin");
        }
        break;
      }
      case Relation::Kind::kValues:
        rules.push_back(R({}, P::kPub));
        break;
      case Relation::Kind::kMap:
        rules = {R({P::kPup}, P::kPup), R({P::kPub}, P::kPub),
                 R({P::kSd}, P::kSd), R({P::kPubd}, P::kPubd)};
        for (const NamedExpr& p : node->map().projections) {
          if (p.expr.is_column() &&
              input_sources(0).contains(p.expr.column_name())) {
            sources.insert(p.name);
          }
        }
        break;
      case Relation::Kind::kReduce: {
        const ReduceNode& r = node->reduce();
        bool pid_key = false;
        for (const Expr& key : r.group_by) {
          if (key.is_column() && input_sources(0).contains(key.column_name())) {
            pid_key = true;
          }
        }
        if (pid_key) {
          rules.push_back(R({P::kPup}, P::kPup));
          for (const NamedExpr& a : r.aggregates) {
            if (a.expr.is_aggregate() &&
                a.expr.aggregate() == AggregateKind::kFirst &&
                a.expr.args()[0].is_column() &&
                input_sources(0).contains(a.expr.args()[0].column_name())) {
              sources.insert(a.name);
            }
          }
        }
        try {
          DecomposeAggregates(*node);
          rules.push_back(R({P::kPup}, P::kDp));
        } catch (const RewriteError& e) {
          g.notes[i].push_back("PUP -> DP unavailable: " +
                               std::string(e.what()));
        }
        rules.push_back(R({P::kPub}, P::kPub));
        rules.push_back(R({P::kSd}, P::kSd));
        rules.push_back(R({P::kPubd}, P::kPubd));
        break;
      }
      case Relation::Kind::kJoin: {
        const JoinNode& j = node->join();
        const bool left_rows = j.kind == JoinKind::kInner ||
                               j.kind == JoinKind::kLeft ||
                               j.kind == JoinKind::kCross;
        const bool right_rows = j.kind == JoinKind::kInner ||
                                j.kind == JoinKind::kRight ||
                                j.kind == JoinKind::kCross;
        rules.push_back(R({P::kPup, P::kPup}, P::kPup));
        if (left_rows) {
          rules.push_back(R({P::kPup, P::kPubd}, P::kPup));
        } else {
          g.notes[i].push_back("(PUP, Pubd) -> PUP unavailable for " +
                               std::string(JoinKindName(j.kind)) + " JOIN");
        }
        if (right_rows) {
          rules.push_back(R({P::kPubd, P::kPup}, P::kPup));
        } else {
          g.notes[i].push_back("(Pubd, PUP) -> PUP unavailable for " +
                               std::string(JoinKindName(j.kind)) + " JOIN");
        }
        rules.push_back(R({P::kPub, P::kPub}, P::kPub));
        rules.push_back(R({P::kSd, P::kSd}, P::kSd));
        rules.push_back(R({P::kSd, P::kPub}, P::kSd));
        rules.push_back(R({P::kPub, P::kSd}, P::kSd));
        rules.push_back(R({P::kPubd, P::kPubd}, P::kPubd));
        if (left_rows) {
          for (const std::string& s : input_sources(0)) {
            sources.insert(JoinColumnName(j.left_alias, s));
          }
        }
        if (right_rows) {
          for (const std::string& s : input_sources(1)) {
            sources.insert(JoinColumnName(j.right_alias, s));
          }
        }
        break;
      }
      case Relation::Kind::kSetOp:
        rules = {R({P::kPup, P::kPup}, P::kPup), R({P::kPub, P::kPub}, P::kPub),
                 R({P::kSd, P::kSd}, P::kSd),    R({P::kSd, P::kPub}, P::kSd),
                 R({P::kPub, P::kSd}, P::kSd),
                 R({P::kPubd, P::kPubd}, P::kPubd)};
        break;
    }
  }
  return g;
}

void Rewriter::Eliminate(RuleSets& g, Property target) const {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      std::size_t before = g.rules[i].size();
      std::erase_if(g.rules[i], [&](const RewritingRule& rule) {
        for (std::size_t k = 0; k < rule.inputs.size(); ++k) {
          const auto& producers = g.rules[g.inputs[i][k]];
          bool met = std::any_of(
              producers.begin(), producers.end(), [&](const RewritingRule& p) {
                return Satisfies(p.output, rule.inputs[k]);
              });
          if (!met) return true;
        }
        return false;
      });
      if (g.rules[i].size() != before) changed = true;
    }
  }
  std::vector<RewritingRule>& root = g.rules.back();
  std::vector<Property> reachable;
  for (const RewritingRule& r : root) reachable.push_back(r.output);
  std::erase_if(root, [&](const RewritingRule& r) {
    return !Satisfies(r.output, target);
  });
  if (!root.empty()) return;

  std::string message = "no rewriting reaches " +
                        std::string(PropertyName(target)) + ": ";
  std::optional<std::size_t> blocking;
  for (std::size_t i = 0; i < g.nodes.size() && !blocking; ++i) {
    if (g.rules[i].empty() && i + 1 < g.nodes.size()) blocking = i;
  }
  if (blocking) {
    message += "node " + g.Describe(*blocking) + " admits no feasible rule";
  } else {
    message += "the result node " + g.Describe(g.nodes.size() - 1) +
               " can only be";
    if (reachable.empty()) message += " nothing";
    for (Property p : reachable) message += " " + std::string(PropertyName(p));
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (const std::string& note : g.notes[i]) {
      message += "; " + g.Describe(i) + ": " + note;
    }
  }
  throw RewriteError(message);
}

Allocation Rewriter::SelectAllocation(const RuleSets& g, Property target,
                                      const Budget& budget) const {
  ValidateBudget(budget);
  const std::size_t n = g.nodes.size();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> consumers(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < g.inputs[i].size(); ++k) {
      consumers[g.inputs[i][k]].push_back({i, k});
    }
  }
  std::vector<std::size_t> choice(n, 0);
  Score best;
  std::size_t visited = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t remaining) {
    if (remaining == 0) {
      if (++visited > kMaxAllocations) {
        throw RewriteError("too many candidate allocations");
      }
      Score score;
      score.choice = choice;
      bool sd = false;
      for (std::size_t i = 0; i < n; ++i) {
        const RewritingRule& r = g.rules[i][choice[i]];
        if (r.is_dp()) ++score.n_dp;
        if (r.inputs.empty() && r.output == P::kSd) sd = true;
      }
      score.category = score.n_dp > 0 ? 2 : sd ? 1 : 0;
      if (score.BetterThan(best)) best = std::move(score);
      return;
    }
    const std::size_t v = remaining - 1;
    for (std::size_t ri = 0; ri < g.rules[v].size(); ++ri) {
      const Property out = g.rules[v][ri].output;
      bool ok = v + 1 < n || Satisfies(out, target);
      for (const auto& [u, k] : consumers[v]) {
        if (!ok) break;
        ok = Satisfies(out, g.rules[u][choice[u]].inputs[k]);
      }
      if (!ok) continue;
      choice[v] = ri;
      visit(v);
    }
  };
  visit(n);
  if (best.category < 0) {
    throw RewriteError("no feasible allocation reaches " +
                       std::string(PropertyName(target)));
  }
  Allocation a;
  a.budget = budget;
  for (std::size_t i = 0; i < n; ++i) {
    a.rules.push_back(g.rules[i][best.choice[i]]);
  }
  a.n_dp = best.n_dp;
  if (a.n_dp > 0) {
    const double count = static_cast<double>(a.n_dp);
    a.per_mechanism = {budget.epsilon / count, budget.delta / count};
  } else {
    a.per_mechanism = {0, 0};
  }
  return a;
}

RewriteResult Rewriter::Apply(RuleSets g, Allocation allocation,
                              Property target) const {
  CheckFeasible(g, allocation, target);
  const std::size_t n = g.nodes.size();
  const std::string pid = kPidColumn;
  RewriteResult result;
  std::vector<RelationPtr> out(n);

  for (std::size_t i = 0; i < n; ++i) {
    const RelationPtr& node = g.nodes[i];
    const RewritingRule& rule = allocation.rules[i];
    std::vector<RelationPtr> ins;
    for (std::size_t k : g.inputs[i]) ins.push_back(out[k]);
    const bool pup = rule.output == P::kPup;

    if (node->kind() == Relation::Kind::kTable) {
      const TableNode& t = node->table();
      if (pup) {
        out[i] = AttachPid(node, privacy_unit_, catalog_);
      } else if (rule.output == P::kSd) {
        out[i] = Relation::Table(*t.synthetic, t.schema, Visibility::kPublic);
      } else {
        out[i] = node;
      }
      continue;
    }
    if (rule.is_dp()) {
      DpReduce dp = RewriteReduceDp(*node, ins[0], allocation.per_mechanism,
                                    options_);
      for (MechanismEvent& e : dp.events) {
        e.label = g.Describe(i) + ": " + e.label;
      }
      result.mechanisms.push_back({i, allocation.per_mechanism, dp.tau,
                                   dp.public_keys, dp.events});
      out[i] = dp.relation;
      continue;
    }
    if (!pup) {
      out[i] = Reads(ins, node->inputs()) ? node : node->WithInputs(ins);
      continue;
    }
    switch (node->kind()) {
      case Relation::Kind::kMap: {
        const MapNode& m = node->map();
        std::vector<NamedExpr> projections = m.projections;
        projections.push_back({pid, Col(pid)});
        out[i] = Relation::Map(std::move(projections), m.filter, m.limit,
                               ins[0]);
        break;
      }
      case Relation::Kind::kReduce: {
        const ReduceNode& r = node->reduce();
        std::vector<NamedExpr> aggregates = r.aggregates;
        aggregates.push_back(
            {pid, Expr::Aggregate(AggregateKind::kFirst, Col(pid))});
        std::vector<Expr> keys = r.group_by;
        keys.push_back(Col(pid));
        out[i] = Relation::Reduce(std::move(aggregates), std::move(keys),
                                  ins[0]);
        break;
      }
      case Relation::Kind::kJoin: {
        const JoinNode& j = node->join();
        const std::string la = j.left_alias.empty() ? "_l" : j.left_alias;
        const std::string ra = j.right_alias.empty() ? "_r" : j.right_alias;
        std::map<std::string, std::string> renamed;
        std::vector<std::string> order;
        for (const Column& c : j.left->schema().columns()) {
          order.push_back(JoinColumnName(j.left_alias, c.name));
          renamed[order.back()] = JoinColumnName(la, c.name);
        }
        for (const Column& c : j.right->schema().columns()) {
          order.push_back(JoinColumnName(j.right_alias, c.name));
          renamed[order.back()] = JoinColumnName(ra, c.name);
        }
        Expr on = j.on.RenameColumns([&](const std::string& name) {
          auto it = renamed.find(name);
          return it == renamed.end() ? name : it->second;
        });
        const bool left_pup = rule.inputs[0] == P::kPup;
        const bool right_pup = rule.inputs[1] == P::kPup;
        const Expr left_pid = Col(JoinColumnName(la, pid));
        const Expr right_pid = Col(JoinColumnName(ra, pid));
        JoinKind kind = j.kind;
        if (left_pup && right_pup) {
          Expr same = Call(Function::kEq, {left_pid, right_pid});
          if (kind == JoinKind::kCross) {
            kind = JoinKind::kInner;
            on = same;
          } else {
            on = Call(Function::kAnd, {on, same});
          }
        }
        RelationPtr joined = Relation::Join(kind, on, la, ra, ins[0], ins[1]);
        std::vector<NamedExpr> projections;
        for (const std::string& name : order) {
          projections.push_back({name, Col(renamed[name])});
        }
        Expr owner = left_pid;
        if (left_pup && right_pup) {
          if (kind == JoinKind::kRight) owner = right_pid;
          if (kind == JoinKind::kFull) {
            owner = Call(Function::kCoalesce, {left_pid, right_pid});
          }
        } else if (right_pup) {
          owner = right_pid;
        }
        projections.push_back({pid, owner});
        out[i] = Relation::Map(std::move(projections), std::nullopt,
                               std::nullopt, joined);
        break;
      }
      case Relation::Kind::kSetOp:
        out[i] = Relation::SetOp(node->set_op().op, ins[0], ins[1]);
        break;
      default:
        throw RewriteError("no privacy preserving rewriting for " +
                           g.Describe(i));
    }
  }

  RelationPtr root = out.back();
  if (root->schema().Find(pid)) {
    std::vector<NamedExpr> projections;
    for (const Column& c : root->schema().columns()) {
      if (c.name != pid) projections.push_back({c.name, Col(c.name)});
    }
    root = Relation::Map(std::move(projections), std::nullopt, std::nullopt,
                         root);
  }
  result.relation = root;
  result.graph = std::move(g);
  result.allocation = std::move(allocation);
  result.target = target;
  return result;
}

RewriteResult Rewriter::Rewrite(const RelationPtr& root, Property target,
                                const Budget& budget) const {
  ValidateBudget(budget);
  RuleSets graph = SetRules(root);
  Eliminate(graph, target);
  Allocation allocation = SelectAllocation(graph, target, budget);
  return Apply(std::move(graph), std::move(allocation), target);
}

}  // namespace qrw
