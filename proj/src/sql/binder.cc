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

#include "qrw/sql/binder.h"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "qrw/error.h"
#include "qrw/sql/parser.h"

namespace qrw {
namespace {

using sql::AstExpr;
using sql::AstExprPtr;
using sql::Query;
using sql::QueryBody;
using sql::Select;
using sql::TableRef;

struct ScopeColumn {
  std::string qualifier;
  std::string full_name;  // dotted table name, when it differs
  std::string name;
  std::string output;
};

struct Scope {
  std::vector<ScopeColumn> columns;
  const Scope* outer = nullptr;

  std::vector<const ScopeColumn*> Matches(const std::string& qualifier,
                                          const std::string& name) const {
    std::vector<const ScopeColumn*> out;
    for (const ScopeColumn& c : columns) {
      if (c.name != name) continue;
      if (!qualifier.empty() && c.qualifier != qualifier &&
          c.full_name != qualifier) {
        continue;
      }
      out.push_back(&c);
    }
    return out;
  }
};

struct FromResult {
  RelationPtr relation;
  Scope scope;
  std::string alias;  // empty for join trees
};

using CteEnv = std::map<std::string, RelationPtr>;

std::optional<Function> ScalarFunction(const std::string& name) {
  static const std::map<std::string, Function> kFunctions = {
      {"abs", Function::kAbs},         {"exp", Function::kExp},
      {"ln", Function::kLn},           {"log", Function::kLog10},
      {"log10", Function::kLog10},     {"sqrt", Function::kSqrt},
      {"sin", Function::kSin},         {"cos", Function::kCos},
      {"least", Function::kLeast},     {"greatest", Function::kGreatest},
      {"coalesce", Function::kCoalesce}, {"random", Function::kRandom},
      {"qrw_uniform", Function::kRandom}};
  auto it = kFunctions.find(name);
  if (it == kFunctions.end()) return std::nullopt;
  return it->second;
}

std::optional<AggregateKind> AggregateFunction(const std::string& name) {
  static const std::map<std::string, AggregateKind> kAggregates = {
      {"count", AggregateKind::kCount},     {"sum", AggregateKind::kSum},
      {"avg", AggregateKind::kAvg},         {"min", AggregateKind::kMin},
      {"max", AggregateKind::kMax},         {"variance", AggregateKind::kVariance},
      {"var_samp", AggregateKind::kVariance}, {"stddev", AggregateKind::kStddev},
      {"stddev_samp", AggregateKind::kStddev}};
  auto it = kAggregates.find(name);
  if (it == kAggregates.end()) return std::nullopt;
  return it->second;
}

bool ContainsAggregateCall(const AstExpr& e) {
  if (e.kind == AstExpr::Kind::kSubquery) return false;
  if (e.kind == AstExpr::Kind::kFunction && AggregateFunction(e.name)) {
    return true;
  }
  for (const AstExprPtr& a : e.args) {
    if (ContainsAggregateCall(*a)) return true;
  }
  return false;
}

void CollectSubqueries(const AstExpr& e, std::vector<const AstExpr*>& out) {
  if (e.kind == AstExpr::Kind::kSubquery) {
    out.push_back(&e);
    return;
  }
  for (const AstExprPtr& a : e.args) CollectSubqueries(*a, out);
}

std::string LastComponent(const std::string& dotted) {
  std::size_t dot = dotted.rfind('.');
  return dot == std::string::npos ? dotted : dotted.substr(dot + 1);
}

std::string Unique(const std::string& base, std::set<std::string>& used) {
  std::string name = base;
  for (int i = 1; used.count(name); ++i) name = base + "_" + std::to_string(i);
  used.insert(name);
  return name;
}

bool IsIdentityProjection(const std::vector<NamedExpr>& projections,
                          const Schema& input) {
  if (projections.size() != input.size()) return false;
  for (std::size_t i = 0; i < projections.size(); ++i) {
    const NamedExpr& p = projections[i];
    if (!p.expr.is_column() || p.expr.column_name() != input[i].name ||
        p.name != input[i].name) {
      return false;
    }
  }
  return true;
}

RelationPtr MakeMap(std::vector<NamedExpr> projections,
                    std::optional<Expr> filter,
                    std::optional<std::uint64_t> limit, RelationPtr input) {
  if (!filter && !limit && IsIdentityProjection(projections, input->schema())) {
    return input;
  }
  return Relation::Map(std::move(projections), std::move(filter), limit,
                       std::move(input));
}

std::vector<NamedExpr> IdentityProjections(const Schema& schema) {
  std::vector<NamedExpr> out;
  for (const Column& c : schema.columns()) {
    out.push_back({c.name, Expr::Column(c.name)});
  }
  return out;
}

class Binder {
 public:
  explicit Binder(const Catalog& catalog) : catalog_(catalog) {}

  BoundQuery BindTop(const Query& q) {
    CteEnv env;
    BoundQuery out;
    out.relation = BindQuery(q, env, nullptr);
    const Schema& schema = out.relation->schema();
    const std::vector<NamedExpr>* items = last_select_items_;
    for (const sql::OrderItem& item : q.order_by) {
      const AstExpr& e = *item.expr;
      std::string column;
      if (e.kind == AstExpr::Kind::kColumn && e.qualifier.empty() &&
          schema.Find(e.name)) {
        column = e.name;
      } else if (e.kind == AstExpr::Kind::kLiteral && e.literal.is_int() &&
                 e.literal.as_int() >= 1 &&
                 static_cast<std::size_t>(e.literal.as_int()) <= schema.size()) {
        column = schema[e.literal.as_int() - 1].name;
      } else if (e.kind == AstExpr::Kind::kColumn && items) {
        // ORDER BY t.a where the select list projects t.a.
        for (const NamedExpr& p : *items) {
          if (p.expr.is_column() && p.name == e.name) column = p.name;
        }
      }
      if (column.empty()) {
        throw BindError("ORDER BY must name an output column: " +
                        sql::Print(e));
      }
      out.order_by.push_back({column, item.descending});
    }
    return out;
  }

 private:
  // ----------------------------------------------------------------- query
  RelationPtr BindQuery(const Query& q, CteEnv env, const Scope* outer) {
    for (const sql::Cte& cte : q.ctes) {
      RelationPtr rel = BindQuery(*cte.query, env, outer);
      if (!cte.columns.empty()) rel = RenameColumns(rel, cte.columns, cte.name);
      env[cte.name] = rel;
    }
    return BindBody(*q.body, env, outer, q.limit);
  }

  RelationPtr RenameColumns(RelationPtr rel,
                            const std::vector<std::string>& names,
                            const std::string& cte) {
    const Schema& schema = rel->schema();
    if (names.size() != schema.size()) {
      throw BindError("CTE " + cte + " lists " + std::to_string(names.size()) +
                      " columns but its query returns " +
                      std::to_string(schema.size()));
    }
    if (rel->kind() == Relation::Kind::kValues && fresh_values_ == rel.get()) {
      return Relation::Values(names, rel->values().rows);
    }
    std::vector<NamedExpr> projections;
    for (std::size_t i = 0; i < names.size(); ++i) {
      projections.push_back({names[i], Expr::Column(schema[i].name)});
    }
    return MakeMap(std::move(projections), std::nullopt, std::nullopt, rel);
  }

  RelationPtr BindBody(const QueryBody& body, const CteEnv& env,
                       const Scope* outer,
                       std::optional<std::uint64_t> limit) {
    RelationPtr rel;
    switch (body.kind) {
      case QueryBody::Kind::kSelect:
        return BindSelect(body.select, env, outer, limit);
      case QueryBody::Kind::kNested:
        rel = BindQuery(*body.nested, env, outer);
        break;
      case QueryBody::Kind::kSetOp:
        rel = Relation::SetOp(body.op,
                              BindBody(*body.left, env, outer, std::nullopt),
                              BindBody(*body.right, env, outer, std::nullopt));
        break;
      case QueryBody::Kind::kValues:
        rel = BindValues(body);
        break;
    }
    if (limit) {
      rel = Relation::Map(IdentityProjections(rel->schema()), std::nullopt,
                          limit, rel);
    }
    return rel;
  }

  RelationPtr BindValues(const QueryBody& body) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < body.rows.front().size(); ++i) {
      names.push_back("column" + std::to_string(i + 1));
    }
    std::vector<std::vector<Value>> rows;
    Scope empty;
    for (const auto& row : body.rows) {
      std::vector<Value> values;
      for (const AstExprPtr& e : row) {
        Expr bound = BindExpr(*e, empty, false);
        if (!bound.is_literal()) {
          throw BindError("VALUES rows must contain literals: " +
                          sql::Print(*e));
        }
        values.push_back(bound.literal());
      }
      rows.push_back(std::move(values));
    }
    RelationPtr rel = Relation::Values(std::move(names), std::move(rows));
    fresh_values_ = rel.get();
    return rel;
  }

  // ------------------------------------------------------------------ FROM
  FromResult BindFrom(const TableRef& ref, const CteEnv& env,
                      const Scope* outer) {
    FromResult out;
    switch (ref.kind) {
      case TableRef::Kind::kNamed: {
        auto it = env.find(ref.name);
        out.relation = it != env.end() ? it->second
                                       : catalog_.TableRelation(ref.name);
        out.alias = ref.alias.empty() ? LastComponent(ref.name) : ref.alias;
        for (const Column& c : out.relation->schema().columns()) {
          out.scope.columns.push_back(
              {out.alias, ref.alias.empty() ? ref.name : "", c.name, c.name});
        }
        return out;
      }
      case TableRef::Kind::kSubquery: {
        out.relation = BindQuery(*ref.subquery, env, outer);
        out.alias = ref.alias.empty()
                        ? "_subquery_" + std::to_string(++subquery_count_)
                        : ref.alias;
        for (const Column& c : out.relation->schema().columns()) {
          out.scope.columns.push_back({out.alias, "", c.name, c.name});
        }
        return out;
      }
      case TableRef::Kind::kJoin:
        break;
    }
    FromResult left = BindFrom(*ref.left, env, outer);
    FromResult right = BindFrom(*ref.right, env, outer);
    for (ScopeColumn& c : left.scope.columns) {
      c.output = JoinColumnName(left.alias, c.output);
      out.scope.columns.push_back(c);
    }
    for (ScopeColumn& c : right.scope.columns) {
      c.output = JoinColumnName(right.alias, c.output);
      out.scope.columns.push_back(c);
    }
    if (!left.alias.empty() && left.alias == right.alias) {
      throw BindError("table alias " + left.alias +
                      " is used twice; give each side its own alias");
    }
    out.scope.outer = outer;
    Expr on = ref.on ? BindExpr(*ref.on, out.scope, false)
                     : Expr::Literal(Value(true));
    out.relation = Relation::Join(ref.join_kind, on, left.alias, right.alias,
                                  left.relation, right.relation);
    return out;
  }

  // ---------------------------------------------------------------- SELECT
  RelationPtr BindSelect(const Select& s, const CteEnv& env, const Scope* outer,
                         std::optional<std::uint64_t> limit) {
    FromResult from;
    if (s.from) {
      from = BindFrom(*s.from, env, outer);
    } else {
      from.relation = Relation::Values({"_unit"}, {{Value(0)}});
      from.alias = "_from";
      from.scope.columns.push_back({"", "", "_unit", "_unit"});
    }
    from.scope.outer = outer;

    // Uncorrelated scalar subqueries become columns of a LEFT JOIN ON TRUE.
    std::vector<const AstExpr*> subqueries;
    for (const sql::SelectItem& item : s.items) {
      if (item.expr) CollectSubqueries(*item.expr, subqueries);
    }
    if (s.where) CollectSubqueries(*s.where, subqueries);
    {
      std::vector<const AstExpr*> elsewhere;
      if (s.having) CollectSubqueries(*s.having, elsewhere);
      for (const AstExprPtr& g : s.group_by) CollectSubqueries(*g, elsewhere);
      if (!elsewhere.empty()) {
        throw BindError("scalar subqueries are only supported in SELECT and "
                        "WHERE");
      }
    }
    for (const AstExpr* sub : subqueries) {
      RelationPtr rel = BindQuery(*sub->subquery, env, &from.scope);
      if (rel->schema().size() != 1) {
        throw BindError("a scalar subquery must return one column");
      }
      std::string alias = "_sq" + std::to_string(++scalar_count_);
      Scope scope;
      scope.outer = outer;
      for (ScopeColumn c : from.scope.columns) {
        c.output = JoinColumnName(from.alias, c.output);
        scope.columns.push_back(c);
      }
      const std::string column = rel->schema()[0].name;
      const std::string output = JoinColumnName(alias, column);
      scope.columns.push_back({alias, "", column, output});
      from.relation = Relation::Join(JoinKind::kLeft, Expr::Literal(Value(true)),
                                     from.alias, alias, from.relation, rel);
      from.alias = "";
      from.scope = std::move(scope);
      subquery_columns_[sub] = output;
    }

    const bool aggregate =
        !s.group_by.empty() || s.having ||
        std::any_of(s.items.begin(), s.items.end(),
                    [](const sql::SelectItem& i) {
                      return i.expr && ContainsAggregateCall(*i.expr);
                    });

    std::optional<std::uint64_t> inner_limit = s.distinct ? std::nullopt : limit;
    RelationPtr rel = aggregate ? BindAggregate(s, from, inner_limit)
                                : BindProjection(s, from, inner_limit);
    if (s.distinct) {
      std::vector<NamedExpr> firsts;
      std::vector<Expr> keys;
      for (const Column& c : rel->schema().columns()) {
        Expr col = Expr::Column(c.name);
        firsts.push_back({c.name, Expr::Aggregate(AggregateKind::kFirst, col)});
        keys.push_back(col);
      }
      rel = Relation::Reduce(std::move(firsts), std::move(keys), rel);
      if (limit) {
        rel = Relation::Map(IdentityProjections(rel->schema()), std::nullopt,
                            limit, rel);
      }
    }
    return rel;
  }

  // Select items with stars expanded; aggregate calls allowed when
  // `aggregates` is set.
  std::vector<NamedExpr> BindItems(const Select& s, const Scope& scope,
                                   bool aggregates) {
    std::vector<NamedExpr> items;
    std::set<std::string> used;
    for (std::size_t i = 0; i < s.items.size(); ++i) {
      const sql::SelectItem& item = s.items[i];
      if (!item.expr) {
        bool any = false;
        for (const ScopeColumn& c : scope.columns) {
          if (!item.star_qualifier.empty() &&
              c.qualifier != item.star_qualifier &&
              c.full_name != item.star_qualifier) {
            continue;
          }
          any = true;
          items.push_back({Unique(c.output, used), Expr::Column(c.output)});
        }
        if (!any) {
          throw BindError("no columns match " +
                          (item.star_qualifier.empty()
                               ? std::string("*")
                               : item.star_qualifier + ".*"));
        }
        continue;
      }
      Expr bound = BindExpr(*item.expr, scope, aggregates);
      std::string name = item.alias;
      if (name.empty()) {
        const AstExpr& e = *item.expr;
        if (e.kind == AstExpr::Kind::kColumn) {
          name = e.name;
        } else if (e.kind == AstExpr::Kind::kFunction &&
                   AggregateFunction(e.name)) {
          name = e.name;
        } else {
          name = "_col_" + std::to_string(i);
        }
      }
      items.push_back({Unique(name, used), bound});
    }
    last_select_items_ = nullptr;
    return items;
  }

  RelationPtr BindProjection(const Select& s, const FromResult& from,
                             std::optional<std::uint64_t> limit) {
    std::vector<NamedExpr> items = BindItems(s, from.scope, false);
    std::optional<Expr> filter;
    if (s.where) filter = BindExpr(*s.where, from.scope, false);
    top_items_ = items;
    last_select_items_ = &top_items_;
    return MakeMap(std::move(items), std::move(filter), limit, from.relation);
  }

  RelationPtr BindAggregate(const Select& s, const FromResult& from,
                            std::optional<std::uint64_t> limit) {
    const Scope& scope = from.scope;
    std::vector<NamedExpr> items = BindItems(s, scope, true);
    std::optional<Expr> having;
    if (s.having) having = BindExpr(*s.having, scope, true);

    std::vector<Expr> keys;
    for (const AstExprPtr& g : s.group_by) {
      Expr key = BindGroupKey(*g, scope, s, items);
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        keys.push_back(key);
      }
    }

    std::vector<Expr> aggregates;
    auto collect = [&](const Expr& root) {
      root.Transform([&](const Expr& e) -> std::optional<Expr> {
        if (e.is_aggregate() &&
            std::find(aggregates.begin(), aggregates.end(), e) ==
                aggregates.end()) {
          aggregates.push_back(e);
        }
        return std::nullopt;
      });
    };
    for (const NamedExpr& item : items) collect(item.expr);
    if (having) collect(*having);
    if (keys.empty() && aggregates.empty()) {
      throw BindError("aggregate query without aggregates or GROUP BY keys");
    }

    // Names of key and argument expressions in the Reduce input.
    std::map<std::size_t, std::string> key_input;
    std::map<std::size_t, std::string> arg_input;
    RelationPtr input = from.relation;
    bool needs_pre = s.where != nullptr;
    for (const Expr& k : keys) needs_pre |= !k.is_column();
    for (const Expr& a : aggregates) {
      if (!a.args().empty()) needs_pre |= !a.args()[0].is_column();
    }
    if (needs_pre) {
      std::vector<NamedExpr> projections;
      std::set<std::string> used;
      auto add = [&](const Expr& e, const std::string& preferred) {
        for (const NamedExpr& p : projections) {
          if (p.expr == e) return p.name;
        }
        std::string name =
            Unique(e.is_column() ? e.column_name() : preferred, used);
        projections.push_back({name, e});
        return name;
      };
      for (std::size_t i = 0; i < keys.size(); ++i) {
        key_input[i] = add(keys[i], "_key_" + std::to_string(i));
      }
      for (std::size_t j = 0; j < aggregates.size(); ++j) {
        if (!aggregates[j].args().empty()) {
          arg_input[j] = add(aggregates[j].args()[0], "_arg_" + std::to_string(j));
        }
      }
      if (projections.empty()) {
        const Column& first = from.relation->schema()[0];
        add(Expr::Column(first.name), first.name);
      }
      std::optional<Expr> filter;
      if (s.where) filter = BindExpr(*s.where, scope, false);
      input = Relation::Map(std::move(projections), std::move(filter),
                            std::nullopt, from.relation);
    } else {
      for (std::size_t i = 0; i < keys.size(); ++i) {
        key_input[i] = keys[i].column_name();
      }
      for (std::size_t j = 0; j < aggregates.size(); ++j) {
        if (!aggregates[j].args().empty()) {
          arg_input[j] = aggregates[j].args()[0].column_name();
        }
      }
    }

    auto key_index = [&](const Expr& e) -> std::optional<std::size_t> {
      for (std::size_t i = 0; i < keys.size(); ++i) {
        if (keys[i] == e) return i;
      }
      return std::nullopt;
    };
    auto agg_index = [&](const Expr& e) {
      return static_cast<std::size_t>(
          std::find(aggregates.begin(), aggregates.end(), e) -
          aggregates.begin());
    };
    auto reduce_aggregate = [&](std::size_t j) {
      const Expr& a = aggregates[j];
      if (a.args().empty()) return Expr::Aggregate(a.aggregate(), std::nullopt);
      return Expr::Aggregate(a.aggregate(), Expr::Column(arg_input[j]));
    };
    std::vector<Expr> group_by;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      group_by.push_back(Expr::Column(key_input[i]));
    }

    bool simple = !having && !limit;
    for (const NamedExpr& item : items) {
      if (!key_index(item.expr) && !item.expr.is_aggregate()) simple = false;
    }
    top_items_ = items;
    last_select_items_ = &top_items_;
    if (simple) {
      std::vector<NamedExpr> outputs;
      for (const NamedExpr& item : items) {
        if (auto k = key_index(item.expr)) {
          outputs.push_back(
              {item.name, Expr::Aggregate(AggregateKind::kFirst,
                                          Expr::Column(key_input[*k]))});
        } else {
          outputs.push_back({item.name, reduce_aggregate(agg_index(item.expr))});
        }
      }
      return Relation::Reduce(std::move(outputs), std::move(group_by), input);
    }

    std::vector<NamedExpr> outputs;
    std::vector<std::string> key_output(keys.size());
    std::vector<std::string> agg_output(aggregates.size());
    std::set<std::string> used;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      key_output[i] = Unique(key_input[i], used);
      outputs.push_back({key_output[i],
                         Expr::Aggregate(AggregateKind::kFirst,
                                         Expr::Column(key_input[i]))});
    }
    for (std::size_t j = 0; j < aggregates.size(); ++j) {
      agg_output[j] = Unique("_agg_" + std::to_string(j), used);
      outputs.push_back({agg_output[j], reduce_aggregate(j)});
    }
    RelationPtr reduce =
        Relation::Reduce(std::move(outputs), std::move(group_by), input);

    std::function<Expr(const Expr&)> lift = [&](const Expr& e) -> Expr {
      if (auto k = key_index(e)) return Expr::Column(key_output[*k]);
      if (e.is_aggregate()) return Expr::Column(agg_output[agg_index(e)]);
      if (e.is_column()) {
        throw BindError("column " + e.column_name() +
                        " must appear in GROUP BY or in an aggregate");
      }
      if (e.is_literal()) return e;
      std::vector<Expr> args;
      for (const Expr& a : e.args()) args.push_back(lift(a));
      return Expr::Call(e.function(), std::move(args));
    };
    std::vector<NamedExpr> projections;
    for (const NamedExpr& item : items) {
      projections.push_back({item.name, lift(item.expr)});
    }
    std::optional<Expr> filter;
    if (having) filter = lift(*having);
    return MakeMap(std::move(projections), std::move(filter), limit, reduce);
  }

  Expr BindGroupKey(const AstExpr& g, const Scope& scope, const Select& s,
                    const std::vector<NamedExpr>& items) {
    if (g.kind == AstExpr::Kind::kLiteral && g.literal.is_int()) {
      std::int64_t k = g.literal.as_int();
      if (k < 1 || static_cast<std::size_t>(k) > s.items.size() ||
          !s.items[k - 1].expr) {
        throw BindError("GROUP BY position " + std::to_string(k) +
                        " is out of range");
      }
      return BindExpr(*s.items[k - 1].expr, scope, false);
    }
    if (g.kind == AstExpr::Kind::kColumn && g.qualifier.empty() &&
        scope.Matches("", g.name).empty()) {
      for (const NamedExpr& item : items) {
        if (item.name == g.name) {
          if (item.expr.ContainsAggregate()) {
            throw BindError("cannot GROUP BY an aggregate: " + g.name);
          }
          return item.expr;
        }
      }
    }
    if (ContainsAggregateCall(g)) {
      throw BindError("aggregate in GROUP BY: " + sql::Print(g));
    }
    return BindExpr(g, scope, false);
  }

  // ----------------------------------------------------------- expressions
  Expr BindExpr(const AstExpr& e, const Scope& scope, bool aggregates,
                bool inside_aggregate = false) {
    auto bind = [&](const AstExprPtr& a) {
      return BindExpr(*a, scope, aggregates, inside_aggregate);
    };
    auto call = [](Function f, std::vector<Expr> args) {
      return Expr::Call(f, std::move(args));
    };
    switch (e.kind) {
      case AstExpr::Kind::kColumn: {
        auto matches = scope.Matches(e.qualifier, e.name);
        if (matches.size() == 1) return Expr::Column(matches[0]->output);
        std::string shown =
            e.qualifier.empty() ? e.name : e.qualifier + "." + e.name;
        if (matches.size() > 1) {
          throw BindError("ambiguous column " + shown);
        }
        for (const Scope* o = scope.outer; o; o = o->outer) {
          if (!o->Matches(e.qualifier, e.name).empty()) {
            throw BindError("correlated subqueries are not supported (" +
                            shown + " refers to an outer query)");
          }
        }
        throw BindError("unknown column " + shown);
      }
      case AstExpr::Kind::kLiteral:
        return Expr::Literal(e.literal);
      case AstExpr::Kind::kUnary: {
        const AstExpr& operand = *e.args[0];
        if (e.op == "NOT") return call(Function::kNot, {bind(e.args[0])});
        if (e.op == "+") return bind(e.args[0]);
        if (operand.kind == AstExpr::Kind::kLiteral) {
          const Value& v = operand.literal;
          if (v.is_int() &&
              v.as_int() != std::numeric_limits<std::int64_t>::min()) {
            return Expr::Literal(Value(-v.as_int()));
          }
          if (v.is_double()) return Expr::Literal(Value(-v.as_double_exact()));
        }
        return call(Function::kNeg, {bind(e.args[0])});
      }
      case AstExpr::Kind::kBinary: {
        static const std::map<std::string, Function> kOps = {
            {"+", Function::kAdd}, {"-", Function::kSub}, {"*", Function::kMul},
            {"/", Function::kDiv}, {"=", Function::kEq},  {"<>", Function::kNe},
            {"<", Function::kLt},  {"<=", Function::kLe}, {">", Function::kGt},
            {">=", Function::kGe}, {"AND", Function::kAnd},
            {"OR", Function::kOr}};
        auto it = kOps.find(e.op);
        if (it == kOps.end()) throw BindError("unsupported operator " + e.op);
        return call(it->second, {bind(e.args[0]), bind(e.args[1])});
      }
      case AstExpr::Kind::kFunction:
        return BindCall(e, scope, aggregates, inside_aggregate);
      case AstExpr::Kind::kCase: {
        std::vector<Expr> args;
        std::size_t i = 0;
        std::optional<Expr> operand;
        if (e.has_operand) operand = bind(e.args[i++]);
        std::size_t end = e.args.size() - (e.has_else ? 1 : 0);
        for (; i < end; i += 2) {
          Expr cond = bind(e.args[i]);
          if (operand) cond = call(Function::kEq, {*operand, cond});
          args.push_back(cond);
          args.push_back(bind(e.args[i + 1]));
        }
        args.push_back(e.has_else ? bind(e.args.back())
                                  : Expr::Literal(Value::Null()));
        return call(Function::kCase, std::move(args));
      }
      case AstExpr::Kind::kInList: {
        std::vector<Expr> args;
        for (const AstExprPtr& a : e.args) args.push_back(bind(a));
        Expr in = call(Function::kInList, std::move(args));
        return e.negated ? call(Function::kNot, {in}) : in;
      }
      case AstExpr::Kind::kBetween: {
        Expr x = bind(e.args[0]);
        Expr range = call(Function::kAnd,
                          {call(Function::kGe, {x, bind(e.args[1])}),
                           call(Function::kLe, {x, bind(e.args[2])})});
        return e.negated ? call(Function::kNot, {range}) : range;
      }
      case AstExpr::Kind::kIsNull:
        return call(e.negated ? Function::kIsNotNull : Function::kIsNull,
                    {bind(e.args[0])});
      case AstExpr::Kind::kCast: {
        static const std::set<std::string> kText = {
            "TEXT", "VARCHAR", "CHAR", "CHARACTER VARYING", "STRING",
            "CHARACTER"};
        static const std::set<std::string> kFloat = {
            "FLOAT", "REAL", "DOUBLE", "DOUBLE PRECISION", "NUMERIC",
            "DECIMAL", "FLOAT8", "FLOAT4"};
        static const std::set<std::string> kInteger = {
            "INTEGER", "INT", "BIGINT", "SMALLINT", "INT8", "INT4", "INT2"};
        Expr x = bind(e.args[0]);
        if (kText.count(e.type_name)) return call(Function::kCastText, {x});
        if (kFloat.count(e.type_name)) return call(Function::kCastFloat, {x});
        if (kInteger.count(e.type_name)) {
          return call(Function::kCastInteger, {x});
        }
        throw BindError("unsupported CAST target " + e.type_name);
      }
      case AstExpr::Kind::kSubquery: {
        auto it = subquery_columns_.find(&e);
        if (it == subquery_columns_.end()) {
          throw BindError("scalar subqueries are only supported in SELECT and "
                          "WHERE");
        }
        return Expr::Column(it->second);
      }
    }
    throw BindError("unsupported expression");
  }

  Expr BindCall(const AstExpr& e, const Scope& scope, bool aggregates,
                bool inside_aggregate) {
    if (auto kind = AggregateFunction(e.name)) {
      if (!aggregates) {
        throw BindError("aggregate " + e.name + " is not allowed here");
      }
      if (inside_aggregate) {
        throw BindError("nested aggregate " + e.name + " is not allowed");
      }
      if (e.star) return Expr::Aggregate(AggregateKind::kCountAll, std::nullopt);
      if (e.args.size() != 1) {
        throw BindError(e.name + " takes exactly one argument");
      }
      Expr arg = BindExpr(*e.args[0], scope, aggregates, true);
      return Expr::Aggregate(*kind, arg);
    }
    auto function = ScalarFunction(e.name);
    if (!function) throw BindError("unsupported function " + e.name);
    std::vector<Expr> args;
    for (const AstExprPtr& a : e.args) {
      args.push_back(BindExpr(*a, scope, aggregates, inside_aggregate));
    }
    std::size_t n = args.size();
    switch (*function) {
      case Function::kRandom:
        if (n != 0) throw BindError(e.name + " takes no arguments");
        break;
      case Function::kLeast:
      case Function::kGreatest:
      case Function::kCoalesce:
        if (n == 0) throw BindError(e.name + " needs arguments");
        break;
      default:
        if (n != 1) throw BindError(e.name + " takes exactly one argument");
        break;
    }
    return Expr::Call(*function, std::move(args));
  }

  const Catalog& catalog_;
  int subquery_count_ = 0;
  int scalar_count_ = 0;
  const Relation* fresh_values_ = nullptr;
  std::map<const AstExpr*, std::string> subquery_columns_;
  std::vector<NamedExpr> top_items_;
  const std::vector<NamedExpr>* last_select_items_ = nullptr;
};

}  // namespace

BoundQuery Bind(const sql::Query& query, const Catalog& catalog) {
  return Binder(catalog).BindTop(query);
}

BoundQuery BindSql(std::string_view sql, const Catalog& catalog) {
  return Bind(sql::Parse(sql), catalog);
}

}  // namespace qrw
