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

#include "qrw/sql/renderer.h"

#include <cstdio>
#include <functional>
#include <map>
#include <set>

#include "qrw/error.h"
#include "qrw/sql/ast.h"

namespace qrw {
namespace {

using sql::QuoteIdentifier;
using ColumnText = std::function<std::string(const std::string&)>;

std::string Literal(const Value& v) {
  std::string text = sql::LiteralText(v);
  if (!text.empty() && text[0] == '-') return "(" + text + ")";
  return text;
}

std::string Binary(const std::string& op, const std::vector<std::string>& a) {
  return "(" + a[0] + " " + op + " " + a[1] + ")";
}

std::string List(const std::vector<std::string>& items, std::size_t from = 0) {
  std::string out;
  for (std::size_t i = from; i < items.size(); ++i) {
    if (i > from) out += ", ";
    out += items[i];
  }
  return out;
}

std::string ExprText(const Expr& e, const Dialect& d, const ColumnText& column) {
  switch (e.kind()) {
    case Expr::Kind::kColumn:
      return column(e.column_name());
    case Expr::Kind::kLiteral:
      return Literal(e.literal());
    case Expr::Kind::kAggregate: {
      if (e.aggregate() == AggregateKind::kCountAll) return "COUNT(*)";
      std::string arg = ExprText(e.args()[0], d, column);
      switch (e.aggregate()) {
        case AggregateKind::kCount: return "COUNT(" + arg + ")";
        case AggregateKind::kSum: return "SUM(" + arg + ")";
        case AggregateKind::kAvg: return "AVG(" + arg + ")";
        case AggregateKind::kVariance: return d.variance + "(" + arg + ")";
        case AggregateKind::kStddev: return d.stddev + "(" + arg + ")";
        case AggregateKind::kMin: return "MIN(" + arg + ")";
        case AggregateKind::kMax: return "MAX(" + arg + ")";
        case AggregateKind::kFirst: return arg;
        case AggregateKind::kCountAll: break;
      }
      return arg;
    }
    case Expr::Kind::kFunction:
      break;
  }
  std::vector<std::string> a;
  for (const Expr& arg : e.args()) a.push_back(ExprText(arg, d, column));
  auto call = [&](const std::string& name) { return name + "(" + List(a) + ")"; };
  switch (e.function()) {
    case Function::kAdd: return Binary("+", a);
    case Function::kSub: return Binary("-", a);
    case Function::kMul: return Binary("*", a);
    case Function::kDiv: return Binary("/", a);
    case Function::kNeg: return "(-" + a[0] + ")";
    case Function::kEq: return Binary("=", a);
    case Function::kNe: return Binary("<>", a);
    case Function::kLt: return Binary("<", a);
    case Function::kLe: return Binary("<=", a);
    case Function::kGt: return Binary(">", a);
    case Function::kGe: return Binary(">=", a);
    case Function::kAnd: return Binary("AND", a);
    case Function::kOr: return Binary("OR", a);
    case Function::kNot: return "(NOT " + a[0] + ")";
    case Function::kAbs: return call("ABS");
    case Function::kExp: return call("EXP");
    case Function::kLn: return call(d.ln);
    case Function::kLog10: return call(d.log10);
    case Function::kSqrt: return call(d.sqrt);
    case Function::kSin: return call("SIN");
    case Function::kCos: return call("COS");
    case Function::kLeast: return call(d.least);
    case Function::kGreatest: return call(d.greatest);
    case Function::kCoalesce: return call("COALESCE");
    case Function::kCase: {
      std::string out = "CASE";
      for (std::size_t i = 0; i + 1 < a.size(); i += 2) {
        out += " WHEN " + a[i] + " THEN " + a[i + 1];
      }
      return out + " ELSE " + a.back() + " END";
    }
    case Function::kInList:
      return "(" + a[0] + " IN (" + List(a, 1) + "))";
    case Function::kIsNull: return "(" + a[0] + " IS NULL)";
    case Function::kIsNotNull: return "(" + a[0] + " IS NOT NULL)";
    case Function::kCastText: return "CAST(" + a[0] + " AS " + d.text_type + ")";
    case Function::kCastFloat:
      return "CAST(" + a[0] + " AS " + d.float_type + ")";
    case Function::kCastInteger:
      return "CAST(" + a[0] + " AS " + d.integer_type + ")";
    case Function::kRandom: return d.uniform;
  }
  throw InvalidArgumentError("cannot render function " +
                             std::string(FunctionName(e.function())));
}

std::string Unqualified(const std::string& name) { return QuoteIdentifier(name); }

class Renderer {
 public:
  explicit Renderer(const Dialect& dialect) : d_(dialect) {}

  std::string Run(const RelationPtr& root, const std::vector<OrderBy>& order) {
    Need(root);
    std::vector<std::string> ctes;
    for (const RelationPtr& node : TopoOrder(root)) {
      if (node->kind() == Relation::Kind::kTable || !needed_.count(node.get())) {
        continue;
      }
      if (emitted_.count(Name(node))) continue;
      emitted_.insert(Name(node));
      std::string head = QuoteIdentifier(Name(node));
      if (node->kind() == Relation::Kind::kValues) {
        std::vector<std::string> names;
        for (const std::string& n : node->values().names) {
          names.push_back(QuoteIdentifier(n));
        }
        head += " (" + List(names) + ")";
      }
      bool materialize = node->kind() == Relation::Kind::kMap &&
                         MapDrawsRandom(node->map());
      head += materialize ? " AS MATERIALIZED (" : " AS (";
      ctes.push_back(head + Body(node) + ")");
    }
    std::string out;
    if (!ctes.empty()) {
      out = "WITH ";
      for (std::size_t i = 0; i < ctes.size(); ++i) {
        if (i > 0) out += ",\n";
        out += ctes[i];
      }
      out += "\n";
    }
    out += "SELECT * FROM " + Ref(root);
    if (!order.empty()) {
      out += " ORDER BY ";
      for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0) out += ", ";
        out += QuoteIdentifier(order[i].column);
        if (order[i].descending) out += " DESC";
      }
    }
    return out;
  }

 private:
  static bool MapDrawsRandom(const MapNode& m) {
    for (const NamedExpr& p : m.projections) {
      if (p.expr.ContainsRandom()) return true;
    }
    return m.filter && m.filter->ContainsRandom();
  }

  // Marks the nodes that are referenced by name; nested join trees are
  // inlined into their consumer.
  void Need(const RelationPtr& node) {
    if (!needed_.insert(node.get()).second) return;
    if (node->kind() == Relation::Kind::kJoin) {
      NeedJoinSides(node);
      return;
    }
    for (const RelationPtr& in : node->inputs()) Need(in);
  }

  void NeedJoinSides(const RelationPtr& node) {
    const JoinNode& j = node->join();
    auto side = [&](const RelationPtr& rel, const std::string& alias) {
      if (alias.empty() && rel->kind() == Relation::Kind::kJoin) {
        NeedJoinSides(rel);
      } else {
        Need(rel);
      }
    };
    side(j.left, j.left_alias);
    side(j.right, j.right_alias);
  }

  const std::string& Name(const RelationPtr& node) {
    auto it = names_.find(node.get());
    if (it != names_.end()) return it->second;
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%012llx",
                  static_cast<unsigned long long>(node->Hash() & 0xffffffffffffULL));
    std::string base = std::string("_rel_") + hex;
    std::vector<RelationPtr>& same = by_hash_[base];
    std::size_t index = same.size();
    for (std::size_t i = 0; i < same.size(); ++i) {
      if (StructurallyEqual(same[i], node)) {
        index = i;
        break;
      }
    }
    if (index == same.size()) same.push_back(node);
    std::string name = index == 0 ? base : base + "_" + std::to_string(index);
    return names_[node.get()] = name;
  }

  std::string Ref(const RelationPtr& node) {
    if (node->kind() == Relation::Kind::kTable) {
      return sql::QuoteQualified(node->table().name);
    }
    return QuoteIdentifier(Name(node));
  }

  std::string Expression(const Expr& e) { return ExprText(e, d_, Unqualified); }

  std::string Body(const RelationPtr& node) {
    switch (node->kind()) {
      case Relation::Kind::kMap: {
        const MapNode& m = node->map();
        std::vector<std::string> items;
        for (const NamedExpr& p : m.projections) {
          items.push_back(Expression(p.expr) + " AS " + QuoteIdentifier(p.name));
        }
        std::string out = "SELECT " + List(items) + " FROM " + Ref(m.input);
        if (m.filter) out += " WHERE " + Expression(*m.filter);
        if (m.limit) out += " LIMIT " + std::to_string(*m.limit);
        return out;
      }
      case Relation::Kind::kReduce: {
        const ReduceNode& r = node->reduce();
        std::vector<std::string> items;
        for (const NamedExpr& a : r.aggregates) {
          items.push_back(Expression(a.expr) + " AS " + QuoteIdentifier(a.name));
        }
        std::string out = "SELECT " + List(items) + " FROM " + Ref(r.input);
        if (!r.group_by.empty()) {
          std::vector<std::string> keys;
          for (const Expr& k : r.group_by) keys.push_back(Expression(k));
          out += " GROUP BY " + List(keys);
        }
        return out;
      }
      case Relation::Kind::kJoin:
        return JoinBody(node);
      case Relation::Kind::kValues: {
        std::vector<std::string> rows;
        for (const auto& row : node->values().rows) {
          std::vector<std::string> cells;
          for (const Value& v : row) cells.push_back(Literal(v));
          rows.push_back("(" + List(cells) + ")");
        }
        return "VALUES " + List(rows);
      }
      case Relation::Kind::kSetOp: {
        const SetOpNode& s = node->set_op();
        return "SELECT * FROM " + Ref(s.left) + " " +
               std::string(SetOpKindName(s.op)) + " SELECT * FROM " +
               Ref(s.right);
      }
      case Relation::Kind::kTable:
        break;
    }
    return "SELECT * FROM " + Ref(node);
  }

  // FROM-clause text of a join tree; `columns` receives the qualified text
  // of every output column.
  std::string JoinFrom(const RelationPtr& node,
                       std::map<std::string, std::string>& columns) {
    const JoinNode& j = node->join();
    std::string left = Side(j.left, j.left_alias, columns);
    std::string right = Side(j.right, j.right_alias, columns);
    if (j.right->kind() == Relation::Kind::kJoin && j.right_alias.empty()) {
      right = "(" + right + ")";
    }
    std::string out = left + " " + std::string(JoinKindName(j.kind)) +
                      " JOIN " + right;
    if (j.kind != JoinKind::kCross) out += " ON " + Qualified(j.on, columns);
    return out;
  }

  std::string Side(const RelationPtr& rel, const std::string& alias,
                   std::map<std::string, std::string>& columns) {
    if (alias.empty() && rel->kind() == Relation::Kind::kJoin) {
      return JoinFrom(rel, columns);
    }
    for (const Column& c : rel->schema().columns()) {
      columns[JoinColumnName(alias, c.name)] =
          QuoteIdentifier(alias) + "." + QuoteIdentifier(c.name);
    }
    return Ref(rel) + " AS " + QuoteIdentifier(alias);
  }

  std::string Qualified(const Expr& e,
                        const std::map<std::string, std::string>& columns) {
    return ExprText(e, d_, [&](const std::string& name) {
      auto it = columns.find(name);
      return it != columns.end() ? it->second : QuoteIdentifier(name);
    });
  }

  std::string JoinBody(const RelationPtr& node) {
    const JoinNode& j = node->join();
    if (d_.right_full_joins ||
        (j.kind != JoinKind::kRight && j.kind != JoinKind::kFull)) {
      std::map<std::string, std::string> columns;
      std::string from = JoinFrom(node, columns);
      std::vector<std::string> items;
      for (const Column& c : node->schema().columns()) {
        items.push_back(columns.at(c.name) + " AS " + QuoteIdentifier(c.name));
      }
      return "SELECT " + List(items) + " FROM " + from;
    }
    // Each side becomes a subquery exposing the join's output names.
    auto side_query = [&](const RelationPtr& rel, const std::string& alias,
                          std::vector<std::string>& names) {
      std::map<std::string, std::string> columns;
      std::string from = Side(rel, alias, columns);
      std::vector<std::string> items;
      for (const Column& c : rel->schema().columns()) {
        std::string out = JoinColumnName(alias, c.name);
        names.push_back(out);
        items.push_back(columns.at(out) + " AS " + QuoteIdentifier(out));
      }
      return "(SELECT " + List(items) + " FROM " + from + ")";
    };
    std::vector<std::string> left_names;
    std::vector<std::string> right_names;
    std::string left = side_query(j.left, j.left_alias, left_names);
    std::string right = side_query(j.right, j.right_alias, right_names);
    std::map<std::string, std::string> sides;
    std::vector<std::string> left_items;
    std::vector<std::string> right_items;
    std::vector<std::string> null_left;
    for (const std::string& n : left_names) {
      sides[n] = "\"_l\"." + QuoteIdentifier(n);
      left_items.push_back(sides[n]);
      null_left.push_back("NULL AS " + QuoteIdentifier(n));
    }
    for (const std::string& n : right_names) {
      sides[n] = "\"_r\"." + QuoteIdentifier(n);
      right_items.push_back(sides[n]);
    }
    std::string on = Qualified(j.on, sides);
    std::string all = List(left_items) + ", " + List(right_items);
    if (j.kind == JoinKind::kRight) {
      return "SELECT " + all + " FROM " + right + " AS \"_r\" LEFT JOIN " +
             left + " AS \"_l\" ON " + on;
    }
    return "SELECT " + all + " FROM " + left + " AS \"_l\" LEFT JOIN " + right +
           " AS \"_r\" ON " + on + " UNION ALL SELECT " + List(null_left) +
           ", " + List(right_items) + " FROM " + right +
           " AS \"_r\" WHERE NOT EXISTS (SELECT 1 FROM " + left +
           " AS \"_l\" WHERE " + on + ")";
  }

  const Dialect& d_;
  std::set<const Relation*> needed_;
  std::set<std::string> emitted_;
  std::map<const Relation*, std::string> names_;
  std::map<std::string, std::vector<RelationPtr>> by_hash_;
};

}  // namespace

const Dialect& Dialect::Generic() {
  static const Dialect* d = new Dialect{
      "generic", "RANDOM()", "LN",  "LOG10", "SQRT", "LEAST", "GREATEST",
      "VARIANCE", "STDDEV", "DOUBLE PRECISION", "BIGINT", "TEXT", true};
  return *d;
}

const Dialect& Dialect::Postgres() {
  static const Dialect* d = new Dialect{
      "postgres", "RANDOM()", "LN",  "LOG", "SQRT", "LEAST", "GREATEST",
      "VARIANCE", "STDDEV", "DOUBLE PRECISION", "BIGINT", "TEXT", true};
  return *d;
}

const Dialect& Dialect::Embedded() {
  static const Dialect* d = new Dialect{
      "embedded", "qrw_uniform()", "LN", "LOG10", "SQRT", "LEAST",
      "GREATEST", "VARIANCE", "STDDEV", "REAL", "INTEGER", "TEXT", false};
  return *d;
}

const Dialect& Dialect::ByName(std::string_view name) {
  if (name == "generic") return Generic();
  if (name == "postgres" || name == "postgres-like") return Postgres();
  if (name == "embedded" || name == "embedded-test") return Embedded();
  throw InvalidArgumentError("unknown dialect " + std::string(name) +
                             " (expected generic, postgres or embedded)");
}

std::string RenderExpr(const Expr& expr, const Dialect& dialect) {
  return ExprText(expr, dialect, Unqualified);
}

std::string Render(const RelationPtr& root, const Dialect& dialect,
                   const std::vector<OrderBy>& order_by) {
  for (const std::string* primitive :
       {&dialect.uniform, &dialect.ln, &dialect.log10, &dialect.sqrt,
        &dialect.least, &dialect.greatest, &dialect.float_type,
        &dialect.integer_type, &dialect.text_type}) {
    if (primitive->empty()) {
      throw InvalidArgumentError("dialect " + dialect.name +
                                 " lacks a required primitive");
    }
  }
  return Renderer(dialect).Run(root, order_by);
}

}  // namespace qrw
