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

#include "qrw/sql/ast.h"

#include <cctype>
#include <cmath>

#include "qrw/kinterval.h"

namespace qrw::sql {
namespace {

std::string QuoteImpl(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Dotted names quote each part.
std::string QuoteDotted(const std::string& name) {
  std::string out;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = name.find('.', start);
    out += QuoteImpl(name.substr(start, dot - start));
    if (dot == std::string::npos) break;
    out += ".";
    start = dot + 1;
  }
  return out;
}

std::string Upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string LiteralImpl(const Value& v) {
  if (v.is_null()) return "NULL";
  if (v.is_bool()) return v.as_bool() ? "TRUE" : "FALSE";
  if (v.is_int()) return std::to_string(v.as_int());
  if (v.is_double()) {
    double d = v.as_double_exact();
    if (std::isnan(d)) return "NULL";
    if (std::isinf(d)) return d > 0 ? "1e999" : "(-1e999)";
    std::string s = FormatDouble(d);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
  }
  std::string out = "'";
  for (char c : v.as_text()) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

std::string Join(const std::vector<AstExprPtr>& exprs, std::size_t from = 0) {
  std::string out;
  for (std::size_t i = from; i < exprs.size(); ++i) {
    if (i > from) out += ", ";
    out += Print(*exprs[i]);
  }
  return out;
}

std::string PrintTableRef(const TableRef& ref) {
  std::string out;
  switch (ref.kind) {
    case TableRef::Kind::kNamed:
      out = QuoteDotted(ref.name);
      break;
    case TableRef::Kind::kSubquery:
      out = "(" + Print(*ref.subquery) + ")";
      break;
    case TableRef::Kind::kJoin: {
      out = PrintTableRef(*ref.left);
      out += ref.join_kind == JoinKind::kCross
                 ? " CROSS JOIN "
                 : " " + std::string(JoinKindName(ref.join_kind)) + " JOIN ";
      std::string right = PrintTableRef(*ref.right);
      if (ref.right->kind == TableRef::Kind::kJoin) right = "(" + right + ")";
      out += right;
      if (ref.on) out += " ON " + Print(*ref.on);
      return out;
    }
  }
  if (!ref.alias.empty()) out += " AS " + QuoteImpl(ref.alias);
  return out;
}

std::string PrintBody(const QueryBody& body) {
  switch (body.kind) {
    case QueryBody::Kind::kNested:
      return "(" + Print(*body.nested) + ")";
    case QueryBody::Kind::kSetOp:
      return PrintBody(*body.left) + " " +
             std::string(SetOpKindName(body.op)) + " " +
             PrintBody(*body.right);
    case QueryBody::Kind::kValues: {
      std::string out = "VALUES ";
      for (std::size_t i = 0; i < body.rows.size(); ++i) {
        if (i > 0) out += ", ";
        out += "(" + Join(body.rows[i]) + ")";
      }
      return out;
    }
    case QueryBody::Kind::kSelect:
      break;
  }
  const Select& s = body.select;
  std::string out = s.distinct ? "SELECT DISTINCT " : "SELECT ";
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (i > 0) out += ", ";
    const SelectItem& item = s.items[i];
    if (!item.expr) {
      out += item.star_qualifier.empty() ? "*"
                                         : QuoteImpl(item.star_qualifier) + ".*";
      continue;
    }
    out += Print(*item.expr);
    if (!item.alias.empty()) out += " AS " + QuoteImpl(item.alias);
  }
  if (s.from) out += " FROM " + PrintTableRef(*s.from);
  if (s.where) out += " WHERE " + Print(*s.where);
  if (!s.group_by.empty()) out += " GROUP BY " + Join(s.group_by);
  if (s.having) out += " HAVING " + Print(*s.having);
  return out;
}

}  // namespace

std::string QuoteIdentifier(const std::string& name) { return QuoteImpl(name); }

std::string QuoteQualified(const std::string& name) { return QuoteDotted(name); }

std::string LiteralText(const Value& value) { return LiteralImpl(value); }

std::string Print(const AstExpr& e) {
  switch (e.kind) {
    case AstExpr::Kind::kColumn:
      if (e.qualifier.empty()) return QuoteImpl(e.name);
      return QuoteDotted(e.qualifier) + "." + QuoteImpl(e.name);
    case AstExpr::Kind::kLiteral:
      return LiteralImpl(e.literal);
    case AstExpr::Kind::kUnary:
      if (e.op == "NOT") return "(NOT " + Print(*e.args[0]) + ")";
      return "(" + e.op + Print(*e.args[0]) + ")";
    case AstExpr::Kind::kBinary:
      return "(" + Print(*e.args[0]) + " " + e.op + " " + Print(*e.args[1]) +
             ")";
    case AstExpr::Kind::kFunction:
      return Upper(e.name) + "(" + (e.star ? "*" : Join(e.args)) + ")";
    case AstExpr::Kind::kCase: {
      std::string out = "CASE";
      std::size_t i = 0;
      if (e.has_operand) out += " " + Print(*e.args[i++]);
      std::size_t end = e.args.size() - (e.has_else ? 1 : 0);
      for (; i < end; i += 2) {
        out += " WHEN " + Print(*e.args[i]) + " THEN " + Print(*e.args[i + 1]);
      }
      if (e.has_else) out += " ELSE " + Print(*e.args.back());
      return out + " END";
    }
    case AstExpr::Kind::kInList:
      return "(" + Print(*e.args[0]) + (e.negated ? " NOT IN (" : " IN (") +
             Join(e.args, 1) + "))";
    case AstExpr::Kind::kBetween:
      return "(" + Print(*e.args[0]) +
             (e.negated ? " NOT BETWEEN " : " BETWEEN ") + Print(*e.args[1]) +
             " AND " + Print(*e.args[2]) + ")";
    case AstExpr::Kind::kIsNull:
      return "(" + Print(*e.args[0]) +
             (e.negated ? " IS NOT NULL)" : " IS NULL)");
    case AstExpr::Kind::kCast:
      return "CAST(" + Print(*e.args[0]) + " AS " + e.type_name + ")";
    case AstExpr::Kind::kSubquery:
      return "(" + Print(*e.subquery) + ")";
  }
  return "?";
}

std::string Print(const Query& q) {
  std::string out;
  for (std::size_t i = 0; i < q.ctes.size(); ++i) {
    const Cte& cte = q.ctes[i];
    out += i == 0 ? "WITH " : ", ";
    out += QuoteImpl(cte.name);
    if (!cte.columns.empty()) {
      out += "(";
      for (std::size_t k = 0; k < cte.columns.size(); ++k) {
        if (k > 0) out += ", ";
        out += QuoteImpl(cte.columns[k]);
      }
      out += ")";
    }
    out += cte.materialized ? " AS MATERIALIZED (" : " AS (";
    out += Print(*cte.query) + ")";
  }
  if (!q.ctes.empty()) out += " ";
  out += PrintBody(*q.body);
  for (std::size_t i = 0; i < q.order_by.size(); ++i) {
    out += i == 0 ? " ORDER BY " : ", ";
    out += Print(*q.order_by[i].expr);
    if (q.order_by[i].descending) out += " DESC";
  }
  if (q.limit) out += " LIMIT " + std::to_string(*q.limit);
  return out;
}

}  // namespace qrw::sql
