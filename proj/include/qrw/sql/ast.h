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

// Syntax tree for the supported SQL subset.

#ifndef QRW_SQL_AST_H_
#define QRW_SQL_AST_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qrw/relation.h"
#include "qrw/value.h"

namespace qrw::sql {

struct Query;
struct AstExpr;
using AstExprPtr = std::shared_ptr<const AstExpr>;
using QueryPtr = std::shared_ptr<const Query>;

struct AstExpr {
  enum class Kind {
    kColumn,    // qualifier.name (qualifier may be empty)
    kLiteral,
    kUnary,     // op in {"-", "+", "NOT"}; args[0]
    kBinary,    // op in {"+", "-", "*", "/", "=", "<>", "<", ...}
    kFunction,  // name(args); star for COUNT(*)
    kCase,      // [operand] WHEN args[i] THEN args[i+1] ... [ELSE]
    kInList,    // args[0] [NOT] IN (args[1..])
    kBetween,   // args[0] [NOT] BETWEEN args[1] AND args[2]
    kIsNull,    // args[0] IS [NOT] NULL
    kCast,      // CAST(args[0] AS type_name)
    kSubquery,  // scalar subquery
  };

  Kind kind = Kind::kLiteral;
  std::size_t position = 0;
  std::string qualifier;
  std::string name;  // column or lowercased function name
  Value literal;
  std::string op;
  std::vector<AstExprPtr> args;
  bool negated = false;
  bool star = false;
  bool has_operand = false;  // simple CASE
  bool has_else = false;
  std::string type_name;  // uppercased, words joined by one space
  QueryPtr subquery;
};

struct SelectItem {
  AstExprPtr expr;  // null for `*` and `t.*`
  std::string alias;
  std::string star_qualifier;
};

struct TableRef;
using TableRefPtr = std::shared_ptr<const TableRef>;

struct TableRef {
  enum class Kind { kNamed, kSubquery, kJoin };
  Kind kind = Kind::kNamed;
  std::size_t position = 0;
  std::string name;  // kNamed: possibly dotted
  std::string alias;
  QueryPtr subquery;
  JoinKind join_kind = JoinKind::kInner;
  TableRefPtr left;
  TableRefPtr right;
  AstExprPtr on;  // absent for CROSS and comma joins
};

struct Select {
  bool distinct = false;
  std::vector<SelectItem> items;
  TableRefPtr from;  // absent for FROM-less SELECT
  AstExprPtr where;
  std::vector<AstExprPtr> group_by;
  AstExprPtr having;
};

struct QueryBody;
using QueryBodyPtr = std::shared_ptr<const QueryBody>;

struct QueryBody {
  enum class Kind { kSelect, kSetOp, kValues, kNested };
  Kind kind = Kind::kSelect;
  Select select;
  SetOpKind op = SetOpKind::kUnion;
  QueryBodyPtr left;
  QueryBodyPtr right;
  std::vector<std::vector<AstExprPtr>> rows;
  QueryPtr nested;  // parenthesized query used as a set operand
};

struct Cte {
  std::string name;
  std::vector<std::string> columns;
  bool materialized = false;
  QueryPtr query;
};

struct OrderItem {
  AstExprPtr expr;
  bool descending = false;
};

struct Query {
  std::vector<Cte> ctes;
  QueryBodyPtr body;
  std::vector<OrderItem> order_by;
  std::optional<std::uint64_t> limit;
};

// Canonical SQL text for a syntax tree: upper-case keywords, every
// identifier double-quoted, explicit parentheses around operators.
std::string Print(const Query& query);
std::string Print(const AstExpr& expr);

// "name" with embedded quotes doubled.
std::string QuoteIdentifier(const std::string& name);
// Quotes every dot-separated part of a qualified name.
std::string QuoteQualified(const std::string& name);
// SQL literal text. Doubles always carry a '.' or an exponent so they read
// back as floats; infinities print as 1e999.
std::string LiteralText(const Value& value);

}  // namespace qrw::sql

#endif  // QRW_SQL_AST_H_
