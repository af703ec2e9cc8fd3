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

#include "qrw/sql/parser.h"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <set>
#include <string>
#include <utility>

#include "qrw/error.h"
#include "sql/lexer.h"

namespace qrw::sql {
namespace {

// Words that cannot serve as implicit aliases or bare column names.
const std::set<std::string>& Reserved() {
  static const std::set<std::string> kWords = {
      "select", "from",   "where",  "group",    "by",     "having", "order",
      "limit",  "union",  "intersect", "except", "join",  "inner",  "left",
      "right",  "full",   "cross",  "outer",    "on",     "as",     "and",
      "or",     "not",    "in",     "is",       "null",   "between", "case",
      "when",   "then",   "else",   "end",      "distinct", "all",  "with",
      "values", "true",   "false",  "cast",     "using",  "over",   "asc",
      "desc",   "exists", "like",   "offset",   "natural", "window", "filter",
      "lateral", "fetch", "qualify"};
  return kWords;
}

class Parser {
 public:
  explicit Parser(std::string_view sql) : tokens_(Tokenize(sql)) {}

  Query ParseStatement() {
    if (Peek().kind == Token::Kind::kIdentifier) {
      static const std::set<std::string> kStatements = {
          "insert", "update", "delete", "create", "drop",  "alter",
          "truncate", "merge", "grant", "revoke", "copy"};
      if (kStatements.count(Peek().text)) {
        Unsupported(Upper(Peek().text) + " statements");
      }
    }
    Query q = ParseQuery(/*top_level=*/true);
    Accept(";");
    if (Peek().kind != Token::Kind::kEnd) {
      Fail("unexpected '" + Peek().text + "' after the end of the query");
    }
    return q;
  }

  AstExprPtr ParseStandaloneExpr() {
    AstExprPtr e = ParseExpr();
    if (Peek().kind != Token::Kind::kEnd) {
      Fail("unexpected '" + Peek().text + "' after the expression");
    }
    return e;
  }

 private:
  // ---------------------------------------------------------------- tokens
  const Token& Peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& Next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool IsKeyword(const Token& t, std::string_view word) const {
    return t.kind == Token::Kind::kIdentifier && t.text == word;
  }
  bool PeekKeyword(std::string_view word, std::size_t ahead = 0) const {
    return IsKeyword(Peek(ahead), word);
  }
  bool AcceptKeyword(std::string_view word) {
    if (!PeekKeyword(word)) return false;
    Next();
    return true;
  }
  void ExpectKeyword(std::string_view word) {
    if (!AcceptKeyword(word)) {
      Fail("expected " + Upper(std::string(word)) + " but found " +
           Describe(Peek()));
    }
  }
  bool PeekSymbol(std::string_view s, std::size_t ahead = 0) const {
    return Peek(ahead).kind == Token::Kind::kSymbol && Peek(ahead).text == s;
  }
  bool Accept(std::string_view s) {
    if (!PeekSymbol(s)) return false;
    Next();
    return true;
  }
  void Expect(std::string_view s) {
    if (!Accept(s)) {
      Fail("expected '" + std::string(s) + "' but found " + Describe(Peek()));
    }
  }

  static std::string Upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  }
  static std::string Describe(const Token& t) {
    if (t.kind == Token::Kind::kEnd) return "end of input";
    if (t.kind == Token::Kind::kString) return "'" + t.text + "'";
    if (t.kind == Token::Kind::kQuoted) return "\"" + t.text + "\"";
    return "'" + t.text + "'";
  }
  [[noreturn]] void Fail(const std::string& message) const {
    throw ParseError(message, Peek().position);
  }
  [[noreturn]] void Unsupported(const std::string& what) const {
    throw ParseError("unsupported: " + what, Peek().position);
  }

  bool PeekIdentifier() const {
    const Token& t = Peek();
    return t.kind == Token::Kind::kQuoted ||
           (t.kind == Token::Kind::kIdentifier && !Reserved().count(t.text));
  }
  std::string ExpectIdentifier(std::string_view what) {
    if (!PeekIdentifier()) {
      Fail("expected " + std::string(what) + " but found " + Describe(Peek()));
    }
    return Next().text;
  }

  // ----------------------------------------------------------------- query
  Query ParseQuery(bool top_level) {
    Query q;
    if (AcceptKeyword("with")) {
      if (PeekKeyword("recursive")) Unsupported("recursive CTEs");
      do {
        Cte cte;
        cte.name = ExpectIdentifier("a CTE name");
        if (Accept("(")) {
          do {
            cte.columns.push_back(ExpectIdentifier("a column name"));
          } while (Accept(","));
          Expect(")");
        }
        ExpectKeyword("as");
        if (AcceptKeyword("not")) {
          ExpectKeyword("materialized");
        } else if (AcceptKeyword("materialized")) {
          cte.materialized = true;
        }
        Expect("(");
        cte.query = std::make_shared<Query>(ParseQuery(false));
        Expect(")");
        q.ctes.push_back(std::move(cte));
      } while (Accept(","));
    }
    q.body = ParseSetExpr();
    if (PeekKeyword("order")) {
      if (!top_level) Unsupported("ORDER BY inside a subquery");
      Next();
      ExpectKeyword("by");
      do {
        OrderItem item;
        item.expr = ParseExpr();
        if (AcceptKeyword("desc")) {
          item.descending = true;
        } else {
          AcceptKeyword("asc");
        }
        if (PeekKeyword("nulls")) Unsupported("NULLS FIRST/LAST");
        q.order_by.push_back(std::move(item));
      } while (Accept(","));
    }
    if (AcceptKeyword("limit")) {
      const Token& t = Peek();
      if (t.kind != Token::Kind::kInteger) {
        Fail("LIMIT expects a non-negative integer");
      }
      Next();
      std::uint64_t v = 0;
      auto r = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (r.ec != std::errc()) throw ParseError("LIMIT out of range", t.position);
      q.limit = v;
    }
    if (PeekKeyword("offset")) Unsupported("OFFSET");
    if (PeekKeyword("fetch")) Unsupported("FETCH");
    return q;
  }

  QueryBodyPtr ParseSetExpr() {
    QueryBodyPtr left = ParseSetTerm();
    while (PeekKeyword("union") || PeekKeyword("except")) {
      bool is_union = Next().text == "union";
      SetOpKind op = is_union ? SetOpKind::kUnion : SetOpKind::kExcept;
      if (AcceptKeyword("all")) {
        if (!is_union) Unsupported("EXCEPT ALL");
        op = SetOpKind::kUnionAll;
      } else {
        AcceptKeyword("distinct");
      }
      auto body = std::make_shared<QueryBody>();
      body->kind = QueryBody::Kind::kSetOp;
      body->op = op;
      body->left = left;
      body->right = ParseSetTerm();
      left = body;
    }
    return left;
  }

  QueryBodyPtr ParseSetTerm() {
    QueryBodyPtr left = ParseSetPrimary();
    while (AcceptKeyword("intersect")) {
      if (PeekKeyword("all")) Unsupported("INTERSECT ALL");
      AcceptKeyword("distinct");
      auto body = std::make_shared<QueryBody>();
      body->kind = QueryBody::Kind::kSetOp;
      body->op = SetOpKind::kIntersect;
      body->left = left;
      body->right = ParseSetPrimary();
      left = body;
    }
    return left;
  }

  QueryBodyPtr ParseSetPrimary() {
    auto body = std::make_shared<QueryBody>();
    if (Accept("(")) {
      body->kind = QueryBody::Kind::kNested;
      body->nested = std::make_shared<Query>(ParseQuery(false));
      Expect(")");
      return body;
    }
    if (AcceptKeyword("values")) {
      body->kind = QueryBody::Kind::kValues;
      do {
        Expect("(");
        std::vector<AstExprPtr> row;
        do {
          row.push_back(ParseExpr());
        } while (Accept(","));
        Expect(")");
        body->rows.push_back(std::move(row));
      } while (Accept(","));
      return body;
    }
    body->kind = QueryBody::Kind::kSelect;
    body->select = ParseSelect();
    return body;
  }

  Select ParseSelect() {
    ExpectKeyword("select");
    Select s;
    if (AcceptKeyword("distinct")) {
      if (PeekKeyword("on")) Unsupported("DISTINCT ON");
      s.distinct = true;
    } else {
      AcceptKeyword("all");
    }
    do {
      s.items.push_back(ParseSelectItem());
    } while (Accept(","));
    if (AcceptKeyword("from")) s.from = ParseFromList();
    if (AcceptKeyword("where")) s.where = ParseExpr();
    if (AcceptKeyword("group")) {
      ExpectKeyword("by");
      if (PeekKeyword("rollup") || PeekKeyword("cube") ||
          PeekKeyword("grouping")) {
        Unsupported("grouping sets");
      }
      do {
        s.group_by.push_back(ParseExpr());
      } while (Accept(","));
      // Lenient form: SELECT ... GROUP BY g WHERE p.
      if (!s.where && AcceptKeyword("where")) s.where = ParseExpr();
    }
    if (AcceptKeyword("having")) s.having = ParseExpr();
    if (PeekKeyword("window")) Unsupported("window functions");
    return s;
  }

  SelectItem ParseSelectItem() {
    SelectItem item;
    if (Accept("*")) return item;
    if ((Peek().kind == Token::Kind::kIdentifier ||
         Peek().kind == Token::Kind::kQuoted) &&
        PeekSymbol(".", 1) && PeekSymbol("*", 2)) {
      item.star_qualifier = Next().text;
      Next();
      Next();
      return item;
    }
    item.expr = ParseExpr();
    if (AcceptKeyword("as")) {
      item.alias = ExpectIdentifier("an alias");
    } else if (PeekIdentifier()) {
      item.alias = Next().text;
    }
    return item;
  }

  TableRefPtr ParseFromList() {
    TableRefPtr left = ParseJoinedTable();
    while (Accept(",")) {
      auto join = std::make_shared<TableRef>();
      join->kind = TableRef::Kind::kJoin;
      join->position = Peek().position;
      join->join_kind = JoinKind::kCross;
      join->left = left;
      join->right = ParseJoinedTable();
      left = join;
    }
    return left;
  }

  TableRefPtr ParseJoinedTable() {
    TableRefPtr left = ParseTablePrimary();
    while (true) {
      std::size_t position = Peek().position;
      JoinKind kind;
      if (PeekKeyword("natural")) Unsupported("NATURAL JOIN");
      if (AcceptKeyword("join")) {
        kind = JoinKind::kInner;
      } else if (AcceptKeyword("inner")) {
        ExpectKeyword("join");
        kind = JoinKind::kInner;
      } else if (PeekKeyword("left") || PeekKeyword("right") ||
                 PeekKeyword("full")) {
        std::string word = Next().text;
        AcceptKeyword("outer");
        ExpectKeyword("join");
        kind = word == "left"    ? JoinKind::kLeft
               : word == "right" ? JoinKind::kRight
                                 : JoinKind::kFull;
      } else if (AcceptKeyword("cross")) {
        ExpectKeyword("join");
        kind = JoinKind::kCross;
      } else {
        break;
      }
      if (PeekKeyword("lateral")) Unsupported("LATERAL");
      auto join = std::make_shared<TableRef>();
      join->kind = TableRef::Kind::kJoin;
      join->position = position;
      join->join_kind = kind;
      join->left = left;
      join->right = ParseTablePrimary();
      if (kind != JoinKind::kCross) {
        if (PeekKeyword("using")) Unsupported("JOIN ... USING");
        ExpectKeyword("on");
        join->on = ParseExpr();
      }
      left = join;
    }
    return left;
  }

  TableRefPtr ParseTablePrimary() {
    auto ref = std::make_shared<TableRef>();
    ref->position = Peek().position;
    if (PeekKeyword("lateral")) Unsupported("LATERAL");
    if (Accept("(")) {
      if (PeekKeyword("select") || PeekKeyword("with") ||
          PeekKeyword("values") || PeekSymbol("(")) {
        ref->kind = TableRef::Kind::kSubquery;
        ref->subquery = std::make_shared<Query>(ParseQuery(false));
        Expect(")");
      } else {
        TableRefPtr inner = ParseFromList();
        Expect(")");
        return inner;
      }
    } else {
      ref->kind = TableRef::Kind::kNamed;
      ref->name = ExpectIdentifier("a table name");
      while (Accept(".")) ref->name += "." + ExpectIdentifier("a table name");
      if (Accept("(")) Unsupported("table functions");
    }
    if (AcceptKeyword("as")) {
      ref->alias = ExpectIdentifier("an alias");
    } else if (PeekIdentifier()) {
      ref->alias = Next().text;
    }
    if (PeekSymbol("(") && !ref->alias.empty()) {
      Unsupported("column alias lists on FROM items");
    }
    return ref;
  }

  // ----------------------------------------------------------- expressions
  std::shared_ptr<AstExpr> Make(AstExpr::Kind kind, std::size_t position) {
    auto e = std::make_shared<AstExpr>();
    e->kind = kind;
    e->position = position;
    return e;
  }

  AstExprPtr Binary(std::string op, AstExprPtr a, AstExprPtr b,
                    std::size_t position) {
    auto e = std::make_shared<AstExpr>();
    e->kind = AstExpr::Kind::kBinary;
    e->position = position;
    e->op = std::move(op);
    e->args = {std::move(a), std::move(b)};
    return e;
  }

  AstExprPtr ParseExpr() { return ParseOr(); }

  AstExprPtr ParseOr() {
    AstExprPtr left = ParseAnd();
    while (PeekKeyword("or")) {
      std::size_t p = Next().position;
      left = Binary("OR", left, ParseAnd(), p);
    }
    return left;
  }

  AstExprPtr ParseAnd() {
    AstExprPtr left = ParseNot();
    while (PeekKeyword("and")) {
      std::size_t p = Next().position;
      left = Binary("AND", left, ParseNot(), p);
    }
    return left;
  }

  AstExprPtr ParseNot() {
    if (PeekKeyword("not")) {
      std::size_t p = Next().position;
      if (PeekKeyword("exists")) Unsupported("EXISTS");
      auto e = std::make_shared<AstExpr>();
      e->kind = AstExpr::Kind::kUnary;
      e->position = p;
      e->op = "NOT";
      e->args = {ParseNot()};
      return e;
    }
    return ParseComparison();
  }

  AstExprPtr ParseComparison() {
    AstExprPtr left = ParseAdditive();
    while (true) {
      std::size_t p = Peek().position;
      static const std::set<std::string> kOps = {"=", "<>", "<", "<=", ">", ">="};
      if (Peek().kind == Token::Kind::kSymbol && kOps.count(Peek().text)) {
        std::string op = Next().text;
        if (PeekKeyword("any") || PeekKeyword("all") || PeekKeyword("some")) {
          Unsupported("quantified comparisons");
        }
        left = Binary(op, left, ParseAdditive(), p);
        continue;
      }
      if (PeekKeyword("is")) {
        Next();
        auto e = std::make_shared<AstExpr>();
        e->kind = AstExpr::Kind::kIsNull;
        e->position = p;
        e->negated = AcceptKeyword("not");
        if (PeekKeyword("distinct")) Unsupported("IS DISTINCT FROM");
        ExpectKeyword("null");
        e->args = {left};
        left = e;
        continue;
      }
      bool negated = false;
      if (PeekKeyword("not") &&
          (PeekKeyword("in", 1) || PeekKeyword("between", 1) ||
           PeekKeyword("like", 1))) {
        Next();
        negated = true;
      }
      if (PeekKeyword("like") || PeekKeyword("ilike")) Unsupported("LIKE");
      if (AcceptKeyword("in")) {
        Expect("(");
        if (PeekKeyword("select") || PeekKeyword("with")) {
          Unsupported("IN (subquery)");
        }
        auto e = std::make_shared<AstExpr>();
        e->kind = AstExpr::Kind::kInList;
        e->position = p;
        e->negated = negated;
        e->args = {left};
        do {
          e->args.push_back(ParseExpr());
        } while (Accept(","));
        Expect(")");
        left = e;
        continue;
      }
      if (AcceptKeyword("between")) {
        auto e = std::make_shared<AstExpr>();
        e->kind = AstExpr::Kind::kBetween;
        e->position = p;
        e->negated = negated;
        AstExprPtr lo = ParseAdditive();
        ExpectKeyword("and");
        AstExprPtr hi = ParseAdditive();
        e->args = {left, lo, hi};
        left = e;
        continue;
      }
      if (negated) Fail("expected IN or BETWEEN after NOT");
      return left;
    }
  }

  AstExprPtr ParseAdditive() {
    AstExprPtr left = ParseMultiplicative();
    while (PeekSymbol("+") || PeekSymbol("-") || PeekSymbol("||")) {
      if (PeekSymbol("||")) Unsupported("string concatenation");
      std::size_t p = Peek().position;
      std::string op = Next().text;
      left = Binary(op, left, ParseMultiplicative(), p);
    }
    return left;
  }

  AstExprPtr ParseMultiplicative() {
    AstExprPtr left = ParseUnary();
    while (PeekSymbol("*") || PeekSymbol("/") || PeekSymbol("%")) {
      if (PeekSymbol("%")) Unsupported("the % operator");
      std::size_t p = Peek().position;
      std::string op = Next().text;
      left = Binary(op, left, ParseUnary(), p);
    }
    return left;
  }

  AstExprPtr ParseUnary() {
    if (PeekSymbol("-") || PeekSymbol("+")) {
      std::size_t p = Peek().position;
      std::string op = Next().text;
      auto e = std::make_shared<AstExpr>();
      e->kind = AstExpr::Kind::kUnary;
      e->position = p;
      e->op = op;
      e->args = {ParseUnary()};
      return e;
    }
    return ParsePrimary();
  }

  AstExprPtr Literal(Value v, std::size_t position) {
    auto e = std::make_shared<AstExpr>();
    e->kind = AstExpr::Kind::kLiteral;
    e->position = position;
    e->literal = std::move(v);
    return e;
  }

  AstExprPtr ParsePrimary() {
    const Token& t = Peek();
    const std::size_t p = t.position;
    switch (t.kind) {
      case Token::Kind::kInteger: {
        Next();
        std::int64_t v = 0;
        auto r = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (r.ec == std::errc()) return Literal(Value(v), p);
        return Literal(Value(std::strtod(t.text.c_str(), nullptr)), p);
      }
      case Token::Kind::kFloat:
        Next();
        return Literal(Value(std::strtod(t.text.c_str(), nullptr)), p);
      case Token::Kind::kString:
        Next();
        return Literal(Value(t.text), p);
      case Token::Kind::kEnd:
        Fail("unexpected end of input in an expression");
      case Token::Kind::kSymbol:
        if (Accept("(")) {
          if (PeekKeyword("select") || PeekKeyword("with")) {
            auto e = Make(AstExpr::Kind::kSubquery, p);
            e->subquery = std::make_shared<Query>(ParseQuery(false));
            Expect(")");
            return e;
          }
          AstExprPtr inner = ParseExpr();
          Expect(")");
          return inner;
        }
        Fail("unexpected " + Describe(t) + " in an expression");
      case Token::Kind::kQuoted:
      case Token::Kind::kIdentifier:
        break;
    }
    if (t.kind == Token::Kind::kIdentifier) {
      if (t.text == "null") {
        Next();
        return Literal(Value::Null(), p);
      }
      if (t.text == "true" || t.text == "false") {
        Next();
        return Literal(Value(t.text == "true"), p);
      }
      if (t.text == "case") return ParseCase();
      if (t.text == "cast") return ParseCast();
      if (t.text == "exists") Unsupported("EXISTS");
      if (t.text == "interval" || t.text == "date" || t.text == "timestamp") {
        if (Peek(1).kind == Token::Kind::kString) {
          Unsupported("date and time literals");
        }
      }
      if (Reserved().count(t.text)) {
        Fail("unexpected keyword " + Upper(t.text) + " in an expression");
      }
    }
    std::string first = Next().text;
    if (PeekSymbol("(") && t.kind == Token::Kind::kIdentifier) {
      return ParseCall(first, p);
    }
    auto e = Make(AstExpr::Kind::kColumn, p);
    AstExpr* m = e.get();
    if (Accept(".")) {
      m->qualifier = first;
      m->name = ExpectIdentifier("a column name");
      if (Accept(".")) {
        // schema.table.column
        m->qualifier += "." + m->name;
        m->name = ExpectIdentifier("a column name");
      }
    } else {
      m->name = first;
    }
    return e;
  }

  AstExprPtr ParseCall(const std::string& name, std::size_t p) {
    Expect("(");
    auto e = std::make_shared<AstExpr>();
    e->kind = AstExpr::Kind::kFunction;
    e->position = p;
    e->name = name;
    if (AcceptKeyword("distinct")) {
      Unsupported(Upper(name) + "(DISTINCT ...)");
    }
    AcceptKeyword("all");
    if (Accept("*")) {
      if (name != "count") Fail("only COUNT accepts *");
      e->star = true;
    } else if (!PeekSymbol(")")) {
      do {
        e->args.push_back(ParseExpr());
      } while (Accept(","));
    }
    if (PeekKeyword("order")) Unsupported("ORDER BY inside a function call");
    Expect(")");
    if (PeekKeyword("within")) Unsupported("WITHIN GROUP");
    if (PeekKeyword("filter")) Unsupported("aggregate FILTER clauses");
    if (PeekKeyword("over")) Unsupported("window functions (OVER)");
    return e;
  }

  AstExprPtr ParseCase() {
    auto e = std::make_shared<AstExpr>();
    e->kind = AstExpr::Kind::kCase;
    e->position = Next().position;
    if (!PeekKeyword("when")) {
      e->has_operand = true;
      e->args.push_back(ParseExpr());
    }
    if (!PeekKeyword("when")) Fail("expected WHEN in CASE");
    while (AcceptKeyword("when")) {
      e->args.push_back(ParseExpr());
      ExpectKeyword("then");
      e->args.push_back(ParseExpr());
    }
    if (AcceptKeyword("else")) {
      e->has_else = true;
      e->args.push_back(ParseExpr());
    }
    ExpectKeyword("end");
    return e;
  }

  AstExprPtr ParseCast() {
    auto e = std::make_shared<AstExpr>();
    e->kind = AstExpr::Kind::kCast;
    e->position = Next().position;
    Expect("(");
    e->args = {ParseExpr()};
    ExpectKeyword("as");
    std::string type;
    while (Peek().kind == Token::Kind::kIdentifier) {
      if (!type.empty()) type += " ";
      type += Upper(Next().text);
    }
    if (type.empty()) Fail("expected a type name in CAST");
    if (Accept("(")) {
      // VARCHAR(10), NUMERIC(10, 2): the modifiers do not matter here.
      do {
        if (Peek().kind != Token::Kind::kInteger) Fail("expected a type modifier");
        Next();
      } while (Accept(","));
      Expect(")");
    }
    e->type_name = type;
    Expect(")");
    return e;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Query Parse(std::string_view sql) { return Parser(sql).ParseStatement(); }

AstExprPtr ParseExpression(std::string_view sql) {
  return Parser(sql).ParseStandaloneExpr();
}

}  // namespace qrw::sql
