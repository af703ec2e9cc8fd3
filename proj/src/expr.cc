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

#include "qrw/expr.h"

#include <cmath>
#include <limits>
#include <utility>

#include "qrw/error.h"
#include "qrw/kinterval.h"

namespace qrw {

struct Expr::Node {
  Kind kind;
  std::string name;
  Value literal;
  Function function = Function::kAdd;
  AggregateKind aggregate = AggregateKind::kCount;
  std::vector<Expr> args;
  std::size_t hash = 0;
};

namespace {

std::size_t Combine(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t HashValue(const Value& v) {
  std::size_t h = v.storage().index();
  if (v.is_bool()) return Combine(h, v.as_bool());
  if (v.is_int()) return Combine(h, std::hash<std::int64_t>{}(v.as_int()));
  if (v.is_double()) {
    return Combine(h, std::hash<double>{}(v.as_double_exact()));
  }
  if (v.is_text()) return Combine(h, std::hash<std::string>{}(v.as_text()));
  return h;
}

}  // namespace

std::string_view FunctionName(Function f) {
  switch (f) {
    case Function::kAdd: return "+";
    case Function::kSub: return "-";
    case Function::kMul: return "*";
    case Function::kDiv: return "/";
    case Function::kNeg: return "NEG";
    case Function::kEq: return "=";
    case Function::kNe: return "<>";
    case Function::kLt: return "<";
    case Function::kLe: return "<=";
    case Function::kGt: return ">";
    case Function::kGe: return ">=";
    case Function::kAnd: return "AND";
    case Function::kOr: return "OR";
    case Function::kNot: return "NOT";
    case Function::kAbs: return "ABS";
    case Function::kExp: return "EXP";
    case Function::kLn: return "LN";
    case Function::kLog10: return "LOG10";
    case Function::kSqrt: return "SQRT";
    case Function::kSin: return "SIN";
    case Function::kCos: return "COS";
    case Function::kLeast: return "LEAST";
    case Function::kGreatest: return "GREATEST";
    case Function::kCase: return "CASE";
    case Function::kInList: return "IN";
    case Function::kIsNull: return "IS NULL";
    case Function::kIsNotNull: return "IS NOT NULL";
    case Function::kCoalesce: return "COALESCE";
    case Function::kCastText: return "CAST_TEXT";
    case Function::kCastFloat: return "CAST_FLOAT";
    case Function::kCastInteger: return "CAST_INTEGER";
    case Function::kRandom: return "RANDOM";
  }
  return "?";
}

std::string_view AggregateName(AggregateKind kind) {
  switch (kind) {
    case AggregateKind::kCount: return "count";
    case AggregateKind::kCountAll: return "count";
    case AggregateKind::kSum: return "sum";
    case AggregateKind::kAvg: return "avg";
    case AggregateKind::kVariance: return "variance";
    case AggregateKind::kStddev: return "stddev";
    case AggregateKind::kMin: return "min";
    case AggregateKind::kMax: return "max";
    case AggregateKind::kFirst: return "first";
  }
  return "?";
}

Expr Expr::Column(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kColumn;
  node->hash = Combine(1, std::hash<std::string>{}(name));
  node->name = std::move(name);
  return Expr(std::move(node));
}

Expr Expr::Literal(Value value) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kLiteral;
  node->hash = Combine(2, HashValue(value));
  node->literal = std::move(value);
  return Expr(std::move(node));
}

Expr Expr::Call(Function function, std::vector<Expr> args) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kFunction;
  node->function = function;
  std::size_t h = Combine(3, static_cast<std::size_t>(function));
  for (const Expr& a : args) h = Combine(h, a.Hash());
  node->hash = h;
  node->args = std::move(args);
  return Expr(std::move(node));
}

Expr Expr::Aggregate(AggregateKind kind, std::optional<Expr> arg) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kAggregate;
  node->aggregate = kind;
  std::size_t h = Combine(4, static_cast<std::size_t>(kind));
  if (arg) {
    h = Combine(h, arg->Hash());
    node->args.push_back(std::move(*arg));
  }
  node->hash = h;
  return Expr(std::move(node));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const std::string& Expr::column_name() const { return node_->name; }
const Value& Expr::literal() const { return node_->literal; }
Function Expr::function() const { return node_->function; }
AggregateKind Expr::aggregate() const { return node_->aggregate; }
const std::vector<Expr>& Expr::args() const { return node_->args; }
std::size_t Expr::Hash() const { return node_->hash; }

bool Expr::ContainsAggregate() const {
  if (is_aggregate()) return true;
  for (const Expr& a : args()) {
    if (a.ContainsAggregate()) return true;
  }
  return false;
}

bool Expr::ContainsRandom() const {
  if (is_function() && function() == Function::kRandom) return true;
  for (const Expr& a : args()) {
    if (a.ContainsRandom()) return true;
  }
  return false;
}

std::set<std::string> Expr::ColumnNames() const {
  std::set<std::string> names;
  std::function<void(const Expr&)> visit = [&](const Expr& e) {
    if (e.is_column()) names.insert(e.column_name());
    for (const Expr& a : e.args()) visit(a);
  };
  visit(*this);
  return names;
}

Expr Expr::Transform(
    const std::function<std::optional<Expr>(const Expr&)>& fn) const {
  Expr rebuilt = *this;
  if (!args().empty()) {
    std::vector<Expr> new_args;
    new_args.reserve(args().size());
    for (const Expr& a : args()) new_args.push_back(a.Transform(fn));
    if (is_function()) {
      rebuilt = Expr::Call(function(), std::move(new_args));
    } else {
      rebuilt = Expr::Aggregate(aggregate(), std::move(new_args[0]));
    }
  }
  std::optional<Expr> replaced = fn(rebuilt);
  return replaced ? *replaced : rebuilt;
}

Expr Expr::RenameColumns(
    const std::function<std::string(const std::string&)>& mapping) const {
  return Transform([&](const Expr& e) -> std::optional<Expr> {
    if (e.is_column()) return Expr::Column(mapping(e.column_name()));
    return std::nullopt;
  });
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.Hash() != b.Hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::kColumn:
      return a.column_name() == b.column_name();
    case Expr::Kind::kLiteral:
      return a.literal() == b.literal();
    case Expr::Kind::kFunction:
      if (a.function() != b.function()) return false;
      break;
    case Expr::Kind::kAggregate:
      if (a.aggregate() != b.aggregate()) return false;
      break;
  }
  return a.args() == b.args();
}

std::string Expr::ToString() const {
  switch (kind()) {
    case Kind::kColumn:
      return column_name();
    case Kind::kLiteral:
      return literal().ToString();
    case Kind::kAggregate: {
      std::string name(AggregateName(aggregate()));
      for (char& c : name) c = static_cast<char>(std::toupper(c));
      if (args().empty()) return name + "(*)";
      return name + "(" + args()[0].ToString() + ")";
    }
    case Kind::kFunction:
      break;
  }
  const auto& a = args();
  auto binary = [&](std::string_view op) {
    return "(" + a[0].ToString() + " " + std::string(op) + " " +
           a[1].ToString() + ")";
  };
  switch (function()) {
    case Function::kAdd:
    case Function::kSub:
    case Function::kMul:
    case Function::kDiv:
    case Function::kEq:
    case Function::kNe:
    case Function::kLt:
    case Function::kLe:
    case Function::kGt:
    case Function::kGe:
    case Function::kAnd:
    case Function::kOr:
      return binary(FunctionName(function()));
    case Function::kNeg:
      return "(-" + a[0].ToString() + ")";
    case Function::kNot:
      return "(NOT " + a[0].ToString() + ")";
    case Function::kIsNull:
      return "(" + a[0].ToString() + " IS NULL)";
    case Function::kIsNotNull:
      return "(" + a[0].ToString() + " IS NOT NULL)";
    case Function::kCase: {
      std::string out = "CASE";
      for (std::size_t i = 0; i + 1 < a.size(); i += 2) {
        out += " WHEN " + a[i].ToString() + " THEN " + a[i + 1].ToString();
      }
      return out + " ELSE " + a.back().ToString() + " END";
    }
    case Function::kInList: {
      std::string out = "(" + a[0].ToString() + " IN (";
      for (std::size_t i = 1; i < a.size(); ++i) {
        if (i > 1) out += ", ";
        out += a[i].ToString();
      }
      return out + "))";
    }
    default: {
      std::string out(FunctionName(function()));
      out += "(";
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (i > 0) out += ", ";
        out += a[i].ToString();
      }
      return out + ")";
    }
  }
}

Expr Col(std::string name) { return Expr::Column(std::move(name)); }
Expr Lit(Value value) { return Expr::Literal(std::move(value)); }
Expr Call(Function function, std::vector<Expr> args) {
  return Expr::Call(function, std::move(args));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Value FromDouble(double v) {
  if (std::isnan(v)) return Value::Null();
  return Value(v);
}

// Integer-preserving view of a numeric value.
bool IsIntegral(const Value& v) { return v.is_int() || v.is_bool(); }

std::int64_t AsInt(const Value& v) {
  return v.is_bool() ? (v.as_bool() ? 1 : 0) : v.as_int();
}

Value Arithmetic(Function f, const Value& x, const Value& y) {
  if (x.is_null() || y.is_null()) return Value::Null();
  if (IsIntegral(x) && IsIntegral(y)) {
    std::int64_t a = AsInt(x);
    std::int64_t b = AsInt(y);
    std::int64_t r = 0;
    switch (f) {
      case Function::kAdd:
        if (!__builtin_add_overflow(a, b, &r)) return Value(r);
        break;
      case Function::kSub:
        if (!__builtin_sub_overflow(a, b, &r)) return Value(r);
        break;
      case Function::kMul:
        if (!__builtin_mul_overflow(a, b, &r)) return Value(r);
        break;
      case Function::kDiv:
        if (b == 0) return Value::Null();
        if (a == std::numeric_limits<std::int64_t>::min() && b == -1) break;
        return Value(a / b);
      default:
        break;
    }
  }
  double a = *x.ToDouble();
  double b = *y.ToDouble();
  switch (f) {
    case Function::kAdd:
      return FromDouble(a + b);
    case Function::kSub:
      return FromDouble(a - b);
    case Function::kMul:
      return FromDouble(a * b);
    case Function::kDiv:
      if (b == 0) return Value::Null();
      if (IsIntegral(x) && IsIntegral(y)) return FromDouble(std::trunc(a / b));
      return FromDouble(a / b);
    default:
      return Value::Null();
  }
}

// Three-way comparison; nullopt when either side is NULL.
std::optional<int> Compare(const Value& x, const Value& y) {
  if (x.is_null() || y.is_null()) return std::nullopt;
  if (x.is_text() && y.is_text()) {
    int c = x.as_text().compare(y.as_text());
    return (c > 0) - (c < 0);
  }
  if (x.is_text() || y.is_text()) {
    throw InvalidArgumentError("cannot compare text with a number");
  }
  if (IsIntegral(x) && IsIntegral(y)) {
    std::int64_t a = AsInt(x);
    std::int64_t b = AsInt(y);
    return (a > b) - (a < b);
  }
  double a = *x.ToDouble();
  double b = *y.ToDouble();
  return (a > b) - (a < b);
}

std::optional<bool> Truth(const Value& v) {
  if (v.is_null()) return std::nullopt;
  if (v.is_bool()) return v.as_bool();
  if (v.is_text()) throw InvalidArgumentError("text used as a condition");
  return *v.ToDouble() != 0;
}

Value UnaryMath(Function f, const Value& x) {
  if (x.is_null()) return Value::Null();
  double v = *x.ToDouble();
  switch (f) {
    case Function::kExp:
      return FromDouble(std::exp(v));
    case Function::kLn:
      return v > 0 ? FromDouble(std::log(v)) : Value::Null();
    case Function::kLog10:
      return v > 0 ? FromDouble(std::log10(v)) : Value::Null();
    case Function::kSqrt:
      return v >= 0 ? FromDouble(std::sqrt(v)) : Value::Null();
    case Function::kSin:
      return FromDouble(std::sin(v));
    case Function::kCos:
      return FromDouble(std::cos(v));
    default:
      return Value::Null();
  }
}

}  // namespace

Value Eval(const Expr& expr, const ColumnLookup& lookup,
           const UniformSource& uniform) {
  switch (expr.kind()) {
    case Expr::Kind::kColumn:
      return lookup(expr.column_name());
    case Expr::Kind::kLiteral:
      return expr.literal();
    case Expr::Kind::kAggregate:
      throw InvalidArgumentError("aggregate in scalar context: " +
                                 expr.ToString());
    case Expr::Kind::kFunction:
      break;
  }
  const auto& a = expr.args();
  auto arg = [&](std::size_t i) { return Eval(a[i], lookup, uniform); };
  switch (expr.function()) {
    case Function::kAdd:
    case Function::kSub:
    case Function::kMul:
    case Function::kDiv:
      return Arithmetic(expr.function(), arg(0), arg(1));
    case Function::kNeg: {
      Value x = arg(0);
      if (x.is_null()) return x;
      if (IsIntegral(x) && AsInt(x) != std::numeric_limits<std::int64_t>::min()) {
        return Value(-AsInt(x));
      }
      return FromDouble(-*x.ToDouble());
    }
    case Function::kEq:
    case Function::kNe:
    case Function::kLt:
    case Function::kLe:
    case Function::kGt:
    case Function::kGe: {
      std::optional<int> c = Compare(arg(0), arg(1));
      if (!c) return Value::Null();
      switch (expr.function()) {
        case Function::kEq: return Value(*c == 0);
        case Function::kNe: return Value(*c != 0);
        case Function::kLt: return Value(*c < 0);
        case Function::kLe: return Value(*c <= 0);
        case Function::kGt: return Value(*c > 0);
        default: return Value(*c >= 0);
      }
    }
    case Function::kAnd: {
      std::optional<bool> x = Truth(arg(0));
      if (x == false) return Value(false);
      std::optional<bool> y = Truth(arg(1));
      if (y == false) return Value(false);
      if (x && y) return Value(true);
      return Value::Null();
    }
    case Function::kOr: {
      std::optional<bool> x = Truth(arg(0));
      if (x == true) return Value(true);
      std::optional<bool> y = Truth(arg(1));
      if (y == true) return Value(true);
      if (x && y) return Value(false);
      return Value::Null();
    }
    case Function::kNot: {
      std::optional<bool> x = Truth(arg(0));
      return x ? Value(!*x) : Value::Null();
    }
    case Function::kAbs: {
      Value x = arg(0);
      if (x.is_null()) return x;
      if (IsIntegral(x) && AsInt(x) != std::numeric_limits<std::int64_t>::min()) {
        return Value(AsInt(x) < 0 ? -AsInt(x) : AsInt(x));
      }
      return FromDouble(std::fabs(*x.ToDouble()));
    }
    case Function::kExp:
    case Function::kLn:
    case Function::kLog10:
    case Function::kSqrt:
    case Function::kSin:
    case Function::kCos:
      return UnaryMath(expr.function(), arg(0));
    case Function::kLeast:
    case Function::kGreatest: {
      std::vector<Value> values;
      for (std::size_t i = 0; i < a.size(); ++i) values.push_back(arg(i));
      std::optional<Value> best;
      bool any_double = false;
      for (const Value& v : values) {
        if (v.is_double()) any_double = true;
        if (v.is_null()) continue;
        if (!best) {
          best = v;
          continue;
        }
        int c = *Compare(v, *best);
        if ((expr.function() == Function::kLeast && c < 0) ||
            (expr.function() == Function::kGreatest && c > 0)) {
          best = v;
        }
      }
      if (!best) return Value::Null();
      // Mixed integer / float arguments yield a float.
      if (any_double && best->is_numeric()) return Value(*best->ToDouble());
      return *best;
    }
    case Function::kCase: {
      for (std::size_t i = 0; i + 1 < a.size(); i += 2) {
        if (Truth(arg(i)) == true) return arg(i + 1);
      }
      return arg(a.size() - 1);
    }
    case Function::kInList: {
      Value needle = arg(0);
      if (needle.is_null()) return Value::Null();
      bool saw_null = false;
      for (std::size_t i = 1; i < a.size(); ++i) {
        std::optional<int> c = Compare(needle, arg(i));
        if (!c) {
          saw_null = true;
        } else if (*c == 0) {
          return Value(true);
        }
      }
      return saw_null ? Value::Null() : Value(false);
    }
    case Function::kIsNull:
      return Value(arg(0).is_null());
    case Function::kIsNotNull:
      return Value(!arg(0).is_null());
    case Function::kCoalesce:
      for (std::size_t i = 0; i < a.size(); ++i) {
        Value v = arg(i);
        if (!v.is_null()) return v;
      }
      return Value::Null();
    case Function::kCastText: {
      Value x = arg(0);
      if (x.is_null() || x.is_text()) return x;
      if (x.is_bool()) return Value(std::string(x.as_bool() ? "1" : "0"));
      if (x.is_int()) return Value(std::to_string(x.as_int()));
      return Value(FormatDouble(x.as_double_exact()));
    }
    case Function::kCastFloat: {
      Value x = arg(0);
      if (x.is_null()) return x;
      if (x.is_text()) {
        try {
          return FromDouble(std::stod(x.as_text()));
        } catch (const std::exception&) {
          return Value(0.0);
        }
      }
      return FromDouble(*x.ToDouble());
    }
    case Function::kCastInteger: {
      Value x = arg(0);
      if (x.is_null()) return x;
      double v = 0;
      if (x.is_text()) {
        try {
          v = std::stod(x.as_text());
        } catch (const std::exception&) {
          v = 0;
        }
      } else {
        if (IsIntegral(x)) return Value(AsInt(x));
        v = *x.ToDouble();
      }
      if (std::isnan(v)) return Value::Null();
      v = std::trunc(v);
      if (v >= 9.2e18 || v <= -9.2e18) return Value(v);
      return Value(static_cast<std::int64_t>(v));
    }
    case Function::kRandom:
      if (!uniform) throw InvalidArgumentError("RANDOM() needs a uniform source");
      return Value(uniform());
  }
  return Value::Null();
}

}  // namespace qrw
