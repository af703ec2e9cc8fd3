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

#ifndef QRW_EXPR_H_
#define QRW_EXPR_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qrw/value.h"

namespace qrw {

enum class Function {
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kEq,
  kNe,
  kLt,
  kLe,
  kGt,
  kGe,
  kAnd,
  kOr,
  kNot,
  kAbs,
  kExp,
  kLn,
  kLog10,
  kSqrt,
  kSin,
  kCos,
  kLeast,
  kGreatest,
  // args: cond_1, value_1, ..., cond_n, value_n, else_value
  kCase,
  // args: needle, literal_1, ..., literal_n
  kInList,
  kIsNull,
  kIsNotNull,
  kCoalesce,
  kCastText,
  kCastFloat,
  kCastInteger,
  // Uniform draw in [0, 1); the only non-deterministic function.
  kRandom,
};

std::string_view FunctionName(Function f);

enum class AggregateKind {
  kCount,
  kCountAll,
  kSum,
  kAvg,
  kVariance,
  kStddev,
  kMin,
  kMax,
  // Passes a grouping key through to the output of a Reduce.
  kFirst,
};

std::string_view AggregateName(AggregateKind kind);

// Immutable expression tree with cheap value-semantics copies. Structural
// equality and hashing look at the whole tree.
class Expr {
 public:
  enum class Kind { kColumn, kLiteral, kFunction, kAggregate };

  static Expr Column(std::string name);
  static Expr Literal(Value value);
  static Expr Call(Function function, std::vector<Expr> args);
  // `arg` is absent only for COUNT(*).
  static Expr Aggregate(AggregateKind kind, std::optional<Expr> arg);

  Kind kind() const;
  bool is_column() const { return kind() == Kind::kColumn; }
  bool is_literal() const { return kind() == Kind::kLiteral; }
  bool is_function() const { return kind() == Kind::kFunction; }
  bool is_aggregate() const { return kind() == Kind::kAggregate; }

  const std::string& column_name() const;
  const Value& literal() const;
  Function function() const;
  AggregateKind aggregate() const;
  // Function arguments, or the (zero or one) aggregate argument.
  const std::vector<Expr>& args() const;

  bool ContainsAggregate() const;
  bool ContainsRandom() const;
  std::set<std::string> ColumnNames() const;

  // Bottom-up rewrite: `fn` sees each rebuilt node and may replace it.
  Expr Transform(const std::function<std::optional<Expr>(const Expr&)>& fn)
      const;
  // Renames column references through `mapping`; unmapped names are kept.
  Expr RenameColumns(
      const std::function<std::string(const std::string&)>& mapping) const;

  std::size_t Hash() const;
  // Debug SQL-like text; the renderer owns executable SQL.
  std::string ToString() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Shorthands for building expressions in code.
Expr Col(std::string name);
Expr Lit(Value value);
Expr Call(Function function, std::vector<Expr> args);

// Source of uniform [0, 1) draws for kRandom during evaluation.
using UniformSource = std::function<double()>;
using ColumnLookup = std::function<Value(const std::string&)>;

// Evaluates a scalar expression with SQL semantics: NULL propagation,
// three-valued logic, truncating integer division, NULL on division by zero
// and on LN / SQRT domain errors, NaN collapses to NULL.
Value Eval(const Expr& expr, const ColumnLookup& lookup,
           const UniformSource& uniform = {});

}  // namespace qrw

#endif  // QRW_EXPR_H_
