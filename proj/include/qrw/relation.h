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

// The relational dataflow IR: an immutable DAG of Table, Map, Reduce, Join,
// Values and SetOp nodes, each carrying its derived schema.

#ifndef QRW_RELATION_H_
#define QRW_RELATION_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qrw/data_type.h"
#include "qrw/expr.h"
#include "qrw/value.h"

namespace qrw {

class Relation;
using RelationPtr = std::shared_ptr<const Relation>;

enum class Visibility { kPublic, kPrivate };
enum class JoinKind { kInner, kLeft, kRight, kFull, kCross };
enum class SetOpKind { kUnion, kUnionAll, kIntersect, kExcept };

std::string_view JoinKindName(JoinKind kind);    // "INNER", "LEFT", ...
std::string_view SetOpKindName(SetOpKind kind);  // "UNION", "UNION ALL", ...

struct NamedExpr {
  std::string name;
  Expr expr;

  friend bool operator==(const NamedExpr&, const NamedExpr&) = default;
};

struct TableNode {
  std::string name;
  Schema schema;
  Visibility visibility = Visibility::kPrivate;
  // Name of a table holding differentially private synthetic data with the
  // same schema.
  std::optional<std::string> synthetic;
};

// SELECT projections FROM input WHERE filter LIMIT limit. The filter and the
// projections both read the input columns.
struct MapNode {
  std::vector<NamedExpr> projections;
  std::optional<Expr> filter;
  std::optional<std::uint64_t> limit;
  RelationPtr input;
};

// SELECT aggregates FROM input GROUP BY group_by. Every output is an
// aggregate expression; grouping keys pass through as FIRST(key).
struct ReduceNode {
  std::vector<NamedExpr> aggregates;
  std::vector<Expr> group_by;
  RelationPtr input;
};

// Output columns are the left columns then the right ones, each named
// `<alias>_<column>`. A side with an empty alias must itself be a Join and
// keeps its own output names (nested join trees). `on` reads output names.
struct JoinNode {
  JoinKind kind = JoinKind::kInner;
  Expr on;
  std::string left_alias;
  std::string right_alias;
  RelationPtr left;
  RelationPtr right;
};

struct ValuesNode {
  std::vector<std::string> names;
  std::vector<std::vector<Value>> rows;
};

struct SetOpNode {
  SetOpKind op = SetOpKind::kUnion;
  RelationPtr left;
  RelationPtr right;
};

class Relation {
 public:
  enum class Kind { kTable, kMap, kReduce, kJoin, kValues, kSetOp };

  // Factories validate their arguments and derive the output schema; they
  // throw BindError on unknown columns, duplicate names or type errors.
  static RelationPtr Table(std::string name, Schema schema,
                           Visibility visibility = Visibility::kPrivate,
                           std::optional<std::string> synthetic = {});
  static RelationPtr Map(std::vector<NamedExpr> projections,
                         std::optional<Expr> filter,
                         std::optional<std::uint64_t> limit, RelationPtr input);
  static RelationPtr Reduce(std::vector<NamedExpr> aggregates,
                            std::vector<Expr> group_by, RelationPtr input);
  static RelationPtr Join(JoinKind kind, Expr on, std::string left_alias,
                          std::string right_alias, RelationPtr left,
                          RelationPtr right);
  static RelationPtr Values(std::vector<std::string> names,
                            std::vector<std::vector<Value>> rows);
  static RelationPtr SetOp(SetOpKind op, RelationPtr left, RelationPtr right);

  Kind kind() const;
  const Schema& schema() const { return schema_; }
  // Upper bound on the number of output rows, when known.
  std::optional<std::uint64_t> max_rows() const { return max_rows_; }
  std::vector<RelationPtr> inputs() const;

  const TableNode& table() const { return std::get<TableNode>(node_); }
  const MapNode& map() const { return std::get<MapNode>(node_); }
  const ReduceNode& reduce() const { return std::get<ReduceNode>(node_); }
  const JoinNode& join() const { return std::get<JoinNode>(node_); }
  const ValuesNode& values() const { return std::get<ValuesNode>(node_); }
  const SetOpNode& set_op() const { return std::get<SetOpNode>(node_); }

  // Stable structural hash (identical across runs and platforms).
  std::uint64_t Hash() const { return hash_; }

  // One-line description such as "Reduce GROUP BY a".
  std::string Label() const;

  // Same node with its inputs replaced (in `inputs()` order); the schema is
  // derived again.
  RelationPtr WithInputs(const std::vector<RelationPtr>& inputs) const;

  friend bool operator==(const Relation& a, const Relation& b);

 private:
  using Node = std::variant<TableNode, MapNode, ReduceNode, JoinNode,
                            ValuesNode, SetOpNode>;
  explicit Relation(Node node);
  static RelationPtr Make(Node node);

  Node node_;
  Schema schema_;
  std::optional<std::uint64_t> max_rows_;
  std::uint64_t hash_ = 0;
};

// Structural equality of two graphs (shared and duplicated subgraphs compare
// equal when their contents do).
bool StructurallyEqual(const RelationPtr& a, const RelationPtr& b);

// Nodes reachable from `root`, each after all of its inputs and listed once.
// Inputs are visited left to right, so the order is deterministic.
std::vector<RelationPtr> TopoOrder(const RelationPtr& root);

// Output schema of every node, in topological order.
std::vector<std::pair<RelationPtr, Schema>> Propagate(const RelationPtr& root);

// Graphviz digraph with one node per relation (labeled with its variant and
// schema) and edges pointing from inputs to consumers.
std::string ToDot(const RelationPtr& root);

// Plain-text dump of every node (label and schema with ranges) in
// topological order.
std::string ToText(const RelationPtr& root);

// Output column name of `column` taken from a join side aliased `alias`.
std::string JoinColumnName(std::string_view alias, std::string_view column);

}  // namespace qrw

#endif  // QRW_RELATION_H_
