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

#include "qrw/relation.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "qrw/error.h"
#include "qrw/range.h"

namespace qrw {
namespace {

constexpr std::uint64_t kNoLimit = std::numeric_limits<std::uint64_t>::max();

std::uint64_t Fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string Hex(std::uint64_t v) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(v));
  return buffer;
}

std::uint64_t SaturatingAdd(std::uint64_t a, std::uint64_t b) {
  return a > kNoLimit - b ? kNoLimit : a + b;
}

std::uint64_t SaturatingMul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kNoLimit / b ? kNoLimit : a * b;
}

std::optional<std::uint64_t> Clean(std::uint64_t v) {
  if (v == kNoLimit) return std::nullopt;
  return v;
}

bool IsBooleanLike(const DataType& t) {
  return t.is_boolean() ||
         (t.nullable() && t.kind() == TypeKind::kFloat && t.range().empty());
}

void CheckScalar(const Expr& e, std::string_view where) {
  if (e.ContainsAggregate()) {
    throw BindError("aggregate not allowed in " + std::string(where) + ": " +
                    e.ToString());
  }
}

std::string SchemaKey(const Schema& s) {
  std::string out;
  for (const Column& c : s.columns()) {
    out += c.name + ":" + c.type.ToString() + ";";
  }
  return out;
}

// Intersects the types of two columns required equal by a join condition.
void RefineEqual(DataType& a, DataType& b) {
  if (a.is_text() && b.is_text()) {
    const auto& x = a.text_values();
    const auto& y = b.text_values();
    std::optional<std::vector<std::string>> both;
    if (x && y) {
      both.emplace();
      std::set_intersection(x->begin(), x->end(), y->begin(), y->end(),
                            std::back_inserter(*both));
    } else {
      both = x ? x : y;
    }
    a = a.WithTextValues(both).WithNullable(false);
    b = b.WithTextValues(both).WithNullable(false);
    return;
  }
  if (a.is_text() || b.is_text()) return;
  KInterval r = Intersect(a.range(), b.range());
  a = a.WithRange(r).WithNullable(false);
  b = b.WithRange(r).WithNullable(false);
}

}  // namespace

std::string_view JoinKindName(JoinKind kind) {
  switch (kind) {
    case JoinKind::kInner: return "INNER";
    case JoinKind::kLeft: return "LEFT";
    case JoinKind::kRight: return "RIGHT";
    case JoinKind::kFull: return "FULL";
    case JoinKind::kCross: return "CROSS";
  }
  return "?";
}

std::string_view SetOpKindName(SetOpKind kind) {
  switch (kind) {
    case SetOpKind::kUnion: return "UNION";
    case SetOpKind::kUnionAll: return "UNION ALL";
    case SetOpKind::kIntersect: return "INTERSECT";
    case SetOpKind::kExcept: return "EXCEPT";
  }
  return "?";
}

std::string JoinColumnName(std::string_view alias, std::string_view column) {
  if (alias.empty()) return std::string(column);
  return std::string(alias) + "_" + std::string(column);
}

Relation::Relation(Node node) : node_(std::move(node)) {}

Relation::Kind Relation::kind() const {
  return static_cast<Kind>(node_.index());
}

std::vector<RelationPtr> Relation::inputs() const {
  switch (kind()) {
    case Kind::kMap: return {map().input};
    case Kind::kReduce: return {reduce().input};
    case Kind::kJoin: return {join().left, join().right};
    case Kind::kSetOp: return {set_op().left, set_op().right};
    default: return {};
  }
}

RelationPtr Relation::Table(std::string name, Schema schema,
                            Visibility visibility,
                            std::optional<std::string> synthetic) {
  if (name.empty()) throw BindError("table name is empty");
  return Make(TableNode{std::move(name), std::move(schema), visibility,
                        std::move(synthetic)});
}

RelationPtr Relation::Map(std::vector<NamedExpr> projections,
                          std::optional<Expr> filter,
                          std::optional<std::uint64_t> limit,
                          RelationPtr input) {
  return Make(MapNode{std::move(projections), std::move(filter), limit,
                      std::move(input)});
}

RelationPtr Relation::Reduce(std::vector<NamedExpr> aggregates,
                             std::vector<Expr> group_by, RelationPtr input) {
  return Make(
      ReduceNode{std::move(aggregates), std::move(group_by), std::move(input)});
}

RelationPtr Relation::Join(JoinKind kind, Expr on, std::string left_alias,
                           std::string right_alias, RelationPtr left,
                           RelationPtr right) {
  return Make(JoinNode{kind, std::move(on), std::move(left_alias),
                       std::move(right_alias), std::move(left),
                       std::move(right)});
}

RelationPtr Relation::Values(std::vector<std::string> names,
                             std::vector<std::vector<Value>> rows) {
  return Make(ValuesNode{std::move(names), std::move(rows)});
}

RelationPtr Relation::SetOp(SetOpKind op, RelationPtr left, RelationPtr right) {
  return Make(SetOpNode{op, std::move(left), std::move(right)});
}

RelationPtr Relation::Make(Node node) {
  auto rel = std::shared_ptr<Relation>(new Relation(std::move(node)));
  std::string key;
  std::vector<Column> columns;
  std::uint64_t max_rows = kNoLimit;

  for (const RelationPtr& input : rel->inputs()) {
    if (!input) throw BindError("relation input is null");
  }

  switch (rel->kind()) {
    case Kind::kTable: {
      const TableNode& t = rel->table();
      if (t.schema.size() == 0) {
        throw BindError("table " + t.name + " has no columns");
      }
      columns = t.schema.columns();
      key = "T|" + t.name + "|" + SchemaKey(t.schema) + "|" +
            (t.visibility == Visibility::kPublic ? "pub" : "priv") + "|" +
            t.synthetic.value_or("");
      break;
    }
    case Kind::kMap: {
      const MapNode& m = rel->map();
      if (m.projections.empty()) throw BindError("Map without projections");
      Schema scope = m.input->schema();
      key = "M|";
      if (m.filter) {
        CheckScalar(*m.filter, "WHERE");
        DataType t = InferType(*m.filter, scope);
        if (!IsBooleanLike(t)) {
          throw BindError("WHERE condition is not boolean: " +
                          m.filter->ToString());
        }
        scope = RefineSchema(scope, *m.filter);
        key += "F:" + m.filter->ToString() + "|";
      }
      for (const NamedExpr& p : m.projections) {
        CheckScalar(p.expr, "a projection");
        columns.push_back({p.name, InferType(p.expr, scope)});
        key += p.name + "=" + p.expr.ToString() + ";";
      }
      if (m.limit) {
        key += "|L:" + std::to_string(*m.limit);
        max_rows = *m.limit;
      }
      if (m.input->max_rows()) {
        max_rows = std::min(max_rows, *m.input->max_rows());
      }
      key += "|" + Hex(m.input->Hash());
      break;
    }
    case Kind::kReduce: {
      const ReduceNode& r = rel->reduce();
      if (r.aggregates.empty()) throw BindError("Reduce without aggregates");
      const Schema& in = r.input->schema();
      const bool grouped = !r.group_by.empty();
      key = "R|";
      for (const Expr& g : r.group_by) {
        CheckScalar(g, "GROUP BY");
        InferType(g, in);
        key += g.ToString() + ",";
      }
      key += "|";
      for (const NamedExpr& a : r.aggregates) {
        if (!a.expr.is_aggregate()) {
          throw BindError("Reduce output " + a.name +
                          " is not an aggregate: " + a.expr.ToString());
        }
        std::optional<DataType> arg_type;
        if (!a.expr.args().empty()) {
          const Expr& arg = a.expr.args()[0];
          CheckScalar(arg, "an aggregate argument");
          arg_type = InferType(arg, in);
          if (a.expr.aggregate() == AggregateKind::kFirst &&
              std::find(r.group_by.begin(), r.group_by.end(), arg) ==
                  r.group_by.end()) {
            throw BindError(arg.ToString() +
                            " must appear in GROUP BY or in an aggregate");
          }
        }
        columns.push_back(
            {a.name, AggregateType(a.expr.aggregate(), arg_type,
                                   r.input->max_rows(), grouped)});
        key += a.name + "=" + a.expr.ToString() + ";";
      }
      if (!grouped) {
        max_rows = 1;
      } else if (r.input->max_rows()) {
        max_rows = *r.input->max_rows();
      }
      key += "|" + Hex(r.input->Hash());
      break;
    }
    case Kind::kJoin: {
      const JoinNode& j = rel->join();
      if (j.left_alias.empty() && j.left->kind() != Kind::kJoin) {
        throw BindError("only a nested join may have an empty alias");
      }
      if (j.right_alias.empty() && j.right->kind() != Kind::kJoin) {
        throw BindError("only a nested join may have an empty alias");
      }
      const std::size_t n_left = j.left->schema().size();
      for (const Column& c : j.left->schema().columns()) {
        columns.push_back({JoinColumnName(j.left_alias, c.name), c.type});
      }
      for (const Column& c : j.right->schema().columns()) {
        columns.push_back({JoinColumnName(j.right_alias, c.name), c.type});
      }
      Schema combined(columns);
      CheckScalar(j.on, "ON");
      if (!IsBooleanLike(InferType(j.on, combined))) {
        throw BindError("join condition is not boolean: " + j.on.ToString());
      }
      // Rows of the side(s) that must match satisfy the ON condition.
      const bool refine_left =
          j.kind == JoinKind::kInner || j.kind == JoinKind::kCross ||
          j.kind == JoinKind::kRight;
      const bool refine_right =
          j.kind == JoinKind::kInner || j.kind == JoinKind::kCross ||
          j.kind == JoinKind::kLeft;
      if (refine_left || refine_right) {
        std::vector<Column> refined = RefineSchema(combined, j.on).columns();
        std::map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < refined.size(); ++i) {
          index[refined[i].name] = i;
        }
        for (const auto& [a, b] : ExtractColumnEqualities(j.on)) {
          auto ia = index.find(a);
          auto ib = index.find(b);
          if (ia == index.end() || ib == index.end()) continue;
          RefineEqual(refined[ia->second].type, refined[ib->second].type);
        }
        for (std::size_t i = 0; i < columns.size(); ++i) {
          bool left_side = i < n_left;
          if ((left_side && refine_left) || (!left_side && refine_right)) {
            columns[i].type = refined[i].type;
          }
        }
      }
      const bool left_nullable =
          j.kind == JoinKind::kRight || j.kind == JoinKind::kFull;
      const bool right_nullable =
          j.kind == JoinKind::kLeft || j.kind == JoinKind::kFull;
      for (std::size_t i = 0; i < columns.size(); ++i) {
        bool left_side = i < n_left;
        if ((left_side && left_nullable) || (!left_side && right_nullable)) {
          columns[i].type = columns[i].type.WithNullable(true);
        }
      }
      if (j.left->max_rows() && j.right->max_rows()) {
        std::uint64_t l = *j.left->max_rows();
        std::uint64_t r = *j.right->max_rows();
        max_rows = SaturatingMul(l, r);
        if (j.kind != JoinKind::kInner && j.kind != JoinKind::kCross) {
          max_rows = SaturatingAdd(max_rows, SaturatingAdd(l, r));
        }
      }
      key = "J|" + std::string(JoinKindName(j.kind)) + "|" + j.on.ToString() +
            "|" + j.left_alias + "|" + j.right_alias + "|" +
            Hex(j.left->Hash()) + "|" + Hex(j.right->Hash());
      break;
    }
    case Kind::kValues: {
      const ValuesNode& v = rel->values();
      if (v.names.empty()) throw BindError("VALUES without columns");
      if (v.rows.empty()) throw BindError("VALUES without rows");
      key = "V|";
      for (const std::string& n : v.names) key += n + ",";
      std::vector<std::optional<DataType>> types(v.names.size());
      for (const auto& row : v.rows) {
        if (row.size() != v.names.size()) {
          throw BindError("VALUES rows differ in length");
        }
        key += "|";
        for (std::size_t i = 0; i < row.size(); ++i) {
          DataType t = InferType(Expr::Literal(row[i]), Schema());
          types[i] = types[i] ? UnifyTypes(*types[i], t) : t;
          key += row[i].ToString() + (row[i].is_double() ? "d," : ",");
        }
      }
      for (std::size_t i = 0; i < v.names.size(); ++i) {
        columns.push_back({v.names[i], *types[i]});
      }
      max_rows = v.rows.size();
      break;
    }
    case Kind::kSetOp: {
      const SetOpNode& s = rel->set_op();
      const Schema& l = s.left->schema();
      const Schema& r = s.right->schema();
      if (l.size() != r.size()) {
        throw BindError(std::string(SetOpKindName(s.op)) +
                        " inputs have different numbers of columns");
      }
      for (std::size_t i = 0; i < l.size(); ++i) {
        DataType t = UnifyTypes(l[i].type, r[i].type);
        if (s.op == SetOpKind::kExcept) {
          t = l[i].type;
        } else if (s.op == SetOpKind::kIntersect) {
          t = l[i].type;
          if (t.is_text()) {
            if (!t.text_values()) t = t.WithTextValues(r[i].type.text_values());
          } else {
            t = t.WithRange(Intersect(l[i].type.range(), r[i].type.range()));
          }
          t = t.WithNullable(l[i].type.nullable() && r[i].type.nullable());
        }
        columns.push_back({l[i].name, t});
      }
      auto lr = s.left->max_rows();
      auto rr = s.right->max_rows();
      switch (s.op) {
        case SetOpKind::kUnion:
        case SetOpKind::kUnionAll:
          if (lr && rr) max_rows = SaturatingAdd(*lr, *rr);
          break;
        case SetOpKind::kIntersect:
          if (lr || rr) max_rows = std::min(lr.value_or(kNoLimit), rr.value_or(kNoLimit));
          break;
        case SetOpKind::kExcept:
          if (lr) max_rows = *lr;
          break;
      }
      key = "S|" + std::string(SetOpKindName(s.op)) + "|" +
            Hex(s.left->Hash()) + "|" + Hex(s.right->Hash());
      break;
    }
  }
  rel->schema_ = Schema(std::move(columns));
  rel->max_rows_ = Clean(max_rows);
  rel->hash_ = Fnv1a(key);
  return rel;
}

RelationPtr Relation::WithInputs(const std::vector<RelationPtr>& inputs) const {
  if (inputs.size() != this->inputs().size()) {
    throw InvalidArgumentError("WithInputs: wrong number of inputs");
  }
  Node node = node_;
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, MapNode> ||
                      std::is_same_v<T, ReduceNode>) {
          n.input = inputs[0];
        } else if constexpr (std::is_same_v<T, JoinNode> ||
                             std::is_same_v<T, SetOpNode>) {
          n.left = inputs[0];
          n.right = inputs[1];
        }
      },
      node);
  return Make(std::move(node));
}

std::string Relation::Label() const {
  switch (kind()) {
    case Kind::kTable:
      return "Table " + table().name;
    case Kind::kMap: {
      std::string out = "Map";
      if (map().filter) out += " WHERE " + map().filter->ToString();
      if (map().limit) out += " LIMIT " + std::to_string(*map().limit);
      return out;
    }
    case Kind::kReduce: {
      std::string out = "Reduce";
      for (std::size_t i = 0; i < reduce().group_by.size(); ++i) {
        out += i == 0 ? " GROUP BY " : ", ";
        out += reduce().group_by[i].ToString();
      }
      return out;
    }
    case Kind::kJoin:
      return "Join " + std::string(JoinKindName(join().kind)) + " ON " +
             join().on.ToString();
    case Kind::kValues:
      return "Values (" + std::to_string(values().rows.size()) + " rows)";
    case Kind::kSetOp:
      return "SetOp " + std::string(SetOpKindName(set_op().op));
  }
  return "?";
}

namespace {

using EqualMemo = std::set<std::pair<const Relation*, const Relation*>>;

bool Equal(const Relation& a, const Relation& b, EqualMemo& memo);

bool EqualPtr(const RelationPtr& a, const RelationPtr& b, EqualMemo& memo) {
  return Equal(*a, *b, memo);
}

bool Equal(const Relation& a, const Relation& b, EqualMemo& memo) {
  if (&a == &b) return true;
  if (a.Hash() != b.Hash() || a.kind() != b.kind()) return false;
  if (memo.count({&a, &b})) return true;
  bool same = false;
  switch (a.kind()) {
    case Relation::Kind::kTable: {
      const TableNode& x = a.table();
      const TableNode& y = b.table();
      same = x.name == y.name && x.schema == y.schema &&
             x.visibility == y.visibility && x.synthetic == y.synthetic;
      break;
    }
    case Relation::Kind::kMap: {
      const MapNode& x = a.map();
      const MapNode& y = b.map();
      same = x.projections == y.projections && x.filter == y.filter &&
             x.limit == y.limit && EqualPtr(x.input, y.input, memo);
      break;
    }
    case Relation::Kind::kReduce: {
      const ReduceNode& x = a.reduce();
      const ReduceNode& y = b.reduce();
      same = x.aggregates == y.aggregates && x.group_by == y.group_by &&
             EqualPtr(x.input, y.input, memo);
      break;
    }
    case Relation::Kind::kJoin: {
      const JoinNode& x = a.join();
      const JoinNode& y = b.join();
      same = x.kind == y.kind && x.on == y.on &&
             x.left_alias == y.left_alias && x.right_alias == y.right_alias &&
             EqualPtr(x.left, y.left, memo) && EqualPtr(x.right, y.right, memo);
      break;
    }
    case Relation::Kind::kValues: {
      const ValuesNode& x = a.values();
      const ValuesNode& y = b.values();
      same = x.names == y.names && x.rows.size() == y.rows.size();
      for (std::size_t i = 0; same && i < x.rows.size(); ++i) {
        for (std::size_t j = 0; same && j < x.rows[i].size(); ++j) {
          same = x.rows[i][j].storage() == y.rows[i][j].storage();
        }
      }
      break;
    }
    case Relation::Kind::kSetOp: {
      const SetOpNode& x = a.set_op();
      const SetOpNode& y = b.set_op();
      same = x.op == y.op && EqualPtr(x.left, y.left, memo) &&
             EqualPtr(x.right, y.right, memo);
      break;
    }
  }
  if (same) memo.insert({&a, &b});
  return same;
}

}  // namespace

bool operator==(const Relation& a, const Relation& b) {
  EqualMemo memo;
  return Equal(a, b, memo);
}

bool StructurallyEqual(const RelationPtr& a, const RelationPtr& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

std::vector<RelationPtr> TopoOrder(const RelationPtr& root) {
  std::vector<RelationPtr> order;
  std::set<const Relation*> done;
  // Iterative post-order so deep graphs do not exhaust the stack.
  std::vector<std::pair<RelationPtr, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [node, expanded] = stack.back();
    stack.pop_back();
    if (done.count(node.get())) continue;
    if (expanded) {
      done.insert(node.get());
      order.push_back(node);
      continue;
    }
    stack.push_back({node, true});
    std::vector<RelationPtr> inputs = node->inputs();
    for (auto it = inputs.rbegin(); it != inputs.rend(); ++it) {
      if (!done.count(it->get())) stack.push_back({*it, false});
    }
  }
  return order;
}

std::vector<std::pair<RelationPtr, Schema>> Propagate(const RelationPtr& root) {
  std::vector<std::pair<RelationPtr, Schema>> out;
  for (const RelationPtr& r : TopoOrder(root)) out.emplace_back(r, r->schema());
  return out;
}

namespace {

std::string DotEscape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string ToDot(const RelationPtr& root) {
  std::vector<RelationPtr> order = TopoOrder(root);
  std::unordered_map<const Relation*, std::size_t> id;
  for (std::size_t i = 0; i < order.size(); ++i) id[order[i].get()] = i;
  std::string out = "digraph relation {\n";
  out += "  rankdir=BT;\n";
  out += "  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Relation& r = *order[i];
    std::string label = DotEscape(r.Label()) + "\\l";
    for (const Column& c : r.schema().columns()) {
      label += DotEscape(c.name + ": " + c.type.ToString()) + "\\l";
    }
    out += "  n" + std::to_string(i) + " [label=\"" + label + "\"];\n";
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const RelationPtr& input : order[i]->inputs()) {
      out += "  n" + std::to_string(id[input.get()]) + " -> n" +
             std::to_string(i) + ";\n";
    }
  }
  out += "}\n";
  return out;
}

std::string ToText(const RelationPtr& root) {
  std::vector<RelationPtr> order = TopoOrder(root);
  std::unordered_map<const Relation*, std::size_t> id;
  std::string out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Relation& r = *order[i];
    id[&r] = i;
    out += "#" + std::to_string(i) + " " + r.Label();
    std::vector<RelationPtr> inputs = r.inputs();
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      out += k == 0 ? "  <- " : ", ";
      out += "#" + std::to_string(id[inputs[k].get()]);
    }
    out += "\n";
    for (const Column& c : r.schema().columns()) {
      out += "  " + c.name + ": " + c.type.ToString() + "\n";
    }
  }
  return out;
}

}  // namespace qrw
