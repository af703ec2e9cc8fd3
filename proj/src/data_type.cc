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

#include "qrw/data_type.h"

#include <algorithm>
#include <set>

#include "qrw/error.h"

namespace qrw {

std::string_view TypeKindName(TypeKind kind) {
  switch (kind) {
    case TypeKind::kBoolean:
      return "boolean";
    case TypeKind::kInteger:
      return "integer";
    case TypeKind::kFloat:
      return "float";
    case TypeKind::kText:
      return "text";
  }
  return "?";
}

DataType DataType::Boolean(KInterval range) {
  return DataType(TypeKind::kBoolean, KInterval()).WithRange(std::move(range));
}

DataType DataType::Integer(KInterval range) {
  return DataType(TypeKind::kInteger, KInterval()).WithRange(std::move(range));
}

DataType DataType::Float(KInterval range) {
  return DataType(TypeKind::kFloat, std::move(range));
}

DataType DataType::Text(std::optional<std::vector<std::string>> values) {
  DataType type(TypeKind::kText, KInterval());
  return type.WithTextValues(std::move(values));
}

DataType DataType::WithNullable(bool nullable) const {
  DataType copy = *this;
  copy.nullable_ = nullable;
  return copy;
}

DataType DataType::WithRange(KInterval range) const {
  DataType copy = *this;
  switch (kind_) {
    case TypeKind::kInteger:
      copy.range_ = range.RoundedToIntegers();
      break;
    case TypeKind::kBoolean:
      copy.range_ =
          Intersect(range.RoundedToIntegers(), KInterval::Closed(0, 1));
      break;
    case TypeKind::kFloat:
      copy.range_ = std::move(range);
      break;
    case TypeKind::kText:
      break;
  }
  return copy;
}

DataType DataType::WithTextValues(
    std::optional<std::vector<std::string>> values) const {
  DataType copy = *this;
  if (values) {
    std::sort(values->begin(), values->end());
    values->erase(std::unique(values->begin(), values->end()), values->end());
  }
  copy.text_values_ = std::move(values);
  return copy;
}

bool DataType::HasFiniteValueSet() const {
  switch (kind_) {
    case TypeKind::kBoolean:
      return true;
    case TypeKind::kText:
      return text_values_.has_value();
    default:
      return range_.IsPoints();
  }
}

std::string DataType::ToString() const {
  std::string out(TypeKindName(kind_));
  switch (kind_) {
    case TypeKind::kInteger:
    case TypeKind::kFloat:
      out += range_.ToString();
      break;
    case TypeKind::kBoolean:
      if (!(range_ == KInterval::Closed(0, 1))) out += range_.ToString();
      break;
    case TypeKind::kText:
      if (text_values_) {
        out += "{";
        for (std::size_t i = 0; i < text_values_->size(); ++i) {
          if (i > 0) out += ", ";
          out += "'" + (*text_values_)[i] + "'";
        }
        out += "}";
      }
      break;
  }
  return nullable_ ? "optional<" + out + ">" : out;
}

namespace {

// The type of a bare NULL literal: a nullable float with no possible value.
bool IsNullOnly(const DataType& t) {
  return t.nullable() && t.kind() == TypeKind::kFloat && t.range().empty();
}

}  // namespace

DataType UnifyTypes(const DataType& a, const DataType& b) {
  if (IsNullOnly(a)) return b.WithNullable(true);
  if (IsNullOnly(b)) return a.WithNullable(true);
  bool nullable = a.nullable() || b.nullable();
  if (a.is_numeric() && b.is_numeric()) {
    KInterval range = Union(a.range(), b.range());
    DataType out = (a.kind() == TypeKind::kInteger &&
                    b.kind() == TypeKind::kInteger)
                       ? DataType::Integer(range)
                       : DataType::Float(range);
    return out.WithNullable(nullable);
  }
  if (a.kind() != b.kind()) {
    throw BindError("type mismatch: " + a.ToString() + " vs " + b.ToString());
  }
  if (a.is_boolean()) {
    return DataType::Boolean(Union(a.range(), b.range()))
        .WithNullable(nullable);
  }
  std::optional<std::vector<std::string>> values;
  if (a.text_values() && b.text_values()) {
    values = *a.text_values();
    values->insert(values->end(), b.text_values()->begin(),
                   b.text_values()->end());
  }
  return DataType::Text(std::move(values)).WithNullable(nullable);
}

Schema::Schema(std::vector<Column> columns) : columns_(std::move(columns)) {
  std::set<std::string_view> seen;
  for (const Column& c : columns_) {
    if (!seen.insert(c.name).second) {
      throw BindError("duplicate column name '" + c.name + "'");
    }
  }
}

std::optional<std::size_t> Schema::Find(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

const Column& Schema::Get(std::string_view name) const {
  auto index = Find(name);
  if (!index) throw BindError("unknown column '" + std::string(name) + "'");
  return columns_[*index];
}

std::vector<std::string> Schema::Names() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const Column& c : columns_) names.push_back(c.name);
  return names;
}

}  // namespace qrw
