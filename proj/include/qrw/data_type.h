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

#ifndef QRW_DATA_TYPE_H_
#define QRW_DATA_TYPE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrw/kinterval.h"

namespace qrw {

enum class TypeKind { kBoolean, kInteger, kFloat, kText };

std::string_view TypeKindName(TypeKind kind);

// Column type with its propagated value range.
//
// Numeric kinds always carry a KInterval (integers are kept rounded inward);
// booleans carry a subset of {0, 1}. Text carries either an explicit finite
// value set or nothing ("unknown"). A nullable type prints as optional<T>.
class DataType {
 public:
  static DataType Boolean(KInterval range = KInterval::Closed(0, 1));
  static DataType Integer(KInterval range = KInterval::Full());
  static DataType Float(KInterval range = KInterval::Full());
  static DataType Text(std::optional<std::vector<std::string>> values = {});

  TypeKind kind() const { return kind_; }
  bool nullable() const { return nullable_; }
  const KInterval& range() const { return range_; }
  const std::optional<std::vector<std::string>>& text_values() const {
    return text_values_;
  }

  bool is_numeric() const {
    return kind_ == TypeKind::kInteger || kind_ == TypeKind::kFloat;
  }
  bool is_text() const { return kind_ == TypeKind::kText; }
  bool is_boolean() const { return kind_ == TypeKind::kBoolean; }

  DataType WithNullable(bool nullable) const;
  // Replaces the range, re-rounding for integers and clamping for booleans.
  DataType WithRange(KInterval range) const;
  DataType WithTextValues(std::optional<std::vector<std::string>> values) const;

  // Range / value set describes finitely many values, each spelled out.
  bool HasFiniteValueSet() const;

  std::string ToString() const;

  friend bool operator==(const DataType&, const DataType&) = default;

 private:
  DataType(TypeKind kind, KInterval range) : kind_(kind), range_(range) {}

  TypeKind kind_;
  bool nullable_ = false;
  KInterval range_;
  std::optional<std::vector<std::string>> text_values_;
};

// Least upper bound of two types (SetOp, CASE, COALESCE). Throws BindError on
// incompatible kinds.
DataType UnifyTypes(const DataType& a, const DataType& b);

struct Column {
  std::string name;
  DataType type;

  friend bool operator==(const Column&, const Column&) = default;
};

// Ordered, non-empty list of uniquely named columns.
class Schema {
 public:
  Schema() = default;
  // Throws BindError on duplicate names.
  explicit Schema(std::vector<Column> columns);

  const std::vector<Column>& columns() const { return columns_; }
  std::size_t size() const { return columns_.size(); }
  const Column& operator[](std::size_t i) const { return columns_[i]; }

  std::optional<std::size_t> Find(std::string_view name) const;
  // Throws BindError naming the column when absent.
  const Column& Get(std::string_view name) const;
  std::vector<std::string> Names() const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<Column> columns_;
};

}  // namespace qrw

#endif  // QRW_DATA_TYPE_H_
