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

#ifndef QRW_VALUE_H_
#define QRW_VALUE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace qrw {

// A scalar SQL value. NULL is the monostate alternative.
class Value {
 public:
  using Storage =
      std::variant<std::monostate, bool, std::int64_t, double, std::string>;

  Value() = default;
  Value(bool v) : storage_(v) {}                 // NOLINT
  Value(std::int64_t v) : storage_(v) {}         // NOLINT
  Value(int v) : storage_(std::int64_t{v}) {}    // NOLINT
  Value(double v) : storage_(v) {}               // NOLINT
  Value(std::string v) : storage_(std::move(v)) {}  // NOLINT
  Value(const char* v) : storage_(std::string(v)) {}  // NOLINT

  static Value Null() { return Value(); }

  bool is_null() const { return storage_.index() == 0; }
  bool is_bool() const { return std::holds_alternative<bool>(storage_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(storage_); }
  bool is_double() const { return std::holds_alternative<double>(storage_); }
  bool is_text() const { return std::holds_alternative<std::string>(storage_); }
  bool is_numeric() const { return is_bool() || is_int() || is_double(); }

  bool as_bool() const { return std::get<bool>(storage_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(storage_); }
  double as_double_exact() const { return std::get<double>(storage_); }
  const std::string& as_text() const { return std::get<std::string>(storage_); }

  // Numeric view: booleans map to 0/1. nullopt for NULL and text.
  std::optional<double> ToDouble() const;

  const Storage& storage() const { return storage_; }

  // Human-readable form: NULL, true, 42, 0.5, 'text'.
  std::string ToString() const;

  friend bool operator==(const Value& a, const Value& b) {
    return a.storage_ == b.storage_;
  }
  // Total order used for sorting result rows: NULL < numbers < text.
  // Booleans, integers and floats compare numerically.
  friend bool operator<(const Value& a, const Value& b);

 private:
  Storage storage_;
};

}  // namespace qrw

#endif  // QRW_VALUE_H_
