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

#include "qrw/value.h"

#include "qrw/kinterval.h"

namespace qrw {

std::optional<double> Value::ToDouble() const {
  if (is_bool()) return as_bool() ? 1.0 : 0.0;
  if (is_int()) return static_cast<double>(as_int());
  if (is_double()) return as_double_exact();
  return std::nullopt;
}

std::string Value::ToString() const {
  if (is_null()) return "NULL";
  if (is_bool()) return as_bool() ? "true" : "false";
  if (is_int()) return std::to_string(as_int());
  if (is_double()) return FormatDouble(as_double_exact());
  std::string out = "'";
  for (char c : as_text()) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

bool operator<(const Value& a, const Value& b) {
  auto rank = [](const Value& v) {
    if (v.is_null()) return 0;
    if (v.is_text()) return 2;
    return 1;
  };
  int ra = rank(a);
  int rb = rank(b);
  if (ra != rb) return ra < rb;
  if (ra == 0) return false;
  if (ra == 2) return a.as_text() < b.as_text();
  if (a.is_int() && b.is_int()) return a.as_int() < b.as_int();
  return *a.ToDouble() < *b.ToDouble();
}

}  // namespace qrw
