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

#ifndef QRW_SQL_RENDERER_H_
#define QRW_SQL_RENDERER_H_

#include <string>
#include <string_view>
#include <vector>

#include "qrw/expr.h"
#include "qrw/relation.h"
#include "qrw/sql/binder.h"

namespace qrw {

// Spelling of the engine-specific primitives.
struct Dialect {
  std::string name;
  std::string uniform;  // a fresh U[0, 1) draw per evaluation
  std::string ln;
  std::string log10;
  std::string sqrt;
  std::string least;
  std::string greatest;
  std::string variance;
  std::string stddev;
  std::string float_type;
  std::string integer_type;
  std::string text_type;
  // Without native RIGHT/FULL JOIN the renderer emulates them with LEFT
  // JOINs.
  bool right_full_joins = true;

  static const Dialect& Generic();
  static const Dialect& Postgres();
  static const Dialect& Embedded();
  // "generic", "postgres" or "embedded"; throws InvalidArgumentError.
  static const Dialect& ByName(std::string_view name);
};

// SQL text of an expression whose columns are referenced unqualified.
std::string RenderExpr(const Expr& expr, const Dialect& dialect);

// One statement: every non-table node becomes a CTE named after its
// structural hash, listed in topological order, followed by
// SELECT * FROM <root>. Maps that draw random numbers are materialized so
// each row gets its own draw.
std::string Render(const RelationPtr& root,
                   const Dialect& dialect = Dialect::Generic(),
                   const std::vector<OrderBy>& order_by = {});

}  // namespace qrw

#endif  // QRW_SQL_RENDERER_H_
