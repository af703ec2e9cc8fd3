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

#ifndef QRW_SQL_BINDER_H_
#define QRW_SQL_BINDER_H_

#include <string>
#include <string_view>
#include <vector>

#include "qrw/relation.h"
#include "qrw/sql/ast.h"
#include "qrw/sql/catalog.h"

namespace qrw {

struct OrderBy {
  std::string column;
  bool descending = false;

  friend bool operator==(const OrderBy&, const OrderBy&) = default;
};

// A bound query: the relation plus the top-level ORDER BY, which is kept
// only as a rendering hint.
struct BoundQuery {
  RelationPtr relation;
  std::vector<OrderBy> order_by;
};

// Lowers a syntax tree to a Relation graph. The result is canonical: a
// SELECT ... WHERE ... LIMIT becomes one Map (omitted when it would be the
// identity), an aggregation becomes a Reduce with a Map below it when WHERE
// or computed keys/arguments are present and a Map above it when the select
// list computes over aggregates or HAVING/LIMIT are present. Throws
// BindError.
BoundQuery Bind(const sql::Query& query, const Catalog& catalog);

// Parse + Bind.
BoundQuery BindSql(std::string_view sql, const Catalog& catalog);

}  // namespace qrw

#endif  // QRW_SQL_BINDER_H_
