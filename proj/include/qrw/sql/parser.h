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

#ifndef QRW_SQL_PARSER_H_
#define QRW_SQL_PARSER_H_

#include <string_view>

#include "qrw/sql/ast.h"

namespace qrw::sql {

// Parses one SELECT statement (optionally followed by a semicolon). Throws
// ParseError with the byte offset of the offending token, including for
// recognized but unsupported constructs such as window functions.
Query Parse(std::string_view sql);

// Parses a standalone scalar expression.
AstExprPtr ParseExpression(std::string_view sql);

}  // namespace qrw::sql

#endif  // QRW_SQL_PARSER_H_
