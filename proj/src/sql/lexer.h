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

#ifndef QRW_SRC_SQL_LEXER_H_
#define QRW_SRC_SQL_LEXER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qrw::sql {

struct Token {
  enum class Kind {
    kIdentifier,  // unquoted, lower-cased
    kQuoted,      // "double quoted", case preserved
    kInteger,
    kFloat,
    kString,
    kSymbol,
    kEnd,
  };
  Kind kind = Kind::kEnd;
  std::string text;
  std::size_t position = 0;
};

// Splits SQL text into tokens, skipping whitespace and comments. Throws
// ParseError on unterminated literals and stray characters.
std::vector<Token> Tokenize(std::string_view sql);

}  // namespace qrw::sql

#endif  // QRW_SRC_SQL_LEXER_H_
