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

#include "sql/lexer.h"

#include <cctype>

#include "qrw/error.h"

namespace qrw::sql {
namespace {

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool IsIdentChar(char c) {
  return IsIdentStart(c) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '$';
}

bool IsDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<Token> Tokenize(std::string_view sql) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = sql.size();
  while (i < n) {
    char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
      while (i < n && sql[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
      std::size_t end = sql.find("*/", i + 2);
      if (end == std::string_view::npos) {
        throw ParseError("unterminated comment", i);
      }
      i = end + 2;
      continue;
    }
    Token t;
    t.position = i;
    if (IsIdentStart(c)) {
      std::size_t start = i;
      while (i < n && IsIdentChar(sql[i])) ++i;
      t.kind = Token::Kind::kIdentifier;
      for (char ch : sql.substr(start, i - start)) {
        t.text += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      }
    } else if (c == '"' || c == '\'') {
      const char quote = c;
      ++i;
      while (true) {
        if (i >= n) {
          throw ParseError(quote == '"' ? "unterminated quoted identifier"
                                        : "unterminated string literal",
                           t.position);
        }
        if (sql[i] == quote) {
          if (i + 1 < n && sql[i + 1] == quote) {
            t.text += quote;
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        t.text += sql[i++];
      }
      t.kind = quote == '"' ? Token::Kind::kQuoted : Token::Kind::kString;
      if (quote == '"' && t.text.empty()) {
        throw ParseError("empty quoted identifier", t.position);
      }
    } else if (IsDigit(c) || (c == '.' && i + 1 < n && IsDigit(sql[i + 1]))) {
      std::size_t start = i;
      bool is_float = false;
      while (i < n && IsDigit(sql[i])) ++i;
      if (i < n && sql[i] == '.') {
        is_float = true;
        ++i;
        while (i < n && IsDigit(sql[i])) ++i;
      }
      if (i < n && (sql[i] == 'e' || sql[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (sql[j] == '+' || sql[j] == '-')) ++j;
        if (j < n && IsDigit(sql[j])) {
          is_float = true;
          i = j;
          while (i < n && IsDigit(sql[i])) ++i;
        }
      }
      if (i < n && IsIdentStart(sql[i])) {
        throw ParseError("malformed number", start);
      }
      t.kind = is_float ? Token::Kind::kFloat : Token::Kind::kInteger;
      t.text = std::string(sql.substr(start, i - start));
    } else {
      static const char* kTwoChar[] = {"<=", ">=", "<>", "!=", "||"};
      t.kind = Token::Kind::kSymbol;
      for (const char* op : kTwoChar) {
        if (sql.substr(i, 2) == op) {
          t.text = op;
          break;
        }
      }
      if (t.text.empty()) {
        static const std::string_view kOneChar = "=<>+-*/%(),.;";
        if (kOneChar.find(c) == std::string_view::npos) {
          throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
        t.text = std::string(1, c);
      }
      if (t.text == "!=") t.text = "<>";
      i += t.text.size();
    }
    tokens.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::Kind::kEnd;
  end.position = n;
  tokens.push_back(end);
  return tokens;
}

}  // namespace qrw::sql
