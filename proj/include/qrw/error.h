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

#ifndef QRW_ERROR_H_
#define QRW_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qrw {

// Broad failure category. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
  kInvalidArgument,
  kParse,
  kBind,
  kRewrite,
  kBackend,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& message)
      : Error(ErrorKind::kInvalidArgument, message) {}
};

// Syntax error or unsupported construct. `position` is a byte offset into the
// query text, or npos when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(ErrorKind::kParse,
              position == std::string::npos
                  ? message
                  : message + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class BindError : public Error {
 public:
  explicit BindError(const std::string& message)
      : Error(ErrorKind::kBind, message) {}
};

class RewriteError : public Error {
 public:
  explicit RewriteError(const std::string& message)
      : Error(ErrorKind::kRewrite, message) {}
};

class BackendError : public Error {
 public:
  explicit BackendError(const std::string& message)
      : Error(ErrorKind::kBackend, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorKind::kIo, message) {}
};

}  // namespace qrw

#endif  // QRW_ERROR_H_
