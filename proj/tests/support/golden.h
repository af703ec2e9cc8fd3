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

#ifndef QRW_TESTS_SUPPORT_GOLDEN_H_
#define QRW_TESTS_SUPPORT_GOLDEN_H_

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "support/fixtures.h"

namespace qrw::testing {

// Compares `actual` with tests/golden/<name>; QRW_UPDATE_GOLDEN=1 rewrites
// the file instead.
inline void ExpectGolden(const std::string& name, const std::string& actual) {
  const std::string path = std::string(QRW_GOLDEN_DIR) + "/" + name;
  const char* update = std::getenv("QRW_UPDATE_GOLDEN");
  if (update != nullptr && std::string(update) == "1") {
    std::filesystem::create_directories(
        std::filesystem::path(path).parent_path());
    std::ofstream(path) << actual;
    return;
  }
  ASSERT_TRUE(std::filesystem::exists(path))
      << path << " is missing; run with QRW_UPDATE_GOLDEN=1";
  EXPECT_EQ(ReadFile(path), actual) << "golden mismatch: " << path;
}

}  // namespace qrw::testing

#endif  // QRW_TESTS_SUPPORT_GOLDEN_H_
