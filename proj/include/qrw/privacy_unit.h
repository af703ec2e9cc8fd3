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

#ifndef QRW_PRIVACY_UNIT_H_
#define QRW_PRIVACY_UNIT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrw/relation.h"
#include "qrw/sql/catalog.h"

namespace qrw {

// Name of the synthesized privacy-id column.
inline constexpr char kPidColumn[] = "_PRIVACY_UNIT_";

// `referring` (a column of the previous table in the path) equals
// `referred` (a column of `to_table`).
struct PathStep {
  std::string referring;
  std::string to_table;
  std::string referred;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

// The rows of `table` belong to the privacy unit found by following `path`;
// `pid` is a column of the last table on the path (of `table` itself when
// the path is empty).
struct PrivacyUnitEntry {
  std::string table;
  std::vector<PathStep> path;
  std::string pid;
};

class PrivacyUnitDefinition {
 public:
  PrivacyUnitDefinition() = default;

  // Validates every entry against the catalog. Throws BindError.
  PrivacyUnitDefinition(std::vector<PrivacyUnitEntry> entries,
                        const Catalog& catalog);

  // JSON form:
  //   [{"table": ..., "path": [{"referring": ..., "to_table": ...,
  //                             "referred": ...}], "pid": ...}]
  static PrivacyUnitDefinition FromJson(std::string_view json,
                                        const Catalog& catalog);
  static PrivacyUnitDefinition FromFile(const std::string& path,
                                        const Catalog& catalog);
  std::string ToJson() const;

  const std::vector<PrivacyUnitEntry>& entries() const { return entries_; }
  const PrivacyUnitEntry* Find(std::string_view table) const;

 private:
  std::vector<PrivacyUnitEntry> entries_;
};

// The table's rows with their privacy id appended as kPidColumn (cast to
// text). The owner is reached through a chain of inner joins; rows without
// an owner are dropped. Throws RewriteError when the table has no entry.
RelationPtr AttachPid(const RelationPtr& table,
                      const PrivacyUnitDefinition& definition,
                      const Catalog& catalog);

// Column of `table` whose value equals the privacy id, when there is one
// (the pid column itself, or the referring column of a one-step path).
std::optional<std::string> PidSourceColumn(const PrivacyUnitEntry& entry);

}  // namespace qrw

#endif  // QRW_PRIVACY_UNIT_H_
