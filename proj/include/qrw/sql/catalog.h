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

#ifndef QRW_SQL_CATALOG_H_
#define QRW_SQL_CATALOG_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrw/data_type.h"
#include "qrw/relation.h"

namespace qrw {

struct CatalogTable {
  std::string name;
  Schema schema;
  Visibility visibility = Visibility::kPrivate;
  std::optional<std::string> synthetic;
};

// Known tables with their schemas (including declared value ranges).
class Catalog {
 public:
  Catalog() = default;

  // Parses the JSON catalog format:
  //   {"tables": [{"name": ..., "visibility": "public" | "private",
  //                "synthetic": ..., "columns": [{"name": ..., "type": ...,
  //                "min": ..., "max": ..., "values": [...]}]}]}
  // Types are boolean, integer, float or text, optionally wrapped as
  // optional<...> for nullable columns.
  static Catalog FromJson(std::string_view json);
  static Catalog FromFile(const std::string& path);
  std::string ToJson() const;

  // Throws BindError if the name is taken.
  void Add(CatalogTable table);

  const CatalogTable* Find(std::string_view name) const;
  const CatalogTable& Get(std::string_view name) const;

  // The shared Table node for `name`.
  RelationPtr TableRelation(std::string_view name) const;

  std::vector<std::string> Names() const;

 private:
  std::map<std::string, CatalogTable, std::less<>> tables_;
  std::map<std::string, RelationPtr, std::less<>> relations_;
};

}  // namespace qrw

#endif  // QRW_SQL_CATALOG_H_
