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

#include "qrw/sql/catalog.h"

#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qrw/error.h"

namespace qrw {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

DataType ParseType(const json& column) {
  std::string type = column.at("type").get<std::string>();
  bool nullable = false;
  const std::string prefix = "optional<";
  if (type.rfind(prefix, 0) == 0 && type.back() == '>') {
    nullable = true;
    type = type.substr(prefix.size(), type.size() - prefix.size() - 1);
  }
  DataType t = DataType::Float();
  if (type == "integer" || type == "int" || type == "bigint") {
    t = DataType::Integer();
  } else if (type == "float" || type == "double" || type == "real") {
    t = DataType::Float();
  } else if (type == "boolean" || type == "bool") {
    t = DataType::Boolean();
  } else if (type == "text" || type == "string") {
    t = DataType::Text();
  } else {
    throw BindError("unknown column type '" + type + "'");
  }
  if (column.contains("values")) {
    const json& values = column.at("values");
    if (t.is_text()) {
      t = t.WithTextValues(values.get<std::vector<std::string>>());
    } else {
      t = t.WithRange(KInterval::FromValues(
          values.get<std::vector<double>>(),
          std::max<int>(KInterval::kDefaultCapacity,
                        static_cast<int>(values.size()))));
    }
  }
  if (column.contains("min") || column.contains("max")) {
    if (t.is_text()) throw BindError("min/max given for a text column");
    double lo = column.contains("min") ? column.at("min").get<double>() : -kInf;
    double hi = column.contains("max") ? column.at("max").get<double>() : kInf;
    if (lo > hi) throw BindError("min exceeds max");
    t = t.WithRange(Intersect(t.range(), KInterval::Closed(lo, hi)));
  }
  return t.WithNullable(nullable);
}

std::string TypeName(const DataType& t) {
  std::string name(TypeKindName(t.kind()));
  return t.nullable() ? "optional<" + name + ">" : name;
}

}  // namespace

Catalog Catalog::FromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw BindError(std::string("catalog is not valid JSON: ") + e.what());
  }
  Catalog catalog;
  try {
    for (const json& t : doc.at("tables")) {
      CatalogTable table;
      table.name = t.at("name").get<std::string>();
      std::vector<Column> columns;
      for (const json& c : t.at("columns")) {
        columns.push_back({c.at("name").get<std::string>(), ParseType(c)});
      }
      table.schema = Schema(std::move(columns));
      std::string visibility = t.value("visibility", "private");
      if (visibility == "public") {
        table.visibility = Visibility::kPublic;
      } else if (visibility == "private") {
        table.visibility = Visibility::kPrivate;
      } else {
        throw BindError("unknown visibility '" + visibility + "'");
      }
      if (t.contains("synthetic") && !t.at("synthetic").is_null()) {
        table.synthetic = t.at("synthetic").get<std::string>();
      }
      catalog.Add(std::move(table));
    }
  } catch (const json::exception& e) {
    throw BindError(std::string("malformed catalog: ") + e.what());
  }
  return catalog;
}

Catalog Catalog::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read catalog file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

std::string Catalog::ToJson() const {
  json tables = json::array();
  for (const auto& [name, t] : tables_) {
    json columns = json::array();
    for (const Column& c : t.schema.columns()) {
      json column = {{"name", c.name}, {"type", TypeName(c.type)}};
      if (c.type.is_text()) {
        if (c.type.text_values()) column["values"] = *c.type.text_values();
      } else if (!c.type.range().empty()) {
        if (c.type.range().IsPoints()) {
          column["values"] = c.type.range().Points();
        } else {
          if (std::isfinite(c.type.range().min())) {
            column["min"] = c.type.range().min();
          }
          if (std::isfinite(c.type.range().max())) {
            column["max"] = c.type.range().max();
          }
        }
      }
      columns.push_back(column);
    }
    json table = {{"name", name},
                  {"columns", columns},
                  {"visibility",
                   t.visibility == Visibility::kPublic ? "public" : "private"}};
    if (t.synthetic) table["synthetic"] = *t.synthetic;
    tables.push_back(table);
  }
  return json{{"tables", tables}}.dump(2);
}

void Catalog::Add(CatalogTable table) {
  if (tables_.count(table.name)) {
    throw BindError("duplicate table " + table.name);
  }
  std::string name = table.name;
  relations_[name] = Relation::Table(table.name, table.schema,
                                     table.visibility, table.synthetic);
  tables_.emplace(name, std::move(table));
}

const CatalogTable* Catalog::Find(std::string_view name) const {
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : &it->second;
}

const CatalogTable& Catalog::Get(std::string_view name) const {
  const CatalogTable* t = Find(name);
  if (!t) throw BindError("unknown table " + std::string(name));
  return *t;
}

RelationPtr Catalog::TableRelation(std::string_view name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) {
    throw BindError("unknown table " + std::string(name));
  }
  return it->second;
}

std::vector<std::string> Catalog::Names() const {
  std::vector<std::string> names;
  for (const auto& [name, t] : tables_) names.push_back(name);
  return names;
}

}  // namespace qrw
