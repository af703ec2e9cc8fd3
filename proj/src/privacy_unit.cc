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

#include "qrw/privacy_unit.h"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qrw/error.h"

namespace qrw {
namespace {

using nlohmann::json;

const Column& RequireColumn(const Catalog& catalog, const std::string& table,
                            const std::string& column) {
  const CatalogTable& t = catalog.Get(table);
  auto index = t.schema.Find(column);
  if (!index) {
    throw BindError("privacy unit: table " + table + " has no column " +
                    column);
  }
  return t.schema[*index];
}

bool Comparable(const DataType& a, const DataType& b) {
  return (a.is_text() && b.is_text()) || (!a.is_text() && !b.is_text());
}

}  // namespace

PrivacyUnitDefinition::PrivacyUnitDefinition(
    std::vector<PrivacyUnitEntry> entries, const Catalog& catalog)
    : entries_(std::move(entries)) {
  std::set<std::string> seen;
  for (const PrivacyUnitEntry& e : entries_) {
    if (!catalog.Find(e.table)) {
      throw BindError("privacy unit: unknown table " + e.table);
    }
    if (!seen.insert(e.table).second) {
      throw BindError("privacy unit: table " + e.table + " appears twice");
    }
    std::set<std::string> visited = {e.table};
    std::string current = e.table;
    for (const PathStep& step : e.path) {
      if (!catalog.Find(step.to_table)) {
        throw BindError("privacy unit: path of " + e.table +
                        " refers to unknown table " + step.to_table);
      }
      const Column& from = RequireColumn(catalog, current, step.referring);
      const Column& to = RequireColumn(catalog, step.to_table, step.referred);
      if (!Comparable(from.type, to.type)) {
        throw BindError("privacy unit: " + current + "." + step.referring +
                        " and " + step.to_table + "." + step.referred +
                        " have incompatible types");
      }
      if (!visited.insert(step.to_table).second) {
        throw BindError("privacy unit: path of " + e.table +
                        " has a cycle through " + step.to_table);
      }
      current = step.to_table;
    }
    RequireColumn(catalog, current, e.pid);
  }
}

PrivacyUnitDefinition PrivacyUnitDefinition::FromJson(std::string_view text,
                                                      const Catalog& catalog) {
  std::vector<PrivacyUnitEntry> entries;
  try {
    json doc = json::parse(text);
    if (!doc.is_array()) throw BindError("privacy unit: expected a JSON array");
    for (const json& e : doc) {
      PrivacyUnitEntry entry;
      entry.table = e.at("table").get<std::string>();
      entry.pid = e.at("pid").get<std::string>();
      for (const json& s : e.at("path")) {
        entry.path.push_back({s.at("referring").get<std::string>(),
                              s.at("to_table").get<std::string>(),
                              s.at("referred").get<std::string>()});
      }
      entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw BindError(std::string("privacy unit: ") + e.what());
  }
  return PrivacyUnitDefinition(std::move(entries), catalog);
}

PrivacyUnitDefinition PrivacyUnitDefinition::FromFile(const std::string& path,
                                                      const Catalog& catalog) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str(), catalog);
}

std::string PrivacyUnitDefinition::ToJson() const {
  json doc = json::array();
  for (const PrivacyUnitEntry& e : entries_) {
    json path = json::array();
    for (const PathStep& s : e.path) {
      path.push_back({{"referring", s.referring},
                      {"to_table", s.to_table},
                      {"referred", s.referred}});
    }
    doc.push_back({{"table", e.table}, {"path", path}, {"pid", e.pid}});
  }
  return doc.dump(2);
}

const PrivacyUnitEntry* PrivacyUnitDefinition::Find(
    std::string_view table) const {
  for (const PrivacyUnitEntry& e : entries_) {
    if (e.table == table) return &e;
  }
  return nullptr;
}

std::optional<std::string> PidSourceColumn(const PrivacyUnitEntry& entry) {
  if (entry.path.empty()) return entry.pid;
  if (entry.path.size() == 1 && entry.path[0].referred == entry.pid) {
    return entry.path[0].referring;
  }
  return std::nullopt;
}

RelationPtr AttachPid(const RelationPtr& table,
                      const PrivacyUnitDefinition& definition,
                      const Catalog& catalog) {
  if (table->kind() != Relation::Kind::kTable) {
    throw RewriteError("privacy ids can only be attached to tables");
  }
  const PrivacyUnitEntry* entry = definition.Find(table->table().name);
  if (entry == nullptr) {
    throw RewriteError("table " + table->table().name +
                       " has no privacy unit definition");
  }
  const Schema& schema = table->schema();
  std::vector<NamedExpr> projections;
  if (entry->path.empty()) {
    for (const Column& c : schema.columns()) {
      projections.push_back({c.name, Col(c.name)});
    }
    Expr pid = Col(entry->pid);
    projections.push_back({kPidColumn, Call(Function::kCastText, {pid})});
    return Relation::Map(std::move(projections),
                         Call(Function::kIsNotNull, {pid}), std::nullopt,
                         table);
  }
  // table AS _pu0 JOIN to_1 AS _pu1 ON ... JOIN to_2 AS _pu2 ON ...
  auto alias = [](std::size_t i) { return "_pu" + std::to_string(i); };
  RelationPtr chain;
  for (std::size_t i = 0; i < entry->path.size(); ++i) {
    const PathStep& step = entry->path[i];
    Expr on = Call(Function::kEq,
                   {Col(JoinColumnName(alias(i), step.referring)),
                    Col(JoinColumnName(alias(i + 1), step.referred))});
    RelationPtr next = catalog.TableRelation(step.to_table);
    chain = i == 0 ? Relation::Join(JoinKind::kInner, on, alias(0), alias(1),
                                    table, next)
                   : Relation::Join(JoinKind::kInner, on, "", alias(i + 1),
                                    chain, next);
  }
  for (const Column& c : schema.columns()) {
    projections.push_back({c.name, Col(JoinColumnName(alias(0), c.name))});
  }
  Expr pid = Col(JoinColumnName(alias(entry->path.size()), entry->pid));
  projections.push_back({kPidColumn, Call(Function::kCastText, {pid})});
  return Relation::Map(std::move(projections),
                       Call(Function::kIsNotNull, {pid}), std::nullopt, chain);
}

}  // namespace qrw
