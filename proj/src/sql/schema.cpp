#include "sqleq/sql/schema.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace sqleq::sql {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

const TableDef* SchemaDef::find_table(std::string_view name) const {
  for (const TableDef& t : tables) {
    if (iequals(t.name, name)) return &t;
  }
  return nullptr;
}

std::vector<std::string> SchemaDef::primary_key_of(std::string_view table) const {
  std::vector<std::string> out;
  for (const ColumnPath& pk : primary_keys) {
    if (iequals(pk.table, table)) out.push_back(pk.column);
  }
  return out;
}

namespace {

void check_path(const SchemaDef& schema, const ColumnPath& path, const char* what) {
  const TableDef* table = schema.find_table(path.table);
  if (!table) throw SchemaError(std::string(what) + " references unknown table '" + path.table + "'");
  const bool found = std::any_of(table->columns.begin(), table->columns.end(),
                                 [&](const std::string& c) { return iequals(c, path.column); });
  if (!found) {
    throw SchemaError(std::string(what) + " references unknown column '" + path.str() + "'");
  }
}

ColumnPath parse_path(const std::string& text) {
  const std::size_t dot = text.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == text.size()) {
    throw SchemaError("expected table.column, got '" + text + "'");
  }
  return ColumnPath{text.substr(0, dot), text.substr(dot + 1)};
}

std::string bracket(const std::vector<std::string>& items) {
  std::string out = "[ ";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out + " ]";
}

}  // namespace

void SchemaDef::validate() const {
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (tables[i].name.empty()) throw SchemaError("table with empty name");
    if (tables[i].columns.empty()) throw SchemaError("table '" + tables[i].name + "' has no columns");
    for (std::size_t j = 0; j < i; ++j) {
      if (iequals(tables[i].name, tables[j].name)) {
        throw SchemaError("duplicate table name '" + tables[i].name + "'");
      }
    }
  }
  for (const ForeignKey& fk : foreign_keys) {
    check_path(*this, fk.from, "foreign key");
    check_path(*this, fk.to, "foreign key");
  }
  for (const ColumnPath& pk : primary_keys) check_path(*this, pk, "primary key");
}

SchemaDef schema_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("schema must be a JSON object");
  SchemaDef schema;
  try {
    for (const auto& t : j.at("tables")) {
      TableDef table;
      table.name = t.at("name").get<std::string>();
      for (const auto& c : t.at("columns")) table.columns.push_back(c.get<std::string>());
      schema.tables.push_back(std::move(table));
    }
    if (j.contains("foreign_keys")) {
      for (const auto& fk : j.at("foreign_keys")) {
        if (!fk.is_array() || fk.size() != 2) throw SchemaError("foreign key must be a [from, to] pair");
        schema.foreign_keys.push_back(
            ForeignKey{parse_path(fk[0].get<std::string>()), parse_path(fk[1].get<std::string>())});
      }
    }
    if (j.contains("primary_keys")) {
      for (const auto& pk : j.at("primary_keys")) schema.primary_keys.push_back(parse_path(pk.get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed schema: ") + e.what());
  }
  schema.validate();
  return schema;
}

nlohmann::json schema_to_json(const SchemaDef& schema) {
  nlohmann::json j;
  j["tables"] = nlohmann::json::array();
  for (const TableDef& t : schema.tables) j["tables"].push_back({{"name", t.name}, {"columns", t.columns}});
  j["foreign_keys"] = nlohmann::json::array();
  for (const ForeignKey& fk : schema.foreign_keys) j["foreign_keys"].push_back({fk.from.str(), fk.to.str()});
  j["primary_keys"] = nlohmann::json::array();
  for (const ColumnPath& pk : schema.primary_keys) j["primary_keys"].push_back(pk.str());
  return j;
}

SchemaDef load_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open schema file '" + path + "'");
  try {
    return schema_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("schema file '" + path + "' is not valid JSON: " + e.what());
  }
}

std::string serialize_schema(const SchemaDef& schema) {
  std::ostringstream out;
  for (const TableDef& t : schema.tables) {
    std::vector<std::string> cols{"*"};
    cols.insert(cols.end(), t.columns.begin(), t.columns.end());
    out << "Table " << t.name << ", columns = " << bracket(cols) << "\n";
  }
  std::vector<std::string> fks;
  for (const ForeignKey& fk : schema.foreign_keys) fks.push_back(fk.from.str() + " = " + fk.to.str());
  std::vector<std::string> pks;
  for (const ColumnPath& pk : schema.primary_keys) pks.push_back(pk.str());
  out << "\nForeign_keys = " << bracket(fks) << "\nPrimary_keys = " << bracket(pks);
  return out.str();
}

}  // namespace sqleq::sql
