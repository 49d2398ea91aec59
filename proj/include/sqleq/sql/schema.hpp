#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sqleq/error.hpp"

namespace sqleq::sql {

class SchemaError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// `table.column` as written in the schema file.
struct ColumnPath {
  std::string table;
  std::string column;
  bool operator==(const ColumnPath&) const = default;
  std::string str() const { return table + "." + column; }
};

struct TableDef {
  std::string name;
  std::vector<std::string> columns;
  bool operator==(const TableDef&) const = default;
};

struct ForeignKey {
  ColumnPath from;
  ColumnPath to;
  bool operator==(const ForeignKey&) const = default;
};

/// Database schema: tables in declaration order plus key constraints.
///
/// Invariants (checked by validate()): table names are unique ignoring case,
/// every table has at least one column, and every key names an existing
/// table.column.
struct SchemaDef {
  std::vector<TableDef> tables;
  std::vector<ForeignKey> foreign_keys;
  std::vector<ColumnPath> primary_keys;

  bool operator==(const SchemaDef&) const = default;

  /// Case-insensitive table lookup.
  const TableDef* find_table(std::string_view name) const;
  /// Primary-key column names declared for `table` (case-insensitive match).
  std::vector<std::string> primary_key_of(std::string_view table) const;

  void validate() const;
};

/// Parses `{tables:[{name, columns[]}], foreign_keys:[["t.c","t.c"]],
/// primary_keys:["t.c"]}` and validates the result.
SchemaDef schema_from_json(const nlohmann::json& j);
nlohmann::json schema_to_json(const SchemaDef& schema);
SchemaDef load_schema_file(const std::string& path);

/// Prompt block for the schema section:
///
///     Table T, columns = [ *, a, b ]
///
///     Foreign_keys = [ T1.x = T2.y ]
///     Primary_keys = [ T.a ]
///
/// No trailing newline.
std::string serialize_schema(const SchemaDef& schema);

bool iequals(std::string_view a, std::string_view b);

}  // namespace sqleq::sql
