#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sqleq/error.hpp"
#include "sqleq/plan/logical_plan.hpp"
#include "sqleq/sql/ast.hpp"
#include "sqleq/sql/schema.hpp"
#include "sqleq/types.hpp"

namespace sqleq::oracle {

class ExecError : public Error {
 public:
  using Error::Error;
};

/// Recursive CTEs, window functions, arrays, unknown functions.
class UnsupportedFeature : public ExecError {
 public:
  using ExecError::ExecError;
};

/// Data-dependent failure, e.g. a scalar subquery yielding two rows.
class RuntimeExecError : public ExecError {
 public:
  using ExecError::ExecError;
};

using Null = std::monostate;
using Value = std::variant<Null, bool, std::int64_t, double, std::string>;
using Row = std::vector<Value>;

inline bool is_null(const Value& v) { return std::holds_alternative<Null>(v); }

/// Total order used by Sort, grouping and result comparison:
/// null < booleans < numbers < text. Integers and reals compare by value.
int compare_values(const Value& a, const Value& b);
std::string to_string(const Value& v);
nlohmann::json value_to_json(const Value& v);
Value value_from_json(const nlohmann::json& j);

struct TableData {
  std::vector<std::string> columns;  // schema order
  std::vector<Row> rows;
};

/// Rows for every schema table; tables absent from the file are empty.
struct DatabaseInstance {
  sql::SchemaDef schema;
  std::map<std::string, TableData> tables;  // keyed by lower-cased name

  const TableData* find(std::string_view name) const;
};

/// {tables:{name:{columns:[...], rows:[[...]]}}}. Columns may be listed in
/// any order but must be exactly the schema's. Throws InvalidInput on arity,
/// unknown table/column, or primary-key violations (duplicates or nulls).
DatabaseInstance instance_from_json(const nlohmann::json& j, const sql::SchemaDef& schema);
DatabaseInstance load_instance_file(const std::string& path, const sql::SchemaDef& schema);
nlohmann::json instance_to_json(const DatabaseInstance& db);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<Row> rows;
  bool ordered = false;

  std::size_t arity() const { return columns.size(); }
};

ResultTable execute(const plan::LogicalPlan& plan, const DatabaseInstance& db);
/// Plans against db.schema, then executes.
ResultTable execute(const sql::SqlAst& ast, const DatabaseInstance& db);

struct Comparison {
  bool identical = false;
  std::string reason;   // "arity", "row count", "row order", "rows" when different
  std::string warning;  // set when only one side is ordered
};

/// Positional, column names ignored. Both ordered: lists must match;
/// otherwise bags. Null equals null; reals within relative 1e-9.
Comparison compare_results(const ResultTable& a, const ResultTable& b);

struct OracleIssue {
  std::size_t instance = 0;
  std::string kind;  // "UnsupportedFeature", "RuntimeExecError", "PlanError", "SyntaxError", ...
  std::string message;
};

struct OracleOutcome {
  enum class Kind { Refuted, Consistent, Inconclusive };
  Kind kind = Kind::Consistent;
  std::optional<std::size_t> witness;  // Refuted only
  std::string reason;
  std::vector<OracleIssue> issues;
  std::vector<std::string> warnings;
};

const char* to_string(OracleOutcome::Kind kind);

/// Runs both queries on every instance. First Different refutes; otherwise
/// any error makes the outcome Inconclusive.
OracleOutcome oracle_check(const QueryPair& pair, const sql::SchemaDef& schema,
                           const std::vector<DatabaseInstance>& instances);

nlohmann::json outcome_to_json(const OracleOutcome& outcome);

}  // namespace sqleq::oracle
