#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "sqleq/error.hpp"
#include "sqleq/sql/ast.hpp"

namespace sqleq::sql {

class PartialAst : public Error {
 public:
  using Error::Error;
};

/// Occurrence counts of SQL features in one statement.
///
/// Counting rules:
///  - joins: explicit JOIN clauses plus every extra comma-separated FROM item
///  - subqueries: scalar, IN, EXISTS, quantified and derived-table subqueries
///    (CTE bodies are not subqueries)
///  - aggregate_calls / scalar_function_calls: per call site; COALESCE is a
///    scalar function
///  - group_by_clauses / limit_clauses: one per clause present
///  - order_by_keys: every ORDER BY item at every level, CTEs included
///  - recursive_ctes: CTEs of a WITH RECURSIVE that reference themselves
///  - nesting_depth: maximum SELECT depth; the statement itself and CTE
///    bodies are depth 1, each subquery adds one
struct FeatureProfile {
  std::size_t joins = 0;
  std::size_t subqueries = 0;
  std::size_t ctes = 0;
  std::size_t aggregate_calls = 0;
  std::size_t group_by_clauses = 0;
  std::size_t order_by_keys = 0;
  std::size_t limit_clauses = 0;
  std::size_t set_operators = 0;
  std::size_t scalar_function_calls = 0;
  std::size_t case_expressions = 0;
  std::size_t recursive_ctes = 0;
  std::size_t nesting_depth = 0;

  bool operator==(const FeatureProfile&) const = default;
};

/// Stable key order used for JSON output and averaging.
inline constexpr std::array<std::string_view, 12> kFeatureKeys = {
    "joins",          "subqueries",   "ctes",          "aggregate_calls",
    "group_by_clauses", "order_by_keys", "limit_clauses", "set_operators",
    "scalar_function_calls", "case_expressions", "recursive_ctes", "nesting_depth"};

/// Throws PartialAst when the lenient parser flagged unknown clauses.
FeatureProfile extract_features(const SqlAst& ast);

nlohmann::json features_to_json(const FeatureProfile& profile);

}  // namespace sqleq::sql
