#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "sqleq/oracle/oracle.hpp"
#include "sqleq/sql/parser.hpp"

namespace sqleq::oracle {

namespace {

bool close(const Value& a, const Value& b) {
  const bool ra = std::holds_alternative<double>(a);
  const bool rb = std::holds_alternative<double>(b);
  const bool na = ra || std::holds_alternative<std::int64_t>(a);
  const bool nb = rb || std::holds_alternative<std::int64_t>(b);
  if ((ra || rb) && na && nb) {
    const double x = ra ? std::get<double>(a) : static_cast<double>(std::get<std::int64_t>(a));
    const double y = rb ? std::get<double>(b) : static_cast<double>(std::get<std::int64_t>(b));
    if (x == y) return true;
    if (std::isnan(x) || std::isnan(y)) return std::isnan(x) && std::isnan(y);
    return std::fabs(x - y) <= 1e-9 * std::max(std::fabs(x), std::fabs(y));
  }
  return compare_values(a, b) == 0;
}

bool rows_equal(const Row& a, const Row& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!close(a[i], b[i])) return false;
  }
  return true;
}

bool row_less(const Row& a, const Row& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const Value& x, const Value& y) { return compare_values(x, y) < 0; });
}

bool lists_equal(const std::vector<Row>& a, const std::vector<Row>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!rows_equal(a[i], b[i])) return false;
  }
  return true;
}

std::string kind_of(const std::exception& e) {
  if (dynamic_cast<const UnsupportedFeature*>(&e)) return "UnsupportedFeature";
  if (dynamic_cast<const RuntimeExecError*>(&e)) return "RuntimeExecError";
  if (dynamic_cast<const plan::PlanError*>(&e)) return "PlanError";
  if (dynamic_cast<const sql::SyntaxError*>(&e)) return "SyntaxError";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "InternalError";
}

}  // namespace

Comparison compare_results(const ResultTable& a, const ResultTable& b) {
  Comparison c;
  if (a.arity() != b.arity()) {
    c.reason = "arity";
    return c;
  }
  if (a.rows.size() != b.rows.size()) {
    c.reason = "row count";
    return c;
  }
  if (a.ordered != b.ordered) c.warning = "only one query is ordered; compared as multisets";
  if (a.ordered && b.ordered) {
    if (lists_equal(a.rows, b.rows)) {
      c.identical = true;
      return c;
    }
    // Same bag in a different order is reported as an order difference.
    std::vector<Row> x = a.rows, y = b.rows;
    std::sort(x.begin(), x.end(), row_less);
    std::sort(y.begin(), y.end(), row_less);
    c.reason = lists_equal(x, y) ? "row order" : "rows";
    return c;
  }
  std::vector<Row> x = a.rows, y = b.rows;
  std::sort(x.begin(), x.end(), row_less);
  std::sort(y.begin(), y.end(), row_less);
  c.identical = lists_equal(x, y);
  if (!c.identical) c.reason = "rows";
  return c;
}

const char* to_string(OracleOutcome::Kind kind) {
  switch (kind) {
    case OracleOutcome::Kind::Refuted: return "Refuted";
    case OracleOutcome::Kind::Consistent: return "Consistent";
    case OracleOutcome::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

OracleOutcome oracle_check(const QueryPair& pair, const sql::SchemaDef& schema,
                           const std::vector<DatabaseInstance>& instances) {
  if (instances.empty()) throw InvalidInput("oracle_check needs at least one instance");
  OracleOutcome out;
  std::optional<plan::LogicalPlan> p1, p2;
  try {
    p1 = plan::build_plan(sql::parse_sql(pair.sql1), schema);
    p2 = plan::build_plan(sql::parse_sql(pair.sql2), schema);
  } catch (const Error& e) {
    out.kind = OracleOutcome::Kind::Inconclusive;
    out.issues.push_back({0, kind_of(e), e.what()});
    return out;
  }
  for (std::size_t i = 0; i < instances.size(); ++i) {
    try {
      const ResultTable r1 = execute(*p1, instances[i]);
      const ResultTable r2 = execute(*p2, instances[i]);
      const Comparison c = compare_results(r1, r2);
      if (!c.warning.empty()) out.warnings.push_back("instance " + std::to_string(i) + ": " + c.warning);
      if (!c.identical) {
        out.kind = OracleOutcome::Kind::Refuted;
        out.witness = i;
        out.reason = c.reason;
        return out;
      }
    } catch (const Error& e) {
      out.issues.push_back({i, kind_of(e), e.what()});
    }
  }
  out.kind = out.issues.empty() ? OracleOutcome::Kind::Consistent : OracleOutcome::Kind::Inconclusive;
  return out;
}

nlohmann::json outcome_to_json(const OracleOutcome& o) {
  nlohmann::json j = {{"outcome", to_string(o.kind)}};
  if (o.witness) j["witness"] = *o.witness;
  if (!o.reason.empty()) j["reason"] = o.reason;
  if (!o.issues.empty()) {
    j["issues"] = nlohmann::json::array();
    for (const OracleIssue& i : o.issues) {
      j["issues"].push_back({{"instance", i.instance}, {"kind", i.kind}, {"message", i.message}});
    }
  }
  if (!o.warnings.empty()) j["warnings"] = o.warnings;
  return j;
}

}  // namespace sqleq::oracle
