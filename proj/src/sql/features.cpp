#include "sqleq/sql/features.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace sqleq::sql {

namespace {

class FeatureCounter {
 public:
  FeatureProfile profile;

  void query(const Query& q, std::size_t depth) {
    profile.nesting_depth = std::max(profile.nesting_depth, depth);
    profile.ctes += q.ctes.size();
    for (const Cte& cte : q.ctes) {
      if (q.recursive && references(*cte.query, cte.name)) ++profile.recursive_ctes;
      query(*cte.query, depth);
    }
    body(q.body, depth);
    profile.order_by_keys += q.order_by.size();
    for (const OrderItem& item : q.order_by) expr(item.expr, depth);
    if (q.limit) {
      ++profile.limit_clauses;
      expr(*q.limit, depth);
    }
    if (q.offset) expr(*q.offset, depth);
  }

 private:
  void body(const QueryBody& b, std::size_t depth) {
    if (const auto* core = std::get_if<SelectCore>(&b.node)) {
      select(*core, depth);
    } else if (const auto* op = std::get_if<SetOperation>(&b.node)) {
      ++profile.set_operators;
      body(*op->lhs, depth);
      body(*op->rhs, depth);
    } else {
      query(*std::get<NestedQuery>(b.node).query, depth);
    }
  }

  void select(const SelectCore& core, std::size_t depth) {
    for (const SelectItem& item : core.projection) expr(item.expr, depth);
    if (core.from.size() > 1) profile.joins += core.from.size() - 1;
    for (const TableRef& ref : core.from) table(ref, depth);
    if (core.where) expr(*core.where, depth);
    if (!core.group_by.empty()) ++profile.group_by_clauses;
    for (const Expr& e : core.group_by) expr(e, depth);
    if (core.having) expr(*core.having, depth);
  }

  void table(const TableRef& ref, std::size_t depth) {
    if (const auto* derived = std::get_if<DerivedTable>(&ref.node)) {
      ++profile.subqueries;
      query(*derived->query, depth + 1);
    } else if (const auto* join = std::get_if<JoinClause>(&ref.node)) {
      ++profile.joins;
      table(*join->left, depth);
      table(*join->right, depth);
      if (join->condition) expr(*join->condition, depth);
    }
  }

  void subquery(const Query& q, std::size_t depth) {
    ++profile.subqueries;
    query(q, depth + 1);
  }

  void expr(const Expr& e, std::size_t depth) {
    std::visit([&](const auto& n) { node(n, depth); }, e.node);
  }

  void node(const ColumnRef&, std::size_t) {}
  void node(const Literal&, std::size_t) {}
  void node(const Star&, std::size_t) {}
  void node(const Unary& n, std::size_t d) { expr(*n.operand, d); }
  void node(const Binary& n, std::size_t d) {
    expr(*n.lhs, d);
    expr(*n.rhs, d);
  }
  void node(const IsNull& n, std::size_t d) { expr(*n.operand, d); }
  void node(const Between& n, std::size_t d) {
    expr(*n.operand, d);
    expr(*n.low, d);
    expr(*n.high, d);
  }
  void node(const Like& n, std::size_t d) {
    expr(*n.operand, d);
    expr(*n.pattern, d);
  }
  void node(const InList& n, std::size_t d) {
    expr(*n.operand, d);
    for (const Expr& item : n.items) expr(item, d);
  }
  void node(const InSubquery& n, std::size_t d) {
    expr(*n.operand, d);
    subquery(*n.query, d);
  }
  void node(const Exists& n, std::size_t d) { subquery(*n.query, d); }
  void node(const ScalarSubquery& n, std::size_t d) { subquery(*n.query, d); }
  void node(const Quantified& n, std::size_t d) {
    expr(*n.lhs, d);
    if (n.rhs_query) subquery(**n.rhs_query, d);
    if (n.rhs_expr) expr(**n.rhs_expr, d);
  }
  void node(const Case& n, std::size_t d) {
    ++profile.case_expressions;
    if (n.operand) expr(**n.operand, d);
    for (const WhenClause& w : n.whens) {
      expr(w.condition, d);
      expr(w.result, d);
    }
    if (n.otherwise) expr(**n.otherwise, d);
  }
  void node(const Function& n, std::size_t d) {
    if (is_aggregate_name(n.name)) {
      ++profile.aggregate_calls;
    } else {
      ++profile.scalar_function_calls;
    }
    for (const Expr& a : n.args) expr(a, d);
  }
  void node(const Cast& n, std::size_t d) { expr(*n.operand, d); }
  void node(const ArrayCtor& n, std::size_t d) {
    for (const Expr& item : n.items) expr(item, d);
  }

  // Does `q` mention a relation called `name` anywhere in a FROM clause?
  static bool references(const Query& q, const std::string& name);
  static bool references(const QueryBody& b, const std::string& name);
  static bool references(const TableRef& r, const std::string& name);
};

bool FeatureCounter::references(const TableRef& r, const std::string& name) {
  if (const auto* t = std::get_if<NamedTable>(&r.node)) return t->name == name;
  if (const auto* d = std::get_if<DerivedTable>(&r.node)) return references(*d->query, name);
  const auto& j = std::get<JoinClause>(r.node);
  return references(*j.left, name) || references(*j.right, name);
}

bool FeatureCounter::references(const QueryBody& b, const std::string& name) {
  if (const auto* core = std::get_if<SelectCore>(&b.node)) {
    return std::any_of(core->from.begin(), core->from.end(),
                       [&](const TableRef& r) { return references(r, name); });
  }
  if (const auto* op = std::get_if<SetOperation>(&b.node)) {
    return references(*op->lhs, name) || references(*op->rhs, name);
  }
  return references(*std::get<NestedQuery>(b.node).query, name);
}

bool FeatureCounter::references(const Query& q, const std::string& name) {
  for (const Cte& cte : q.ctes) {
    if (references(*cte.query, name)) return true;
  }
  return references(q.body, name);
}

}  // namespace

FeatureProfile extract_features(const SqlAst& ast) {
  if (ast.partial) {
    throw PartialAst("cannot profile a partial AST (unrecognized clause at offset " +
                     std::to_string(ast.opaque_offset) + ")");
  }
  FeatureCounter counter;
  counter.query(ast.root, 1);
  return counter.profile;
}

nlohmann::json features_to_json(const FeatureProfile& p) {
  const std::size_t values[] = {p.joins,          p.subqueries,   p.ctes,
                                p.aggregate_calls, p.group_by_clauses, p.order_by_keys,
                                p.limit_clauses,  p.set_operators, p.scalar_function_calls,
                                p.case_expressions, p.recursive_ctes, p.nesting_depth};
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t i = 0; i < kFeatureKeys.size(); ++i) out[std::string(kFeatureKeys[i])] = values[i];
  return out;
}

}  // namespace sqleq::sql
