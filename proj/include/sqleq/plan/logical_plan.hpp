#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqleq/error.hpp"
#include "sqleq/sql/ast.hpp"
#include "sqleq/sql/schema.hpp"

namespace sqleq::plan {

class PlanError : public Error {
 public:
  using Error::Error;
};

class UnresolvedName : public PlanError {
 public:
  explicit UnresolvedName(const std::string& name)
      : PlanError("unresolved name '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class AmbiguousColumn : public PlanError {
 public:
  explicit AmbiguousColumn(const std::string& name)
      : PlanError("ambiguous column reference '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

struct PlanNode;

enum class ExprKind {
  Column,
  Literal,
  Unary,
  Binary,
  IsNull,
  Between,
  Like,
  InList,
  Case,
  Function,
  Cast,
  Array,
  QuantifiedArray,
  Subquery,
};

enum class SubqueryKind { Scalar, Exists, In, Quantified };

/// Bound scalar expression. Column references are resolved to a slot in the
/// row of the operator evaluating the expression (`level` 0) or of an
/// enclosing query (`level` n for the n-th enclosing row).
///
/// Child layout per kind:
///   Unary, IsNull, Cast          [operand]
///   Binary, QuantifiedArray      [lhs, rhs]
///   Between                      [operand, low, high]
///   Like                         [operand, pattern]
///   InList                       [operand, items...]
///   Case                         [operand if has_operand] when, then, ... [else if has_else]
///   Function, Array              args
///   Subquery                     [operand] for In and Quantified, else none
struct ScalarExpr {
  ExprKind kind = ExprKind::Literal;

  std::size_t level = 0;
  std::size_t index = 0;
  std::string label;  // display text of a column slot

  sql::Literal literal;
  sql::UnaryOp unary_op = sql::UnaryOp::Neg;
  sql::BinaryOp binary_op = sql::BinaryOp::Eq;
  sql::Quantifier quantifier = sql::Quantifier::Any;
  SubqueryKind subquery = SubqueryKind::Scalar;

  bool negated = false;
  bool case_insensitive = false;
  bool distinct = false;
  bool star = false;
  bool has_operand = false;
  bool has_else = false;
  bool correlated = false;  // subquery reads a row of some enclosing query

  std::string name;  // function name (lower case) or cast target type
  std::optional<std::string> window;

  std::vector<ScalarExpr> children;
  std::shared_ptr<const PlanNode> plan;

  /// Structural equality; display labels are ignored and subquery plans
  /// compare by identity.
  bool operator==(const ScalarExpr& other) const;
};

enum class OpKind { Scan, Values, Filter, Project, Join, Aggregate, Sort, Limit, SetOp, CteBind, CteRef };

/// Output column of an operator: the relation name it can be qualified by
/// and its column name. `origin` is set when it is a base-table column
/// passed through unchanged.
struct OutColumn {
  std::string relation;
  std::string name;
  bool using_hidden = false;  // right-hand copy of a USING column
  std::optional<sql::ColumnBinding> origin;
};

struct AggCall {
  std::string name;  // lower case; "any_value" for implicit first-row picks
  bool distinct = false;
  bool star = false;
  bool implicit = false;
  std::vector<ScalarExpr> args;
  bool operator==(const AggCall&) const = default;
};

struct SortKey {
  std::size_t column = 0;  // slot in the input row
  bool ascending = true;
  sql::NullsOrder nulls = sql::NullsOrder::Default;
  std::string label;
};

/// One operator of an unoptimized logical plan.
///
///   Scan       table (+alias)
///   Values     rows of expressions, no children
///   Filter     predicate, 1 child
///   Project    exprs; the first `visible` are output, the rest only feed Sort
///   Join       join_kind, optional predicate, 2 children
///   Aggregate  exprs as group keys then aggs; output = keys ++ aggs
///   Sort       keys; output keeps the first `keep` input columns
///   Limit      limit / offset (constant expressions), 1 child
///   SetOp      set_kind, all, 2 children
///   CteBind    table = name, recursive; children = definition, body
///   CteRef     table = name (+alias)
struct PlanNode {
  OpKind kind = OpKind::Values;
  std::vector<OutColumn> columns;
  std::vector<std::shared_ptr<const PlanNode>> children;

  std::string table;
  std::optional<std::string> alias;
  std::vector<ScalarExpr> exprs;
  std::vector<std::string> aliases;  // Project: explicit AS names, empty when absent
  std::size_t visible = 0;
  std::optional<ScalarExpr> predicate;
  sql::JoinKind join_kind = sql::JoinKind::Inner;
  std::vector<AggCall> aggs;
  std::vector<SortKey> keys;
  std::size_t keep = 0;
  std::optional<ScalarExpr> limit;
  std::optional<ScalarExpr> offset;
  sql::SetOpKind set_kind = sql::SetOpKind::Union;
  bool all = false;
  bool recursive = false;
  std::vector<std::vector<ScalarExpr>> rows;
};

struct LogicalPlan {
  std::shared_ptr<const PlanNode> root;
  /// True when the outermost statement has an ORDER BY.
  bool ordered = false;

  std::size_t arity() const { return root ? root->columns.size() : 0; }
};

/// Builds the plan. Clause order maps to operators bottom-up as
/// FROM (Scan/Join) -> WHERE (Filter) -> GROUP BY (Aggregate) ->
/// HAVING (Filter) -> SELECT (Project) -> DISTINCT (Aggregate) ->
/// ORDER BY (Sort) -> LIMIT (Limit); no operator is moved or dropped.
///
/// Name resolution is SQLite-flavoured where the dialects disagree: a bare
/// non-grouped column in an aggregate query reads the group's first row, and
/// an unresolvable double-quoted name is taken as a string literal.
LogicalPlan build_plan(const sql::SqlAst& ast, const sql::SchemaDef& schema);

/// Fills ColumnRef::binding for every reference that resolves to a base
/// table column. Throws like build_plan.
void bind_columns(sql::SqlAst& ast, const sql::SchemaDef& schema);

/// `Logical<Op>(args)` per line, two spaces of indentation per level.
std::string render_plan(const LogicalPlan& plan);
std::string render_scalar(const ScalarExpr& expr);

inline constexpr std::string_view kPlanPlaceholder = "ERROR WHILE GENERATING PLAN";

/// Rendered plan text, or kPlanPlaceholder if parsing or planning fails.
/// Never throws.
std::string plan_or_placeholder(std::string_view sql_text, const sql::SchemaDef& schema) noexcept;

/// Operator names of a pre-order walk, e.g. {"Limit", "Sort", "Project", ...}.
std::vector<std::string> operator_sequence(const LogicalPlan& plan);

const char* to_string(OpKind kind);

}  // namespace sqleq::plan
