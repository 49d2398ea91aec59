#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sqleq/sql/box.hpp"

namespace sqleq::sql {

struct Expr;
struct Query;

/// Resolved target of a column reference against base tables.
struct ColumnBinding {
  std::string table;
  std::string column;
  bool operator==(const ColumnBinding&) const = default;
};

struct ColumnRef {
  std::optional<std::string> qualifier;  // folded unless quoted
  std::string name;
  std::string raw;                       // source spelling, e.g. `People.nameFirst`
  std::optional<ColumnBinding> binding;  // filled by bind_columns()

  // Source spelling is provenance only; two references are the same node
  // when they name the same thing.
  bool operator==(const ColumnRef& o) const {
    return qualifier == o.qualifier && name == o.name && binding == o.binding;
  }
};

enum class LiteralKind { Null, Integer, Real, String, Boolean };

struct Literal {
  LiteralKind kind = LiteralKind::Null;
  std::string text;  // integer/real digits, string contents (unescaped), "true"/"false"
  bool operator==(const Literal&) const = default;
};

/// `*` or `t.*` in a projection list.
struct Star {
  std::optional<std::string> qualifier;
  bool operator==(const Star&) const = default;
};

enum class UnaryOp { Neg, Plus, Not };

struct Unary {
  UnaryOp op;
  Box<Expr> operand;
  bool operator==(const Unary&) const = default;
};

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Concat, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

struct Binary {
  BinaryOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  bool operator==(const Binary&) const = default;
};

struct IsNull {
  Box<Expr> operand;
  bool negated = false;
  bool operator==(const IsNull&) const = default;
};

struct Between {
  Box<Expr> operand;
  Box<Expr> low;
  Box<Expr> high;
  bool negated = false;
  bool operator==(const Between&) const = default;
};

struct Like {
  Box<Expr> operand;
  Box<Expr> pattern;
  bool negated = false;
  bool case_insensitive = false;  // ILIKE
  bool operator==(const Like&) const = default;
};

struct InList {
  Box<Expr> operand;
  std::vector<Expr> items;
  bool negated = false;
  bool operator==(const InList&) const;
};

struct InSubquery {
  Box<Expr> operand;
  Box<Query> query;
  bool negated = false;
  bool operator==(const InSubquery&) const;
};

struct Exists {
  Box<Query> query;
  bool operator==(const Exists&) const;
};

struct ScalarSubquery {
  Box<Query> query;
  bool operator==(const ScalarSubquery&) const;
};

enum class Quantifier { Any, All };

/// `x op ANY (subquery|array)` / `x op ALL (...)`.
struct Quantified {
  BinaryOp op;
  Quantifier quantifier;
  Box<Expr> lhs;
  std::optional<Box<Expr>> rhs_expr;
  std::optional<Box<Query>> rhs_query;
  bool operator==(const Quantified&) const;
};

struct WhenClause;

struct Case {
  std::optional<Box<Expr>> operand;  // simple CASE
  std::vector<WhenClause> whens;
  std::optional<Box<Expr>> otherwise;
  bool operator==(const Case&) const;
};

struct Function {
  std::string name;  // lower-cased
  std::vector<Expr> args;
  bool distinct = false;
  bool star = false;                  // COUNT(*)
  std::optional<std::string> window;  // opaque OVER (...) contents
  bool operator==(const Function&) const;
};

struct Cast {
  Box<Expr> operand;
  std::string type_name;  // lower-cased, e.g. "text", "varchar(10)"
  bool operator==(const Cast&) const = default;
};

struct ArrayCtor {
  std::vector<Expr> items;
  bool operator==(const ArrayCtor&) const;
};

using ExprNode = std::variant<ColumnRef, Literal, Star, Unary, Binary, IsNull, Between, Like, InList,
                              InSubquery, Exists, ScalarSubquery, Quantified, Case, Function, Cast,
                              ArrayCtor>;

struct Expr {
  ExprNode node;

  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
  template <typename T>
  const T& as() const {
    return std::get<T>(node);
  }
  template <typename T>
  T& as() {
    return std::get<T>(node);
  }

  bool operator==(const Expr&) const = default;
};

struct WhenClause {
  Expr condition;
  Expr result;
  bool operator==(const WhenClause&) const = default;
};

// ---------------------------------------------------------------------------
// Relations and queries
// ---------------------------------------------------------------------------

struct SelectItem {
  Expr expr;
  std::optional<std::string> alias;
  bool operator==(const SelectItem&) const = default;
};

enum class JoinKind { Inner, Left, Right, Full, Cross };

struct TableRef;

struct NamedTable {
  std::string name;
  std::optional<std::string> alias;
  bool operator==(const NamedTable&) const = default;
};

struct DerivedTable {
  Box<Query> query;
  std::optional<std::string> alias;
  bool operator==(const DerivedTable&) const;
};

struct JoinClause {
  JoinKind kind = JoinKind::Inner;
  Box<TableRef> left;
  Box<TableRef> right;
  std::optional<Expr> condition;
  std::vector<std::string> using_columns;
  bool operator==(const JoinClause&) const;
};

struct TableRef {
  std::variant<NamedTable, DerivedTable, JoinClause> node;
  bool operator==(const TableRef&) const = default;
};

struct SelectCore {
  bool distinct = false;
  std::vector<SelectItem> projection;
  std::vector<TableRef> from;  // comma-separated items; implicit cross join
  std::optional<Expr> where;
  std::vector<Expr> group_by;
  std::optional<Expr> having;
  bool operator==(const SelectCore&) const = default;
};

enum class SetOpKind { Union, Intersect, Except };

struct QueryBody;

struct SetOperation {
  SetOpKind kind = SetOpKind::Union;
  bool all = false;
  Box<QueryBody> lhs;
  Box<QueryBody> rhs;
  bool operator==(const SetOperation&) const;
};

/// A parenthesized query used as a set-operation operand.
struct NestedQuery {
  Box<Query> query;
  bool operator==(const NestedQuery&) const;
};

struct QueryBody {
  std::variant<SelectCore, SetOperation, NestedQuery> node;
  bool operator==(const QueryBody&) const = default;
};

enum class NullsOrder { Default, First, Last };

struct OrderItem {
  Expr expr;
  bool ascending = true;
  NullsOrder nulls = NullsOrder::Default;
  bool operator==(const OrderItem&) const = default;
};

struct Cte {
  std::string name;
  std::vector<std::string> columns;
  Box<Query> query;
  bool operator==(const Cte&) const;
};

struct Query {
  bool recursive = false;
  std::vector<Cte> ctes;
  QueryBody body;
  std::vector<OrderItem> order_by;
  std::optional<Expr> limit;
  std::optional<Expr> offset;
  bool operator==(const Query&) const = default;
};

/// Parsed statement. `partial` is set when the lenient parser wrapped an
/// unrecognized trailing clause into `opaque_tail`.
struct SqlAst {
  Query root;
  bool partial = false;
  std::string opaque_tail;
  std::size_t opaque_offset = 0;
  bool operator==(const SqlAst&) const = default;
};

// Out-of-line equality for nodes holding boxes of types incomplete above.
inline bool InList::operator==(const InList& o) const {
  return negated == o.negated && operand == o.operand && items == o.items;
}
inline bool InSubquery::operator==(const InSubquery& o) const {
  return negated == o.negated && operand == o.operand && query == o.query;
}
inline bool Exists::operator==(const Exists& o) const { return query == o.query; }
inline bool ScalarSubquery::operator==(const ScalarSubquery& o) const { return query == o.query; }
inline bool Quantified::operator==(const Quantified& o) const {
  return op == o.op && quantifier == o.quantifier && lhs == o.lhs && rhs_expr == o.rhs_expr &&
         rhs_query == o.rhs_query;
}
inline bool Case::operator==(const Case& o) const {
  return operand == o.operand && whens == o.whens && otherwise == o.otherwise;
}
inline bool Function::operator==(const Function& o) const {
  return name == o.name && args == o.args && distinct == o.distinct && star == o.star &&
         window == o.window;
}
inline bool ArrayCtor::operator==(const ArrayCtor& o) const { return items == o.items; }
inline bool DerivedTable::operator==(const DerivedTable& o) const {
  return alias == o.alias && query == o.query;
}
inline bool JoinClause::operator==(const JoinClause& o) const {
  return kind == o.kind && left == o.left && right == o.right && condition == o.condition &&
         using_columns == o.using_columns;
}
inline bool SetOperation::operator==(const SetOperation& o) const {
  return kind == o.kind && all == o.all && lhs == o.lhs && rhs == o.rhs;
}
inline bool NestedQuery::operator==(const NestedQuery& o) const { return query == o.query; }
inline bool Cte::operator==(const Cte& o) const {
  return name == o.name && columns == o.columns && query == o.query;
}

// Small construction helpers used by the parser and tests.
inline Expr make_column(std::optional<std::string> qualifier, std::string name, std::string raw) {
  return Expr{ColumnRef{std::move(qualifier), std::move(name), std::move(raw), std::nullopt}};
}
inline Expr make_literal(LiteralKind kind, std::string text) {
  return Expr{Literal{kind, std::move(text)}};
}

const char* to_string(BinaryOp op);
const char* to_string(JoinKind kind);
const char* to_string(SetOpKind kind);

/// True for the aggregate function names the toolkit recognizes.
bool is_aggregate_name(const std::string& lower_name);

}  // namespace sqleq::sql
