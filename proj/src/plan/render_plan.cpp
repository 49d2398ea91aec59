#include <cctype>

#include "sqleq/plan/logical_plan.hpp"
#include "sqleq/sql/parser.hpp"
#include "sqleq/sql/render.hpp"

namespace sqleq::plan {

namespace {

constexpr int kPrecOr = 1;
constexpr int kPrecAnd = 2;
constexpr int kPrecNot = 3;
constexpr int kPrecCompare = 4;
constexpr int kPrecConcat = 5;
constexpr int kPrecAdd = 6;
constexpr int kPrecMul = 7;
constexpr int kPrecUnary = 8;
constexpr int kPrecPrimary = 10;

int binary_precedence(sql::BinaryOp op) {
  switch (op) {
    case sql::BinaryOp::Or: return kPrecOr;
    case sql::BinaryOp::And: return kPrecAnd;
    case sql::BinaryOp::Concat: return kPrecConcat;
    case sql::BinaryOp::Add:
    case sql::BinaryOp::Sub: return kPrecAdd;
    case sql::BinaryOp::Mul:
    case sql::BinaryOp::Div:
    case sql::BinaryOp::Mod: return kPrecMul;
    default: return kPrecCompare;
  }
}

int precedence(const ScalarExpr& e) {
  switch (e.kind) {
    case ExprKind::Binary: return binary_precedence(e.binary_op);
    case ExprKind::Unary: return e.unary_op == sql::UnaryOp::Not ? kPrecNot : kPrecUnary;
    case ExprKind::IsNull:
    case ExprKind::Between:
    case ExprKind::Like:
    case ExprKind::InList:
    case ExprKind::QuantifiedArray: return kPrecCompare;
    case ExprKind::Subquery:
      return e.subquery == SubqueryKind::In || e.subquery == SubqueryKind::Quantified ? kPrecCompare : kPrecPrimary;
    default: return kPrecPrimary;
  }
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string indent(std::size_t depth) { return std::string(depth * 2, ' '); }

const char* join_name(sql::JoinKind kind) {
  switch (kind) {
    case sql::JoinKind::Inner: return "inner";
    case sql::JoinKind::Left: return "left";
    case sql::JoinKind::Right: return "right";
    case sql::JoinKind::Full: return "full";
    case sql::JoinKind::Cross: return "cross";
  }
  return "?";
}

class PlanRenderer {
 public:
  std::string node(const PlanNode& n, std::size_t depth) {
    std::string out = indent(depth) + "Logical" + to_string(n.kind) + "(" + args(n, depth) + ")";
    for (const auto& child : n.children) out += "\n" + node(*child, depth + 1);
    return out;
  }

  std::string expr(const ScalarExpr& e, std::size_t depth) {
    switch (e.kind) {
      case ExprKind::Column: return e.label;
      case ExprKind::Literal: return literal(e.literal);
      case ExprKind::Unary: {
        if (e.unary_op == sql::UnaryOp::Not) return "NOT " + operand(e.children[0], kPrecNot, depth);
        const bool wrap = precedence(e.children[0]) < kPrecUnary || e.children[0].kind == ExprKind::Unary;
        const std::string inner = expr(e.children[0], depth);
        return std::string(e.unary_op == sql::UnaryOp::Neg ? "-" : "+") + (wrap ? "(" + inner + ")" : inner);
      }
      case ExprKind::Binary: {
        const int p = binary_precedence(e.binary_op);
        const int rhs_min = p + 1;
        const int lhs_min = p == kPrecCompare ? p + 1 : p;
        return operand(e.children[0], lhs_min, depth) + " " + sql::to_string(e.binary_op) + " " +
               operand(e.children[1], rhs_min, depth);
      }
      case ExprKind::IsNull:
        return operand(e.children[0], kPrecCompare + 1, depth) + (e.negated ? " IS NOT NULL" : " IS NULL");
      case ExprKind::Between:
        return operand(e.children[0], kPrecCompare + 1, depth) + (e.negated ? " NOT BETWEEN " : " BETWEEN ") +
               operand(e.children[1], kPrecCompare + 1, depth) + " AND " +
               operand(e.children[2], kPrecCompare + 1, depth);
      case ExprKind::Like:
        return operand(e.children[0], kPrecCompare + 1, depth) + (e.negated ? " NOT " : " ") +
               (e.case_insensitive ? "ILIKE " : "LIKE ") + operand(e.children[1], kPrecCompare + 1, depth);
      case ExprKind::InList: {
        std::string out = operand(e.children[0], kPrecCompare + 1, depth) + (e.negated ? " NOT IN (" : " IN (");
        for (std::size_t i = 1; i < e.children.size(); ++i) {
          if (i > 1) out += ", ";
          out += expr(e.children[i], depth);
        }
        return out + ")";
      }
      case ExprKind::Case: {
        std::string out = "CASE";
        std::size_t i = 0;
        if (e.has_operand) out += " " + expr(e.children[i++], depth);
        const std::size_t end = e.children.size() - (e.has_else ? 1 : 0);
        for (; i < end; i += 2) {
          out += " WHEN " + expr(e.children[i], depth) + " THEN " + expr(e.children[i + 1], depth);
        }
        if (e.has_else) out += " ELSE " + expr(e.children.back(), depth);
        return out + " END";
      }
      case ExprKind::Function: {
        std::string out = upper(e.name) + "(";
        if (e.star) {
          out += "*";
        } else {
          if (e.distinct) out += "DISTINCT ";
          out += list(e.children, depth);
        }
        out += ")";
        if (e.window) out += " OVER (" + *e.window + ")";
        return out;
      }
      case ExprKind::Cast: return "CAST(" + expr(e.children[0], depth) + " AS " + e.name + ")";
      case ExprKind::Array: return "ARRAY[" + list(e.children, depth) + "]";
      case ExprKind::QuantifiedArray:
        return operand(e.children[0], kPrecCompare + 1, depth) + " " + sql::to_string(e.binary_op) +
               (e.quantifier == sql::Quantifier::All ? " ALL(" : " SOME(") + expr(e.children[1], depth) + ")";
      case ExprKind::Subquery: {
        const std::string inner = "{\n" + node(*e.plan, depth + 1) + "\n" + indent(depth) + "}";
        switch (e.subquery) {
          case SubqueryKind::Scalar: return "$SCALAR_QUERY(" + inner + ")";
          case SubqueryKind::Exists: return "EXISTS(" + inner + ")";
          case SubqueryKind::In:
            return operand(e.children[0], kPrecCompare + 1, depth) + (e.negated ? " NOT IN(" : " IN(") + inner + ")";
          case SubqueryKind::Quantified:
            return operand(e.children[0], kPrecCompare + 1, depth) + " " + sql::to_string(e.binary_op) +
                   (e.quantifier == sql::Quantifier::All ? " ALL(" : " SOME(") + inner + ")";
        }
      }
    }
    return "?";
  }

 private:
  std::string operand(const ScalarExpr& e, int min_bare, std::size_t depth) {
    std::string s = expr(e, depth);
    return precedence(e) < min_bare ? "(" + s + ")" : s;
  }

  std::string list(const std::vector<ScalarExpr>& items, std::size_t depth) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      out += expr(items[i], depth);
    }
    return out;
  }

  static std::string literal(const sql::Literal& l) {
    switch (l.kind) {
      case sql::LiteralKind::Null: return "NULL";
      case sql::LiteralKind::Boolean: return upper(l.text);
      case sql::LiteralKind::String: {
        std::string out = "'";
        for (char c : l.text) {
          if (c == '\'') out.push_back('\'');
          out.push_back(c);
        }
        return out + "'";
      }
      default: return l.text;
    }
  }

  std::string agg(const AggCall& a, std::size_t depth) {
    std::string out = upper(a.name) + "(";
    if (a.star) return out + "*)";
    if (a.distinct) out += "DISTINCT ";
    return out + list(a.args, depth) + ")";
  }

  std::string args(const PlanNode& n, std::size_t depth) {
    switch (n.kind) {
      case OpKind::Scan:
      case OpKind::CteRef:
        return n.alias && *n.alias != n.table ? n.table + " AS " + *n.alias : n.table;
      case OpKind::Values: {
        std::string out;
        for (std::size_t i = 0; i < n.rows.size(); ++i) {
          if (i) out += ", ";
          out += "(" + list(n.rows[i], depth) + ")";
        }
        return out;
      }
      case OpKind::Filter: return expr(*n.predicate, depth);
      case OpKind::Project: {
        std::string out;
        for (std::size_t i = 0; i < n.visible; ++i) {
          if (i) out += ", ";
          out += expr(n.exprs[i], depth);
          if (!n.aliases[i].empty()) out += " AS " + sql::render_identifier(n.aliases[i]);
        }
        return out;
      }
      case OpKind::Join: {
        std::string out = join_name(n.join_kind);
        if (n.predicate) out += ", " + expr(*n.predicate, depth);
        return out;
      }
      case OpKind::Aggregate: {
        std::string out = "group=[" + list(n.exprs, depth) + "], aggs=[";
        for (std::size_t i = 0; i < n.aggs.size(); ++i) {
          if (i) out += ", ";
          out += agg(n.aggs[i], depth);
        }
        return out + "]";
      }
      case OpKind::Sort: {
        std::string out;
        for (std::size_t i = 0; i < n.keys.size(); ++i) {
          const SortKey& k = n.keys[i];
          if (i) out += ", ";
          out += k.label + (k.ascending ? " ASC" : " DESC");
          if (k.nulls == sql::NullsOrder::First) out += " NULLS FIRST";
          if (k.nulls == sql::NullsOrder::Last) out += " NULLS LAST";
        }
        return out;
      }
      case OpKind::Limit: {
        std::string out = n.limit ? expr(*n.limit, depth) : "ALL";
        if (n.offset) out += ", offset=" + expr(*n.offset, depth);
        return out;
      }
      case OpKind::SetOp: return std::string(sql::to_string(n.set_kind)) + (n.all ? " ALL" : "");
      case OpKind::CteBind: return n.recursive ? n.table + ", recursive" : n.table;
    }
    return "";
  }
};

void collect(const PlanNode& n, std::vector<std::string>& out) {
  out.emplace_back(to_string(n.kind));
  for (const auto& child : n.children) collect(*child, out);
}

}  // namespace

const char* to_string(OpKind kind) {
  switch (kind) {
    case OpKind::Scan: return "Scan";
    case OpKind::Values: return "Values";
    case OpKind::Filter: return "Filter";
    case OpKind::Project: return "Project";
    case OpKind::Join: return "Join";
    case OpKind::Aggregate: return "Aggregate";
    case OpKind::Sort: return "Sort";
    case OpKind::Limit: return "Limit";
    case OpKind::SetOp: return "SetOp";
    case OpKind::CteBind: return "CteBind";
    case OpKind::CteRef: return "CteRef";
  }
  return "?";
}

std::string render_plan(const LogicalPlan& plan) {
  if (!plan.root) return "";
  return PlanRenderer{}.node(*plan.root, 0);
}

std::string render_scalar(const ScalarExpr& expr) { return PlanRenderer{}.expr(expr, 0); }

std::vector<std::string> operator_sequence(const LogicalPlan& plan) {
  std::vector<std::string> out;
  if (plan.root) collect(*plan.root, out);
  return out;
}

std::string plan_or_placeholder(std::string_view sql_text, const sql::SchemaDef& schema) noexcept {
  try {
    const sql::SqlAst ast = sql::parse_sql(sql_text, sql::ParseMode::Lenient);
    std::string text = render_plan(build_plan(ast, schema));
    if (!text.empty()) return text;
  } catch (...) {
  }
  return std::string(kPlanPlaceholder);
}

}  // namespace sqleq::plan
