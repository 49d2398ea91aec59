#include "sqleq/sql/render.hpp"

#include <cctype>

namespace sqleq::sql {

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

int binary_precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return kPrecOr;
    case BinaryOp::And: return kPrecAnd;
    case BinaryOp::Concat: return kPrecConcat;
    case BinaryOp::Add:
    case BinaryOp::Sub: return kPrecAdd;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return kPrecMul;
    default: return kPrecCompare;
  }
}

int precedence(const Expr& e) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Binary>) {
          return binary_precedence(n.op);
        } else if constexpr (std::is_same_v<T, Unary>) {
          return n.op == UnaryOp::Not ? kPrecNot : kPrecUnary;
        } else if constexpr (std::is_same_v<T, IsNull> || std::is_same_v<T, Between> ||
                             std::is_same_v<T, Like> || std::is_same_v<T, InList> ||
                             std::is_same_v<T, InSubquery> || std::is_same_v<T, Quantified>) {
          return kPrecCompare;
        } else {
          return kPrecPrimary;
        }
      },
      e.node);
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string quote_string(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

class Renderer {
 public:
  std::string expr(const Expr& e) {
    return std::visit([this](const auto& n) { return node(n); }, e.node);
  }

  // Wraps `e` in parentheses when its precedence is at most `max_bare - 1`.
  std::string operand(const Expr& e, int min_bare) {
    std::string s = expr(e);
    return precedence(e) < min_bare ? "(" + s + ")" : s;
  }

  std::string query(const Query& q) {
    std::string out;
    if (!q.ctes.empty()) {
      out += q.recursive ? "WITH RECURSIVE " : "WITH ";
      for (std::size_t i = 0; i < q.ctes.size(); ++i) {
        const Cte& cte = q.ctes[i];
        if (i) out += ", ";
        out += render_identifier(cte.name);
        if (!cte.columns.empty()) {
          out += " (";
          for (std::size_t c = 0; c < cte.columns.size(); ++c) {
            if (c) out += ", ";
            out += render_identifier(cte.columns[c]);
          }
          out += ")";
        }
        out += " AS (" + query(*cte.query) + ")";
      }
      out += " ";
    }
    out += body(q.body);
    if (!q.order_by.empty()) {
      out += " ORDER BY ";
      for (std::size_t i = 0; i < q.order_by.size(); ++i) {
        const OrderItem& item = q.order_by[i];
        if (i) out += ", ";
        out += expr(item.expr);
        if (!item.ascending) out += " DESC";
        if (item.nulls == NullsOrder::First) out += " NULLS FIRST";
        if (item.nulls == NullsOrder::Last) out += " NULLS LAST";
      }
    }
    if (q.limit) out += " LIMIT " + expr(*q.limit);
    if (q.offset) out += " OFFSET " + expr(*q.offset);
    return out;
  }

 private:
  std::string body(const QueryBody& b) {
    return std::visit(
        [this](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, SelectCore>) {
            return select(n);
          } else if constexpr (std::is_same_v<T, SetOperation>) {
            return body(*n.lhs) + " " + to_string(n.kind) + (n.all ? " ALL " : " ") + body(*n.rhs);
          } else {
            return "(" + query(*n.query) + ")";
          }
        },
        b.node);
  }

  std::string select(const SelectCore& core) {
    std::string out = core.distinct ? "SELECT DISTINCT " : "SELECT ";
    for (std::size_t i = 0; i < core.projection.size(); ++i) {
      if (i) out += ", ";
      out += expr(core.projection[i].expr);
      if (core.projection[i].alias) out += " AS " + render_identifier(*core.projection[i].alias);
    }
    if (!core.from.empty()) {
      out += " FROM ";
      for (std::size_t i = 0; i < core.from.size(); ++i) {
        if (i) out += ", ";
        out += table(core.from[i]);
      }
    }
    if (core.where) out += " WHERE " + expr(*core.where);
    if (!core.group_by.empty()) {
      out += " GROUP BY ";
      for (std::size_t i = 0; i < core.group_by.size(); ++i) {
        if (i) out += ", ";
        out += expr(core.group_by[i]);
      }
    }
    if (core.having) out += " HAVING " + expr(*core.having);
    return out;
  }

  static std::string table_name(const std::string& name) {
    std::string out;
    std::size_t start = 0;
    for (;;) {
      const std::size_t dot = name.find('.', start);
      if (start) out += ".";
      out += render_identifier(name.substr(start, dot == std::string::npos ? dot : dot - start));
      if (dot == std::string::npos) return out;
      start = dot + 1;
    }
  }

  std::string table(const TableRef& ref) {
    return std::visit(
        [this](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, NamedTable>) {
            return table_name(n.name) + (n.alias ? " AS " + render_identifier(*n.alias) : "");
          } else if constexpr (std::is_same_v<T, DerivedTable>) {
            return "(" + query(*n.query) + ")" + (n.alias ? " AS " + render_identifier(*n.alias) : "");
          } else {
            std::string out = table(*n.left);
            switch (n.kind) {
              case JoinKind::Inner: out += " JOIN "; break;
              case JoinKind::Left: out += " LEFT JOIN "; break;
              case JoinKind::Right: out += " RIGHT JOIN "; break;
              case JoinKind::Full: out += " FULL JOIN "; break;
              case JoinKind::Cross: out += " CROSS JOIN "; break;
            }
            const bool nested = std::holds_alternative<JoinClause>(n.right->node);
            out += nested ? "(" + table(*n.right) + ")" : table(*n.right);
            if (n.condition) out += " ON " + expr(*n.condition);
            if (!n.using_columns.empty()) {
              out += " USING (";
              for (std::size_t i = 0; i < n.using_columns.size(); ++i) {
                if (i) out += ", ";
                out += render_identifier(n.using_columns[i]);
              }
              out += ")";
            }
            return out;
          }
        },
        ref.node);
  }

  std::string node(const ColumnRef& c) {
    return c.qualifier ? render_identifier(*c.qualifier) + "." + render_identifier(c.name)
                       : render_identifier(c.name);
  }
  std::string node(const Literal& l) {
    switch (l.kind) {
      case LiteralKind::Null: return "NULL";
      case LiteralKind::Boolean: return upper(l.text);
      case LiteralKind::String: return quote_string(l.text);
      default: return l.text;
    }
  }
  std::string node(const Star& s) { return s.qualifier ? render_identifier(*s.qualifier) + ".*" : "*"; }
  std::string node(const Unary& u) {
    if (u.op == UnaryOp::Not) return "NOT " + operand(*u.operand, kPrecNot);
    const bool wrap = precedence(*u.operand) < kPrecUnary || u.operand->is<Unary>();
    const std::string inner = expr(*u.operand);
    return std::string(u.op == UnaryOp::Neg ? "-" : "+") + (wrap ? "(" + inner + ")" : inner);
  }
  std::string node(const Binary& b) {
    const int p = binary_precedence(b.op);
    const std::string op = to_string(b.op);
    if (p == kPrecCompare) {
      return operand(*b.lhs, kPrecCompare + 1) + " " + op + " " + operand(*b.rhs, kPrecCompare + 1);
    }
    return operand(*b.lhs, p) + " " + op + " " + operand(*b.rhs, p + 1);
  }
  std::string node(const IsNull& n) {
    return operand(*n.operand, kPrecCompare + 1) + (n.negated ? " IS NOT NULL" : " IS NULL");
  }
  std::string node(const Between& n) {
    return operand(*n.operand, kPrecCompare + 1) + (n.negated ? " NOT BETWEEN " : " BETWEEN ") +
           operand(*n.low, kPrecCompare + 1) + " AND " + operand(*n.high, kPrecCompare + 1);
  }
  std::string node(const Like& n) {
    std::string op = n.case_insensitive ? "ILIKE" : "LIKE";
    return operand(*n.operand, kPrecCompare + 1) + (n.negated ? " NOT " : " ") + op + " " +
           operand(*n.pattern, kPrecCompare + 1);
  }
  std::string node(const InList& n) {
    std::string out = operand(*n.operand, kPrecCompare + 1) + (n.negated ? " NOT IN (" : " IN (");
    for (std::size_t i = 0; i < n.items.size(); ++i) {
      if (i) out += ", ";
      out += expr(n.items[i]);
    }
    return out + ")";
  }
  std::string node(const InSubquery& n) {
    return operand(*n.operand, kPrecCompare + 1) + (n.negated ? " NOT IN (" : " IN (") +
           query(*n.query) + ")";
  }
  std::string node(const Exists& n) { return "EXISTS (" + query(*n.query) + ")"; }
  std::string node(const ScalarSubquery& n) { return "(" + query(*n.query) + ")"; }
  std::string node(const Quantified& n) {
    std::string out = operand(*n.lhs, kPrecCompare + 1) + " " + to_string(n.op) +
                      (n.quantifier == Quantifier::All ? " ALL (" : " ANY (");
    out += n.rhs_query ? query(**n.rhs_query) : expr(**n.rhs_expr);
    return out + ")";
  }
  std::string node(const Case& n) {
    std::string out = "CASE";
    if (n.operand) out += " " + expr(**n.operand);
    for (const WhenClause& w : n.whens) {
      out += " WHEN " + expr(w.condition) + " THEN " + expr(w.result);
    }
    if (n.otherwise) out += " ELSE " + expr(**n.otherwise);
    return out + " END";
  }
  std::string node(const Function& f) {
    std::string out = upper(f.name) + "(";
    if (f.star) {
      out += "*";
    } else {
      if (f.distinct) out += "DISTINCT ";
      for (std::size_t i = 0; i < f.args.size(); ++i) {
        if (i) out += ", ";
        out += expr(f.args[i]);
      }
    }
    out += ")";
    if (f.window) out += " OVER (" + *f.window + ")";
    return out;
  }
  std::string node(const Cast& c) { return "CAST(" + expr(*c.operand) + " AS " + c.type_name + ")"; }
  std::string node(const ArrayCtor& a) {
    std::string out = "ARRAY[";
    for (std::size_t i = 0; i < a.items.size(); ++i) {
      if (i) out += ", ";
      out += expr(a.items[i]);
    }
    return out + "]";
  }
};

}  // namespace

std::string render_identifier(std::string_view name) {
  bool bare = !name.empty() && !is_reserved_word(name) &&
              (std::islower(static_cast<unsigned char>(name[0])) || name[0] == '_');
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::islower(u) || std::isdigit(u) || c == '_' || c == '$')) bare = false;
  }
  if (bare) return std::string(name);
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::string render_expr(const Expr& expr) { return Renderer{}.expr(expr); }

std::string render_query(const Query& query) { return Renderer{}.query(query); }

std::string render_sql(const SqlAst& ast) {
  std::string out = render_query(ast.root);
  if (ast.partial && !ast.opaque_tail.empty()) out += " " + ast.opaque_tail;
  return out;
}

}  // namespace sqleq::sql
