#include "sqleq/sql/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string_view>

#include "sqleq/sql/lexer.hpp"
#include "sqleq/sql/render.hpp"

namespace sqleq::sql {

namespace {

// Words that never start an implicit alias or a bare column reference.
constexpr std::array<std::string_view, 56> kReserved = {
    "select", "from",    "where",   "group",     "having", "order",   "limit",  "offset",
    "union",  "intersect", "except", "join",     "inner",  "left",    "right",  "full",
    "cross",  "outer",   "on",      "using",     "as",     "and",     "or",     "not",
    "is",     "null",    "in",      "between",   "like",   "ilike",   "exists", "case",
    "when",   "then",    "else",    "end",       "with",   "recursive", "distinct", "all",
    "by",     "asc",     "desc",    "nulls",     "natural", "window", "fetch",  "for",
    "returning", "qualify", "lateral", "into",   "true",   "false",   "any",    "some",
};

// Keywords that start a clause we recognise but do not model. Trailing
// clauses starting with one of these are what lenient mode wraps.
constexpr std::array<std::string_view, 8> kUnsupportedClause = {
    "window", "fetch", "for", "returning", "qualify", "into", "lock", "option",
};

bool is_reserved(const Token& t) {
  return t.kind == TokenKind::Identifier &&
         std::find(kReserved.begin(), kReserved.end(), t.text) != kReserved.end();
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::End:
      return "end of input";
    case TokenKind::String:
      return "string '" + t.text + "'";
    case TokenKind::QuotedIdentifier:
      return "\"" + t.text + "\"";
    default:
      return "'" + t.text + "'";
  }
}

// Re-spells a token for opaque capture (window specs).
std::string spell(const Token& t) {
  switch (t.kind) {
    case TokenKind::String: {
      std::string out = "'";
      for (char c : t.text) {
        if (c == '\'') out.push_back('\'');
        out.push_back(c);
      }
      return out + "'";
    }
    case TokenKind::QuotedIdentifier:
      return "\"" + t.text + "\"";
    default:
      return t.text;
  }
}

class Parser {
 public:
  Parser(std::string_view text, ParseMode mode) : text_(text), mode_(mode), toks_(tokenize(text)) {}

  SqlAst parse_statement() {
    SqlAst ast;
    const Token& first = peek();
    if (!(first.is_keyword("select") || first.is_keyword("with") || first.is_symbol("("))) {
      if (first.kind == TokenKind::Identifier && mode_ == ParseMode::Strict) {
        throw UnsupportedConstruct(first.offset, "unsupported statement '" + first.text +
                                                     "'; only SELECT queries are accepted");
      }
      fail("SELECT or WITH");
    }
    ast.root = parse_query();
    while (peek().is_symbol(";")) advance();
    if (peek().kind != TokenKind::End) {
      const Token& t = peek();
      const bool clause_like =
          t.kind == TokenKind::Identifier &&
          (!is_reserved(t) || std::find(kUnsupportedClause.begin(), kUnsupportedClause.end(),
                                        t.text) != kUnsupportedClause.end());
      if (!clause_like) fail("end of statement");
      if (mode_ == ParseMode::Strict) {
        throw UnsupportedConstruct(t.offset, "unsupported clause starting at '" + t.text +
                                                 "' (offset " + std::to_string(t.offset) + ")");
      }
      std::string_view tail = text_.substr(t.offset);
      while (!tail.empty() && (std::isspace(static_cast<unsigned char>(tail.back())) || tail.back() == ';')) {
        tail.remove_suffix(1);
      }
      ast.partial = true;
      ast.opaque_tail = std::string(tail);
      ast.opaque_offset = t.offset;
    }
    return ast;
  }

 private:
  // -- token plumbing -------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept_keyword(std::string_view kw) {
    if (peek().is_keyword(kw)) {
      advance();
      return true;
    }
    return false;
  }
  bool accept_symbol(std::string_view sym) {
    if (peek().is_symbol(sym)) {
      advance();
      return true;
    }
    return false;
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail(to_upper(kw));
  }
  void expect_symbol(std::string_view sym) {
    if (!accept_symbol(sym)) fail("'" + std::string(sym) + "'");
  }
  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    throw SyntaxError(t.offset, expected,
                      "syntax error at offset " + std::to_string(t.offset) + ": expected " +
                          expected + ", found " + describe(t));
  }
  static std::string to_upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
  }

  bool at_name() const {
    const Token& t = peek();
    return t.kind == TokenKind::QuotedIdentifier ||
           (t.kind == TokenKind::Identifier && !is_reserved(t));
  }
  std::string parse_name(const char* what) {
    if (!at_name()) fail(what);
    return advance().text;
  }
  std::optional<std::string> parse_alias() {
    if (accept_keyword("as")) return parse_name("alias");
    if (at_name()) return advance().text;
    return std::nullopt;
  }

  // -- queries --------------------------------------------------------------

  Query parse_query() {
    Query q{false, {}, QueryBody{SelectCore{}}, {}, std::nullopt, std::nullopt};
    if (accept_keyword("with")) {
      q.recursive = accept_keyword("recursive");
      do {
        q.ctes.push_back(parse_cte());
      } while (accept_symbol(","));
    }
    q.body = parse_set_expr();
    if (accept_keyword("order")) {
      expect_keyword("by");
      do {
        q.order_by.push_back(parse_order_item());
      } while (accept_symbol(","));
    }
    parse_limit_offset(q);
    return q;
  }

  void parse_limit_offset(Query& q) {
    for (int i = 0; i < 2; ++i) {
      if (!q.limit && accept_keyword("limit")) {
        Expr first = parse_expr();
        if (accept_symbol(",")) {  // LIMIT offset, count
          q.offset = std::move(first);
          q.limit = parse_expr();
        } else {
          q.limit = std::move(first);
        }
      } else if (!q.offset && accept_keyword("offset")) {
        q.offset = parse_expr();
        if (!accept_keyword("rows")) accept_keyword("row");
      }
    }
  }

  Cte parse_cte() {
    Cte cte{parse_name("CTE name"), {}, Box<Query>(Query{})};
    if (accept_symbol("(")) {
      do {
        cte.columns.push_back(parse_name("column name"));
      } while (accept_symbol(","));
      expect_symbol(")");
    }
    expect_keyword("as");
    expect_symbol("(");
    *cte.query = parse_query();
    expect_symbol(")");
    return cte;
  }

  QueryBody parse_set_expr() {
    QueryBody lhs = parse_set_term();
    while (peek().is_keyword("union") || peek().is_keyword("except")) {
      const SetOpKind kind = advance().text == "union" ? SetOpKind::Union : SetOpKind::Except;
      bool all = accept_keyword("all");
      if (!all) accept_keyword("distinct");
      QueryBody rhs = parse_set_term();
      lhs = QueryBody{SetOperation{kind, all, Box<QueryBody>(std::move(lhs)), Box<QueryBody>(std::move(rhs))}};
    }
    return lhs;
  }

  QueryBody parse_set_term() {
    QueryBody lhs = parse_set_primary();
    while (accept_keyword("intersect")) {
      bool all = accept_keyword("all");
      if (!all) accept_keyword("distinct");
      QueryBody rhs = parse_set_primary();
      lhs = QueryBody{SetOperation{SetOpKind::Intersect, all, Box<QueryBody>(std::move(lhs)),
                                   Box<QueryBody>(std::move(rhs))}};
    }
    return lhs;
  }

  QueryBody parse_set_primary() {
    if (accept_symbol("(")) {
      Query inner = parse_query();
      expect_symbol(")");
      return QueryBody{NestedQuery{Box<Query>(std::move(inner))}};
    }
    if (!peek().is_keyword("select")) fail("SELECT");
    return QueryBody{parse_select_core()};
  }

  SelectCore parse_select_core() {
    expect_keyword("select");
    SelectCore core;
    if (accept_keyword("distinct")) {
      if (peek().is_keyword("on")) {
        if (mode_ == ParseMode::Strict) throw UnsupportedConstruct(peek().offset, "DISTINCT ON is not supported");
        fail("select list");
      }
      core.distinct = true;
    } else {
      accept_keyword("all");
    }
    do {
      core.projection.push_back(parse_select_item());
    } while (accept_symbol(","));

    if (accept_keyword("from")) {
      do {
        core.from.push_back(parse_table_ref());
      } while (accept_symbol(","));
    }
    if (accept_keyword("where")) core.where = parse_expr();
    if (accept_keyword("group")) {
      expect_keyword("by");
      do {
        core.group_by.push_back(parse_expr());
      } while (accept_symbol(","));
    }
    if (accept_keyword("having")) core.having = parse_expr();
    return core;
  }

  SelectItem parse_select_item() {
    if (accept_symbol("*")) return SelectItem{Expr{Star{}}, std::nullopt};
    if ((peek().kind == TokenKind::Identifier || peek().kind == TokenKind::QuotedIdentifier) &&
        peek(1).is_symbol(".") && peek(2).is_symbol("*")) {
      std::string qualifier = advance().text;
      advance();
      advance();
      return SelectItem{Expr{Star{std::move(qualifier)}}, std::nullopt};
    }
    Expr e = parse_expr();
    return SelectItem{std::move(e), parse_alias()};
  }

  OrderItem parse_order_item() {
    OrderItem item{parse_expr(), true, NullsOrder::Default};
    if (accept_keyword("desc")) {
      item.ascending = false;
    } else {
      accept_keyword("asc");
    }
    if (accept_keyword("nulls")) {
      if (accept_keyword("first")) {
        item.nulls = NullsOrder::First;
      } else {
        expect_keyword("last");
        item.nulls = NullsOrder::Last;
      }
    }
    return item;
  }

  // -- FROM -----------------------------------------------------------------

  TableRef parse_table_ref() {
    TableRef left = parse_table_primary();
    for (;;) {
      if (peek().is_keyword("natural")) {
        if (mode_ == ParseMode::Strict) throw UnsupportedConstruct(peek().offset, "NATURAL JOIN is not supported");
        fail("JOIN");
      }
      std::optional<JoinKind> kind;
      if (accept_keyword("join")) {
        kind = JoinKind::Inner;
      } else if (accept_keyword("inner")) {
        expect_keyword("join");
        kind = JoinKind::Inner;
      } else if (peek().is_keyword("left") || peek().is_keyword("right") || peek().is_keyword("full")) {
        const std::string word = advance().text;
        accept_keyword("outer");
        expect_keyword("join");
        kind = word == "left" ? JoinKind::Left : word == "right" ? JoinKind::Right : JoinKind::Full;
      } else if (accept_keyword("cross")) {
        expect_keyword("join");
        kind = JoinKind::Cross;
      }
      if (!kind) return left;

      JoinClause join{*kind, Box<TableRef>(std::move(left)), Box<TableRef>(parse_table_primary()),
                      std::nullopt, {}};
      if (*kind != JoinKind::Cross) {
        if (accept_keyword("on")) {
          join.condition = parse_expr();
        } else if (accept_keyword("using")) {
          expect_symbol("(");
          do {
            join.using_columns.push_back(parse_name("column name"));
          } while (accept_symbol(","));
          expect_symbol(")");
        } else {
          fail("ON or USING");
        }
      }
      left = TableRef{std::move(join)};
    }
  }

  TableRef parse_table_primary() {
    if (accept_symbol("(")) {
      if (peek().is_keyword("select") || peek().is_keyword("with") ||
          (peek().is_symbol("(") && starts_query_after_parens())) {
        Query q = parse_query();
        expect_symbol(")");
        DerivedTable dt{Box<Query>(std::move(q)), parse_alias()};
        return TableRef{std::move(dt)};
      }
      TableRef inner = parse_table_ref();
      expect_symbol(")");
      return inner;
    }
    std::string name = parse_name("table name");
    while (accept_symbol(".")) name += "." + parse_name("table name");
    NamedTable table{std::move(name), parse_alias()};
    return TableRef{std::move(table)};
  }

  // `((SELECT ...` : skip extra opening parens and check for a query keyword.
  bool starts_query_after_parens() const {
    std::size_t i = 0;
    while (peek(i).is_symbol("(")) ++i;
    return peek(i).is_keyword("select") || peek(i).is_keyword("with");
  }

  // -- expressions ----------------------------------------------------------

  Expr parse_expr() { return parse_or(); }

  Expr parse_or() {
    Expr lhs = parse_and();
    while (accept_keyword("or")) {
      Expr rhs = parse_and();
      lhs = Expr{Binary{BinaryOp::Or, std::move(lhs), std::move(rhs)}};
    }
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_not();
    while (accept_keyword("and")) {
      Expr rhs = parse_not();
      lhs = Expr{Binary{BinaryOp::And, std::move(lhs), std::move(rhs)}};
    }
    return lhs;
  }

  Expr parse_not() {
    if (accept_keyword("not")) return Expr{Unary{UnaryOp::Not, parse_not()}};
    return parse_predicate();
  }

  static std::optional<BinaryOp> comparison_op(const Token& t) {
    if (t.kind != TokenKind::Symbol) return std::nullopt;
    if (t.text == "=") return BinaryOp::Eq;
    if (t.text == "<>" || t.text == "!=") return BinaryOp::Ne;
    if (t.text == "<") return BinaryOp::Lt;
    if (t.text == "<=") return BinaryOp::Le;
    if (t.text == ">") return BinaryOp::Gt;
    if (t.text == ">=") return BinaryOp::Ge;
    return std::nullopt;
  }

  bool at_query_start() const { return peek().is_keyword("select") || peek().is_keyword("with"); }

  Expr parse_predicate() {
    Expr lhs = parse_concat();

    if (accept_keyword("is")) {
      const bool negated = accept_keyword("not");
      expect_keyword("null");
      return Expr{IsNull{std::move(lhs), negated}};
    }
    bool negated = false;
    if (peek().is_keyword("not") &&
        (peek(1).is_keyword("between") || peek(1).is_keyword("in") || peek(1).is_keyword("like") ||
         peek(1).is_keyword("ilike"))) {
      advance();
      negated = true;
    }
    if (accept_keyword("between")) {
      Expr low = parse_concat();
      expect_keyword("and");
      Expr high = parse_concat();
      return Expr{Between{std::move(lhs), std::move(low), std::move(high), negated}};
    }
    if (accept_keyword("in")) {
      expect_symbol("(");
      if (at_query_start()) {
        Query q = parse_query();
        expect_symbol(")");
        return Expr{InSubquery{std::move(lhs), Box<Query>(std::move(q)), negated}};
      }
      InList in{std::move(lhs), {}, negated};
      do {
        in.items.push_back(parse_expr());
      } while (accept_symbol(","));
      expect_symbol(")");
      return Expr{std::move(in)};
    }
    if (peek().is_keyword("like") || peek().is_keyword("ilike")) {
      const bool ci = advance().text == "ilike";
      Expr pattern = parse_concat();
      return Expr{Like{std::move(lhs), std::move(pattern), negated, ci}};
    }
    if (negated) fail("BETWEEN, IN or LIKE");

    if (auto op = comparison_op(peek())) {
      advance();
      if (peek().is_keyword("any") || peek().is_keyword("some") || peek().is_keyword("all")) {
        const Quantifier quant = advance().text == "all" ? Quantifier::All : Quantifier::Any;
        expect_symbol("(");
        Quantified qe{*op, quant, std::move(lhs), std::nullopt, std::nullopt};
        if (at_query_start()) {
          qe.rhs_query = Box<Query>(parse_query());
        } else {
          qe.rhs_expr = Box<Expr>(parse_expr());
        }
        expect_symbol(")");
        return Expr{std::move(qe)};
      }
      Expr rhs = parse_concat();
      return Expr{Binary{*op, std::move(lhs), std::move(rhs)}};
    }
    return lhs;
  }

  Expr parse_concat() {
    Expr lhs = parse_additive();
    while (accept_symbol("||")) {
      Expr rhs = parse_additive();
      lhs = Expr{Binary{BinaryOp::Concat, std::move(lhs), std::move(rhs)}};
    }
    return lhs;
  }

  Expr parse_additive() {
    Expr lhs = parse_multiplicative();
    for (;;) {
      BinaryOp op;
      if (accept_symbol("+")) {
        op = BinaryOp::Add;
      } else if (accept_symbol("-")) {
        op = BinaryOp::Sub;
      } else {
        return lhs;
      }
      Expr rhs = parse_multiplicative();
      lhs = Expr{Binary{op, std::move(lhs), std::move(rhs)}};
    }
  }

  Expr parse_multiplicative() {
    Expr lhs = parse_unary();
    for (;;) {
      BinaryOp op;
      if (accept_symbol("*")) {
        op = BinaryOp::Mul;
      } else if (accept_symbol("/")) {
        op = BinaryOp::Div;
      } else if (accept_symbol("%")) {
        op = BinaryOp::Mod;
      } else {
        return lhs;
      }
      Expr rhs = parse_unary();
      lhs = Expr{Binary{op, std::move(lhs), std::move(rhs)}};
    }
  }

  Expr parse_unary() {
    if (accept_symbol("-")) return Expr{Unary{UnaryOp::Neg, parse_unary()}};
    if (accept_symbol("+")) return Expr{Unary{UnaryOp::Plus, parse_unary()}};
    return parse_postfix();
  }

  Expr parse_postfix() {
    Expr e = parse_primary();
    while (accept_symbol("::")) {
      e = Expr{Cast{std::move(e), parse_type_name()}};
    }
    return e;
  }

  std::string parse_type_name() {
    if (peek().kind != TokenKind::Identifier) fail("type name");
    std::string name = advance().text;
    if (name == "double" && accept_keyword("precision")) name += " precision";
    if (name == "character" && accept_keyword("varying")) name += " varying";
    if (accept_symbol("(")) {
      name += "(";
      bool first = true;
      do {
        if (!first) name += ",";
        first = false;
        if (peek().kind != TokenKind::Integer) fail("type length");
        name += advance().text;
      } while (accept_symbol(","));
      expect_symbol(")");
      name += ")";
    }
    return name;
  }

  Expr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Integer:
        return make_literal(LiteralKind::Integer, advance().text);
      case TokenKind::Real:
        return make_literal(LiteralKind::Real, advance().text);
      case TokenKind::String:
        return make_literal(LiteralKind::String, advance().text);
      case TokenKind::QuotedIdentifier:
        return parse_column_ref();
      case TokenKind::Symbol:
        if (t.text == "(") {
          advance();
          if (at_query_start()) {
            Query q = parse_query();
            expect_symbol(")");
            return Expr{ScalarSubquery{Box<Query>(std::move(q))}};
          }
          Expr inner = parse_expr();
          expect_symbol(")");
          return inner;
        }
        fail("expression");
      case TokenKind::End:
        fail("expression");
      case TokenKind::Identifier:
        break;
    }

    if (accept_keyword("null")) return make_literal(LiteralKind::Null, "null");
    if (accept_keyword("true")) return make_literal(LiteralKind::Boolean, "true");
    if (accept_keyword("false")) return make_literal(LiteralKind::Boolean, "false");
    if (peek().is_keyword("exists") && peek(1).is_symbol("(")) {
      advance();
      advance();
      Query q = parse_query();
      expect_symbol(")");
      return Expr{Exists{Box<Query>(std::move(q))}};
    }
    if (accept_keyword("case")) return parse_case();
    if (peek().is_keyword("cast") && peek(1).is_symbol("(")) {
      advance();
      advance();
      Expr operand = parse_expr();
      expect_keyword("as");
      std::string type = parse_type_name();
      expect_symbol(")");
      return Expr{Cast{std::move(operand), std::move(type)}};
    }
    if (peek().is_keyword("array") && peek(1).is_symbol("[")) {
      advance();
      advance();
      ArrayCtor arr;
      if (!peek().is_symbol("]")) {
        do {
          arr.items.push_back(parse_expr());
        } while (accept_symbol(","));
      }
      expect_symbol("]");
      return Expr{std::move(arr)};
    }
    if (peek(1).is_symbol("(") && peek().kind == TokenKind::Identifier &&
        !(is_reserved(peek()) && peek().text != "left" && peek().text != "right")) {
      return parse_function();
    }
    if (is_reserved(peek())) fail("expression");
    return parse_column_ref();
  }

  Expr parse_column_ref() {
    const Token& first = advance();
    std::size_t end = first.offset + first.length;
    std::string name = first.text;
    std::optional<std::string> qualifier;
    if (peek().is_symbol(".")) {
      advance();
      if (!(peek().kind == TokenKind::Identifier || peek().kind == TokenKind::QuotedIdentifier)) {
        fail("column name");
      }
      const Token& second = advance();
      end = second.offset + second.length;
      qualifier = std::move(name);
      name = second.text;
    }
    return make_column(std::move(qualifier), std::move(name),
                       std::string(text_.substr(first.offset, end - first.offset)));
  }

  Expr parse_function() {
    Function fn;
    fn.name = advance().text;
    expect_symbol("(");
    if (accept_symbol("*")) {
      fn.star = true;
    } else if (!peek().is_symbol(")")) {
      if (accept_keyword("distinct")) {
        fn.distinct = true;
      } else {
        accept_keyword("all");
      }
      do {
        fn.args.push_back(parse_expr());
      } while (accept_symbol(","));
    }
    expect_symbol(")");
    if (accept_keyword("over")) fn.window = parse_window_spec();
    return Expr{std::move(fn)};
  }

  std::string parse_window_spec() {
    expect_symbol("(");
    std::string spec;
    int depth = 1;
    for (;;) {
      const Token& t = peek();
      if (t.kind == TokenKind::End) fail("')'");
      if (t.is_symbol("(")) ++depth;
      if (t.is_symbol(")") && --depth == 0) {
        advance();
        return spec;
      }
      if (!spec.empty()) spec += ' ';
      spec += spell(advance());
    }
  }

  Expr parse_case() {
    Case c;
    if (!peek().is_keyword("when")) c.operand = Box<Expr>(parse_expr());
    if (!peek().is_keyword("when")) fail("WHEN");
    while (accept_keyword("when")) {
      Expr cond = parse_expr();
      expect_keyword("then");
      Expr result = parse_expr();
      c.whens.push_back(WhenClause{std::move(cond), std::move(result)});
    }
    if (accept_keyword("else")) c.otherwise = Box<Expr>(parse_expr());
    expect_keyword("end");
    return Expr{std::move(c)};
  }

  std::string_view text_;
  ParseMode mode_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

SqlAst parse_sql(std::string_view text, ParseMode mode) {
  Parser parser(text, mode);
  return parser.parse_statement();
}

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Concat: return "||";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "<>";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "AND";
    case BinaryOp::Or: return "OR";
  }
  return "?";
}

const char* to_string(JoinKind kind) {
  switch (kind) {
    case JoinKind::Inner: return "inner";
    case JoinKind::Left: return "left";
    case JoinKind::Right: return "right";
    case JoinKind::Full: return "full";
    case JoinKind::Cross: return "cross";
  }
  return "?";
}

const char* to_string(SetOpKind kind) {
  switch (kind) {
    case SetOpKind::Union: return "UNION";
    case SetOpKind::Intersect: return "INTERSECT";
    case SetOpKind::Except: return "EXCEPT";
  }
  return "?";
}

bool is_aggregate_name(const std::string& name) {
  static constexpr std::array<std::string_view, 12> kAggregates = {
      "count", "sum", "avg", "min", "max", "total", "group_concat", "string_agg", "array_agg",
      "bool_and", "bool_or", "every"};
  return std::find(kAggregates.begin(), kAggregates.end(), name) != kAggregates.end();
}

}  // namespace sqleq::sql

namespace sqleq::sql {

bool is_reserved_word(std::string_view word) {
  return std::find(kReserved.begin(), kReserved.end(), word) != kReserved.end();
}

}  // namespace sqleq::sql
