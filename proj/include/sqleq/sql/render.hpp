#pragma once

#include <string>
#include <string_view>

#include "sqleq/sql/ast.hpp"

namespace sqleq::sql {

/// Canonical single-line rendering of a statement. Keywords are upper-case,
/// identifiers are emitted bare when possible and double-quoted otherwise,
/// and parentheses appear only where precedence requires them, so
/// `parse_sql(render_sql(ast))` reproduces `ast`.
std::string render_sql(const SqlAst& ast);
std::string render_query(const Query& query);
std::string render_expr(const Expr& expr);

/// Bare identifier when it lexes back to itself, otherwise double-quoted.
std::string render_identifier(std::string_view name);

/// True for words the parser refuses as bare names.
bool is_reserved_word(std::string_view word);

}  // namespace sqleq::sql
