#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sqleq::sql {

enum class TokenKind {
  Identifier,        // unquoted; text is lower-cased
  QuotedIdentifier,  // "Foo"; text is the unescaped contents
  Integer,
  Real,
  String,  // text is the unescaped contents
  Symbol,  // punctuation and operators: ( ) , . ; * + - / % || = <> != < <= > >= :: [ ]
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::size_t offset = 0;  // byte offset of the first character
  std::size_t length = 0;

  /// Case-insensitive keyword test; only unquoted identifiers qualify.
  bool is_keyword(std::string_view kw) const {
    return kind == TokenKind::Identifier && text == kw;
  }
  bool is_symbol(std::string_view sym) const { return kind == TokenKind::Symbol && text == sym; }
};

/// Splits SQL text into tokens, skipping whitespace and `--` / `/* */`
/// comments. Throws SyntaxError on unterminated literals or stray bytes.
std::vector<Token> tokenize(std::string_view text);

std::string to_lower(std::string_view s);

}  // namespace sqleq::sql
