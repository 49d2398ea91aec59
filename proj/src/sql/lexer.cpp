#include "sqleq/sql/lexer.hpp"

#include <cctype>

#include "sqleq/sql/parser.hpp"

namespace sqleq::sql {

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}
bool ident_char(char c) {
  return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '$';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Reads a quoted run starting at `pos` (which holds `quote`); doubled quotes
// are an escaped quote. Returns the unescaped contents and advances `pos`.
std::string read_quoted(std::string_view text, std::size_t& pos, char quote, const char* what) {
  const std::size_t start = pos;
  ++pos;
  std::string out;
  while (pos < text.size()) {
    if (text[pos] == quote) {
      if (pos + 1 < text.size() && text[pos + 1] == quote) {
        out.push_back(quote);
        pos += 2;
        continue;
      }
      ++pos;
      return out;
    }
    out.push_back(text[pos++]);
  }
  throw SyntaxError(start, std::string("closing ") + quote,
                    std::string("unterminated ") + what + " at offset " + std::to_string(start));
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  const std::size_t n = text.size();

  auto push = [&](TokenKind kind, std::string value, std::size_t start) {
    tokens.push_back(Token{kind, std::move(value), start, pos - start});
  };

  while (pos < n) {
    const char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
      continue;
    }
    if (c == '-' && pos + 1 < n && text[pos + 1] == '-') {
      while (pos < n && text[pos] != '\n') ++pos;
      continue;
    }
    if (c == '/' && pos + 1 < n && text[pos + 1] == '*') {
      const std::size_t start = pos;
      pos += 2;
      while (pos + 1 < n && !(text[pos] == '*' && text[pos + 1] == '/')) ++pos;
      if (pos + 1 >= n) throw SyntaxError(start, "*/", "unterminated comment");
      pos += 2;
      continue;
    }

    const std::size_t start = pos;
    if (ident_start(c)) {
      while (pos < n && ident_char(text[pos])) ++pos;
      push(TokenKind::Identifier, to_lower(text.substr(start, pos - start)), start);
      continue;
    }
    if (c == '"' || c == '`') {
      std::string value = read_quoted(text, pos, c, "quoted identifier");
      push(TokenKind::QuotedIdentifier, std::move(value), start);
      continue;
    }
    if (c == '\'') {
      std::string value = read_quoted(text, pos, '\'', "string literal");
      push(TokenKind::String, std::move(value), start);
      continue;
    }
    if (digit(c) || (c == '.' && pos + 1 < n && digit(text[pos + 1]))) {
      bool real = false;
      while (pos < n && digit(text[pos])) ++pos;
      if (pos < n && text[pos] == '.' && !(pos + 1 < n && text[pos + 1] == '.')) {
        real = true;
        ++pos;
        while (pos < n && digit(text[pos])) ++pos;
      }
      if (pos < n && (text[pos] == 'e' || text[pos] == 'E')) {
        std::size_t look = pos + 1;
        if (look < n && (text[look] == '+' || text[look] == '-')) ++look;
        if (look < n && digit(text[look])) {
          real = true;
          pos = look;
          while (pos < n && digit(text[pos])) ++pos;
        }
      }
      push(real ? TokenKind::Real : TokenKind::Integer, std::string(text.substr(start, pos - start)),
           start);
      continue;
    }

    static constexpr std::string_view kTwoChar[] = {"||", "<>", "!=", "<=", ">=", "::", "=="};
    bool matched = false;
    if (pos + 1 < n) {
      const std::string_view two = text.substr(pos, 2);
      for (std::string_view sym : kTwoChar) {
        if (two == sym) {
          pos += 2;
          push(TokenKind::Symbol, sym == "==" ? "=" : std::string(sym), start);
          matched = true;
          break;
        }
      }
    }
    if (matched) continue;

    static constexpr std::string_view kOneChar = "(),.;*+-/%=<>[]";
    if (kOneChar.find(c) != std::string_view::npos) {
      ++pos;
      push(TokenKind::Symbol, std::string(1, c), start);
      continue;
    }
    throw SyntaxError(start, "token", "unexpected character '" + std::string(1, c) + "' at offset " +
                                          std::to_string(start));
  }
  tokens.push_back(Token{TokenKind::End, "", n, 0});
  return tokens;
}

}  // namespace sqleq::sql
