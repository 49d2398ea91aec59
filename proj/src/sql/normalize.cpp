#include "sqleq/sql/normalize.hpp"

#include <cctype>

namespace sqleq::sql {

std::string normalize_query(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = true;
      ++i;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;

    if (c == '\'' || c == '"' || c == '`') {
      // Copy the quoted run verbatim, honouring doubled-quote escapes. An
      // unterminated run extends to the end of the input.
      out.push_back(c);
      ++i;
      while (i < text.size()) {
        out.push_back(text[i]);
        if (text[i] == c) {
          if (i + 1 < text.size() && text[i + 1] == c) {
            out.push_back(text[i + 1]);
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        ++i;
      }
      continue;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    ++i;
  }
  // Trailing semicolons (possibly separated by spaces) are dropped.
  while (!out.empty() && (out.back() == ';' || out.back() == ' ')) out.pop_back();
  return out;
}

bool exact_match(std::string_view q1, std::string_view q2) {
  return normalize_query(q1) == normalize_query(q2);
}

}  // namespace sqleq::sql
