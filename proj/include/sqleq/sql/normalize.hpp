#pragma once

#include <string>
#include <string_view>

namespace sqleq::sql {

/// Canonical form used for exact-match detection: surrounding whitespace and
/// trailing semicolons removed, whitespace runs collapsed to one space, and
/// everything outside string literals and quoted identifiers lower-cased.
/// Literal contents are never touched.
std::string normalize_query(std::string_view text);

/// normalize_query(q1) == normalize_query(q2).
bool exact_match(std::string_view q1, std::string_view q2);

}  // namespace sqleq::sql
