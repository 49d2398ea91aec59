#include "sqleq/types.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace sqleq {

namespace {

// Lower-cased with spaces, dashes and underscores removed.
std::string squash(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == ' ' || c == '-' || c == '_') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

const char* to_string(Label label) {
  switch (label) {
    case Label::Equivalent: return "Equivalent";
    case Label::NonEquivalent: return "Non Equivalent";
    case Label::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::optional<Label> label_from_string(std::string_view text) {
  const std::string s = squash(text);
  if (s == "equivalent" || s == "eq" || s == "true" || s == "1") return Label::Equivalent;
  if (s == "nonequivalent" || s == "neq" || s == "false" || s == "0") return Label::NonEquivalent;
  if (s == "unknown") return Label::Unknown;
  return std::nullopt;
}

const char* to_string(Difficulty difficulty) {
  switch (difficulty) {
    case Difficulty::Easy: return "Easy";
    case Difficulty::Medium: return "Medium";
    case Difficulty::Hard: return "Hard";
    case Difficulty::ExtraHard: return "ExtraHard";
    case Difficulty::Unlabeled: return "Unlabeled";
  }
  return "Unlabeled";
}

std::optional<Difficulty> difficulty_from_string(std::string_view text) {
  const std::string s = squash(text);
  if (s == "easy") return Difficulty::Easy;
  if (s == "medium") return Difficulty::Medium;
  if (s == "hard") return Difficulty::Hard;
  if (s == "extra" || s == "extrahard") return Difficulty::ExtraHard;
  if (s.empty() || s == "unlabeled" || s == "none") return Difficulty::Unlabeled;
  return std::nullopt;
}

const sql::SchemaDef& Dataset::schema_of(const QueryPair& pair) const {
  auto it = schemas.find(pair.schema);
  if (it == schemas.end()) throw InvalidInput("pair '" + pair.id + "' references unknown schema '" + pair.schema + "'");
  return it->second;
}

}  // namespace sqleq
