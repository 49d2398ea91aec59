#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqleq/error.hpp"
#include "sqleq/sql/schema.hpp"

namespace sqleq {

/// Verdict or ground-truth class of a query pair. Ground truth is never
/// Unknown.
enum class Label { Equivalent, NonEquivalent, Unknown };

enum class Difficulty { Easy, Medium, Hard, ExtraHard, Unlabeled };

/// "Equivalent", "Non Equivalent", "Unknown".
const char* to_string(Label label);
/// Accepts the display names plus the short forms EQ / NEQ and common
/// spellings ("non-equivalent", "nonequivalent"); case-insensitive.
std::optional<Label> label_from_string(std::string_view text);

/// "Easy", "Medium", "Hard", "ExtraHard", "Unlabeled".
const char* to_string(Difficulty difficulty);
/// Case-insensitive; "extra", "extra-hard" and "extra hard" map to ExtraHard.
std::optional<Difficulty> difficulty_from_string(std::string_view text);

/// One benchmark item: two queries over a named schema.
struct QueryPair {
  std::string id;
  std::string sql1;
  std::string sql2;
  std::string schema;  // key into the schemas file
  std::optional<Label> label;
  Difficulty difficulty = Difficulty::Unlabeled;
  std::optional<std::string> question;
  std::optional<std::string> explanation;
  bool exact_match = false;
};

/// Pairs in file order plus the schemas they reference by name.
struct Dataset {
  std::vector<QueryPair> pairs;
  std::map<std::string, sql::SchemaDef> schemas;

  /// Throws InvalidInput if the pair's schema is missing.
  const sql::SchemaDef& schema_of(const QueryPair& pair) const;
};

}  // namespace sqleq
