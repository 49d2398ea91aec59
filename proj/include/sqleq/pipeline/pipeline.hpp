#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sqleq/llm/backend.hpp"
#include "sqleq/prompt/prompts.hpp"
#include "sqleq/sql/schema.hpp"
#include "sqleq/types.hpp"

namespace sqleq::pipeline {

enum class StrategyKind { Basic, Cot, Fewshot, Multistage };

/// "basic", "cot", "fewshot", "multistage".
const char* to_string(StrategyKind kind);
std::optional<StrategyKind> strategy_from_string(std::string_view name);

struct PipelineConfig {
  llm::GenConfig gen;
  llm::GenConfig classifier_gen;
  std::optional<prompt::ExemplarSet> exemplars;  // required for fewshot
  bool shortcut_exact = true;
  bool fail_soft = false;  // AuthError always propagates
};

/// The classifier may be the same object as the strategy backend.
struct Backends {
  llm::Backend* strategy = nullptr;
  llm::Backend* classifier = nullptr;
};

struct StageRecord {
  std::string stage;  // "explain1", "explain2", "strategy", "classify"
  llm::Completion completion;
  double wall_ms = 0;
};

struct Verdict {
  std::string pair_id;
  StrategyKind strategy = StrategyKind::Basic;
  bool plans = false;
  Label label = Label::Unknown;
  bool shortcut = false;
  std::string raw;             // final strategy output, before pruning
  std::string classifier_raw;
  std::vector<StageRecord> stages;
  std::optional<std::string> error;  // set only in fail-soft mode
  double total_ms = 0;
};

/// Runs one pair end to end. Exact matches short-circuit to Equivalent
/// with no backend call unless cfg.shortcut_exact is off.
Verdict check_pair(const QueryPair& pair, const sql::SchemaDef& schema, StrategyKind strategy, bool plans,
                   const Backends& backends, const PipelineConfig& cfg);

/// Case-insensitive; "non equivalent" in any spacing/hyphenation wins over
/// "equivalent". Nothing recognised gives Unknown.
Label parse_label(std::string_view classifier_text);

/// Drops control characters other than newline and tab, and collapses runs
/// of identical consecutive lines to one.
std::string prune_output(std::string_view text);

/// {pair_id, strategy, plans, label, shortcut, raw, classifier_raw,
///  timings, attempts[, error]}
nlohmann::json verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);

}  // namespace sqleq::pipeline
