#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sqleq/error.hpp"
#include "sqleq/sql/schema.hpp"
#include "sqleq/types.hpp"

namespace sqleq::prompt {

class PromptError : public Error {
 public:
  using Error::Error;
};

class BadExemplarSet : public PromptError {
 public:
  using PromptError::PromptError;
};

class EmptyExplanation : public PromptError {
 public:
  using PromptError::PromptError;
};

class InsufficientPairs : public PromptError {
 public:
  using PromptError::PromptError;
};

enum class Strategy { Basic, Cot, Fewshot, MultistageExplain, MultistageDecide, Classify };

/// "basic", "cot", "fewshot", "multistage-explain", "multistage-decide", "classify".
const char* to_string(Strategy strategy);

struct PromptBundle {
  Strategy strategy = Strategy::Basic;
  int stage = 1;
  std::string body;
  std::string pair_id;
  std::optional<int> slot;  // 1 or 2 for the explain stage
};

/// Rendered plan text per query, or the plan placeholder.
struct PlanTexts {
  std::string plan1;
  std::string plan2;
};

struct Exemplar {
  std::string schema;  // already serialized
  std::string sql1;
  std::string sql2;
  Label label = Label::Equivalent;
  std::string explanation;
  std::string pair_id;  // source pair when sampled from a dataset
};

/// Four exemplars, two Equivalent and two Non Equivalent, in prompt order.
class ExemplarSet {
 public:
  /// Throws BadExemplarSet unless the composition rule holds.
  explicit ExemplarSet(std::vector<Exemplar> items);

  const std::vector<Exemplar>& items() const noexcept { return items_; }
  std::vector<std::string> pair_ids() const;

 private:
  std::vector<Exemplar> items_;
};

/// JSON list of {schema, sql1, sql2, label, explanation}.
ExemplarSet exemplars_from_json(const nlohmann::json& j);
nlohmann::json exemplars_to_json(const ExemplarSet& set);
ExemplarSet load_exemplar_file(const std::string& path);

PromptBundle build_basic(const QueryPair& pair, const sql::SchemaDef& schema,
                         const std::optional<PlanTexts>& plans);
PromptBundle build_cot(const QueryPair& pair, const sql::SchemaDef& schema,
                       const std::optional<PlanTexts>& plans);
PromptBundle build_fewshot(const QueryPair& pair, const sql::SchemaDef& schema,
                           const std::optional<PlanTexts>& plans, const ExemplarSet& exemplars);
/// Multi-stage step 1 for query `slot` (1 or 2).
PromptBundle build_explain(int slot, const QueryPair& pair, const sql::SchemaDef& schema,
                           const std::optional<PlanTexts>& plans);
/// Multi-stage step 2. Throws EmptyExplanation for a blank explanation.
PromptBundle build_decide(const QueryPair& pair, const sql::SchemaDef& schema,
                          const std::optional<PlanTexts>& plans, std::string_view expl1,
                          std::string_view expl2);
PromptBundle build_classify(std::string_view raw);

/// Plans for both queries of a pair; failures become the placeholder.
PlanTexts plans_for(const QueryPair& pair, const sql::SchemaDef& schema);

/// Deterministic sample of two Equivalent and two Non Equivalent labelled
/// pairs, exact matches skipped. Order: EQ, NEQ, EQ, NEQ.
ExemplarSet select_exemplars(const Dataset& dataset, std::uint64_t seed);

}  // namespace sqleq::prompt
