#include "sqleq/prompt/prompts.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "sqleq/plan/logical_plan.hpp"
#include "sqleq/sql/normalize.hpp"

namespace sqleq::prompt {

namespace {

constexpr std::string_view kTaskPair =
    "Given the database schema and two SQL queries, SQL_1 and SQL_2, determine whether SQL_1 and SQL_2 are "
    "\"Equivalent\" or \"Non Equivalent\". Two SQL queries are \"Equivalent\" if both queries produce the same "
    "result when executed on the given database schema.";

constexpr std::string_view kTaskDecide =
    "Given the database schema and two SQL queries with explanation, SQL_1 and SQL_2, determine whether SQL_1 "
    "and SQL_2 are \"Equivalent\" or \"Non Equivalent\". Two SQL queries are \"Equivalent\" if both queries "
    "produce the same result when executed on the given database schema.";

constexpr std::string_view kSteps =
    "### Steps\n"
    "Let's think step by step as follows:\n"
    "Step 1: Explain in brief each of the two queries, SQL_1 and SQL_2.\n"
    "Step 2: Based on the explanation, determine whether SQL_1 and SQL_2 are \"Equivalent\" or \"Non "
    "Equivalent\".\n"
    "Step 3: Provide the analysis and reasoning for the conclusion.";

constexpr std::string_view kTaskClassify =
    "You are given a text and you have to determine whether the given text is concluding to \"Equivalent\", "
    "\"Non Equivalent\", or \"Unknown\". Choose one of the following options [\"Equivalent\", \"Non "
    "Equivalent\", or \"Unknown\"]";

constexpr std::string_view kAnswer = "### Answer\n";

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string task_section(std::string_view text) { return "### Task\n" + std::string(text); }

std::string schema_section(const sql::SchemaDef& schema) {
  return "### Database Schema\nThe query will run on a database with the following schema:\n" +
         sql::serialize_schema(schema);
}

std::string query_block(int slot, std::string_view sql, const std::string* plan) {
  std::string out = "[SQL_" + std::to_string(slot) + "] " + trim(sql);
  if (plan) out += "\n" + *plan;
  return out;
}

std::string sql_section(const QueryPair& pair, const std::optional<PlanTexts>& plans) {
  return "### SQL\n" + query_block(1, pair.sql1, plans ? &plans->plan1 : nullptr) + "\n\n" +
         query_block(2, pair.sql2, plans ? &plans->plan2 : nullptr);
}

std::string join_sections(const std::vector<std::string>& sections) {
  std::string out;
  for (const auto& s : sections) out += s + "\n\n";
  return out;
}

PromptBundle bundle(Strategy strategy, int stage, std::string body, const std::string& pair_id) {
  PromptBundle b;
  b.strategy = strategy;
  b.stage = stage;
  b.body = std::move(body);
  b.pair_id = pair_id;
  return b;
}

std::string exemplar_block(std::size_t n, const Exemplar& e) {
  std::string out = "### Example " + std::to_string(n) + "\nDatabase Schema:\n" + e.schema + "\n\n[SQL_1] " +
                    trim(e.sql1) + "\n[SQL_2] " + trim(e.sql2) + "\n\nAnswer: " + to_string(e.label);
  if (!trim(e.explanation).empty()) out += "\nExplanation: " + trim(e.explanation);
  return out;
}

}  // namespace

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Basic: return "basic";
    case Strategy::Cot: return "cot";
    case Strategy::Fewshot: return "fewshot";
    case Strategy::MultistageExplain: return "multistage-explain";
    case Strategy::MultistageDecide: return "multistage-decide";
    case Strategy::Classify: return "classify";
  }
  return "?";
}

ExemplarSet::ExemplarSet(std::vector<Exemplar> items) : items_(std::move(items)) {
  if (items_.size() != 4) {
    throw BadExemplarSet("exemplar set needs exactly 4 entries, got " + std::to_string(items_.size()));
  }
  const auto eq = std::count_if(items_.begin(), items_.end(),
                                [](const Exemplar& e) { return e.label == Label::Equivalent; });
  const auto neq = std::count_if(items_.begin(), items_.end(),
                                 [](const Exemplar& e) { return e.label == Label::NonEquivalent; });
  if (eq != 2 || neq != 2) {
    throw BadExemplarSet("exemplar set needs 2 Equivalent and 2 Non Equivalent entries, got " +
                         std::to_string(eq) + " and " + std::to_string(neq));
  }
}

std::vector<std::string> ExemplarSet::pair_ids() const {
  std::vector<std::string> out;
  for (const auto& e : items_) {
    if (!e.pair_id.empty()) out.push_back(e.pair_id);
  }
  return out;
}

ExemplarSet exemplars_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw BadExemplarSet("exemplar file must hold a JSON list");
  std::vector<Exemplar> items;
  for (const auto& item : j) {
    try {
      Exemplar e;
      e.schema = item.at("schema").get<std::string>();
      e.sql1 = item.at("sql1").get<std::string>();
      e.sql2 = item.at("sql2").get<std::string>();
      const auto label = label_from_string(item.at("label").get<std::string>());
      if (!label || *label == Label::Unknown) throw BadExemplarSet("exemplar label must be Equivalent or Non Equivalent");
      e.label = *label;
      e.explanation = item.value("explanation", "");
      e.pair_id = item.value("pair_id", "");
      items.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw BadExemplarSet(std::string("malformed exemplar: ") + ex.what());
    }
  }
  return ExemplarSet(std::move(items));
}

nlohmann::json exemplars_to_json(const ExemplarSet& set) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : set.items()) {
    nlohmann::json item = {{"schema", e.schema},
                           {"sql1", e.sql1},
                           {"sql2", e.sql2},
                           {"label", to_string(e.label)},
                           {"explanation", e.explanation}};
    if (!e.pair_id.empty()) item["pair_id"] = e.pair_id;
    out.push_back(std::move(item));
  }
  return out;
}

ExemplarSet load_exemplar_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open exemplar file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw BadExemplarSet("exemplar file '" + path + "': " + ex.what());
  }
  return exemplars_from_json(j);
}

PromptBundle build_basic(const QueryPair& pair, const sql::SchemaDef& schema, const std::optional<PlanTexts>& plans) {
  std::string body = join_sections({task_section(kTaskPair), schema_section(schema), sql_section(pair, plans)});
  return bundle(Strategy::Basic, 1, body + std::string(kAnswer), pair.id);
}

PromptBundle build_cot(const QueryPair& pair, const sql::SchemaDef& schema, const std::optional<PlanTexts>& plans) {
  std::string body = join_sections(
      {task_section(kTaskPair), schema_section(schema), sql_section(pair, plans), std::string(kSteps)});
  return bundle(Strategy::Cot, 1, body + std::string(kAnswer), pair.id);
}

PromptBundle build_fewshot(const QueryPair& pair, const sql::SchemaDef& schema, const std::optional<PlanTexts>& plans,
                           const ExemplarSet& exemplars) {
  std::vector<std::string> sections;
  const auto& items = exemplars.items();
  for (std::size_t i = 0; i < items.size(); ++i) sections.push_back(exemplar_block(i + 1, items[i]));
  sections.push_back("### Question\n" + task_section(kTaskPair));
  sections.push_back(schema_section(schema));
  sections.push_back(sql_section(pair, plans));
  return bundle(Strategy::Fewshot, 1, join_sections(sections) + std::string(kAnswer), pair.id);
}

PromptBundle build_explain(int slot, const QueryPair& pair, const sql::SchemaDef& schema,
                           const std::optional<PlanTexts>& plans) {
  if (slot != 1 && slot != 2) throw PromptError("query slot must be 1 or 2");
  const std::string name = "SQL_" + std::to_string(slot);
  const std::string task = "Given the database schema and an SQL query, i.e., " + name + ", briefly describe the SQL query.";
  const std::string* plan = plans ? (slot == 1 ? &plans->plan1 : &plans->plan2) : nullptr;
  const std::string sql = "### SQL\n" + query_block(slot, slot == 1 ? pair.sql1 : pair.sql2, plan);
  PromptBundle b = bundle(Strategy::MultistageExplain, 1,
                          join_sections({task_section(task), schema_section(schema), sql}) + std::string(kAnswer),
                          pair.id);
  b.slot = slot;
  return b;
}

PromptBundle build_decide(const QueryPair& pair, const sql::SchemaDef& schema, const std::optional<PlanTexts>& plans,
                          std::string_view expl1, std::string_view expl2) {
  if (trim(expl1).empty()) throw EmptyExplanation("explanation for SQL_1 is empty");
  if (trim(expl2).empty()) throw EmptyExplanation("explanation for SQL_2 is empty");
  std::string body = join_sections({task_section(kTaskDecide), schema_section(schema), sql_section(pair, plans),
                                    "### Explanation for SQL_1\n" + std::string(expl1),
                                    "### Explanation for SQL_2\n" + std::string(expl2)});
  return bundle(Strategy::MultistageDecide, 2, body + std::string(kAnswer), pair.id);
}

PromptBundle build_classify(std::string_view raw) {
  std::string body = join_sections({task_section(kTaskClassify), "### Text\n" + std::string(raw)}) + "### Answer";
  return bundle(Strategy::Classify, 1, body, "");
}

PlanTexts plans_for(const QueryPair& pair, const sql::SchemaDef& schema) {
  return {plan::plan_or_placeholder(pair.sql1, schema), plan::plan_or_placeholder(pair.sql2, schema)};
}

ExemplarSet select_exemplars(const Dataset& dataset, std::uint64_t seed) {
  std::vector<const QueryPair*> eq;
  std::vector<const QueryPair*> neq;
  for (const auto& p : dataset.pairs) {
    if (!p.label || p.exact_match || sql::exact_match(p.sql1, p.sql2)) continue;
    if (*p.label == Label::Equivalent) eq.push_back(&p);
    if (*p.label == Label::NonEquivalent) neq.push_back(&p);
  }
  if (eq.size() < 2 || neq.size() < 2) {
    throw InsufficientPairs("need at least 2 Equivalent and 2 Non Equivalent pairs, have " + std::to_string(eq.size()) +
                            " and " + std::to_string(neq.size()));
  }
  const auto by_id = [](const QueryPair* a, const QueryPair* b) { return a->id < b->id; };
  std::sort(eq.begin(), eq.end(), by_id);
  std::sort(neq.begin(), neq.end(), by_id);

  std::mt19937_64 rng(seed);
  const auto draw = [&rng](std::vector<const QueryPair*>& pool) {
    const std::size_t i = static_cast<std::size_t>(rng() % pool.size());
    const QueryPair* p = pool[i];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
    return p;
  };
  const QueryPair* e1 = draw(eq);
  const QueryPair* e2 = draw(eq);
  const QueryPair* n1 = draw(neq);
  const QueryPair* n2 = draw(neq);

  std::vector<Exemplar> items;
  for (const QueryPair* p : {e1, n1, e2, n2}) {
    Exemplar e;
    e.schema = sql::serialize_schema(dataset.schema_of(*p));
    e.sql1 = p->sql1;
    e.sql2 = p->sql2;
    e.label = *p->label;
    e.explanation = p->explanation.value_or("");
    e.pair_id = p->id;
    items.push_back(std::move(e));
  }
  return ExemplarSet(std::move(items));
}

}  // namespace sqleq::prompt
