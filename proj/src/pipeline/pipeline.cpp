#include "sqleq/pipeline/pipeline.hpp"

#include <chrono>
#include <regex>

#include <nlohmann/json.hpp>

#include "sqleq/sql/normalize.hpp"

namespace sqleq::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

class Runner {
 public:
  Runner(Verdict& v, const Backends& b, const PipelineConfig& cfg) : v_(v), b_(b), cfg_(cfg) {}

  std::string call(const std::string& stage, const prompt::PromptBundle& bundle, bool classifier) {
    llm::Backend* backend = classifier ? b_.classifier : b_.strategy;
    const auto t = Clock::now();
    llm::Completion c = backend->complete(bundle, classifier ? cfg_.classifier_gen : cfg_.gen);
    v_.stages.push_back({stage, c, ms_since(t)});
    return c.text;
  }

 private:
  Verdict& v_;
  const Backends& b_;
  const PipelineConfig& cfg_;
};

void run(Verdict& v, const QueryPair& pair, const sql::SchemaDef& schema, const Backends& backends,
         const PipelineConfig& cfg) {
  Runner r(v, backends, cfg);
  std::optional<prompt::PlanTexts> plans;
  if (v.plans) plans = prompt::plans_for(pair, schema);
  switch (v.strategy) {
    case StrategyKind::Basic: v.raw = r.call("strategy", prompt::build_basic(pair, schema, plans), false); break;
    case StrategyKind::Cot: v.raw = r.call("strategy", prompt::build_cot(pair, schema, plans), false); break;
    case StrategyKind::Fewshot:
      v.raw = r.call("strategy", prompt::build_fewshot(pair, schema, plans, *cfg.exemplars), false);
      break;
    case StrategyKind::Multistage: {
      const std::string e1 = r.call("explain1", prompt::build_explain(1, pair, schema, plans), false);
      const std::string e2 = r.call("explain2", prompt::build_explain(2, pair, schema, plans), false);
      v.raw = r.call("strategy", prompt::build_decide(pair, schema, plans, e1, e2), false);
      break;
    }
  }
  prompt::PromptBundle cls = prompt::build_classify(prune_output(v.raw));
  cls.pair_id = pair.id;
  v.classifier_raw = r.call("classify", cls, true);
  v.label = parse_label(v.classifier_raw);
}

}  // namespace

const char* to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Basic: return "basic";
    case StrategyKind::Cot: return "cot";
    case StrategyKind::Fewshot: return "fewshot";
    case StrategyKind::Multistage: return "multistage";
  }
  return "?";
}

std::optional<StrategyKind> strategy_from_string(std::string_view name) {
  for (StrategyKind k : {StrategyKind::Basic, StrategyKind::Cot, StrategyKind::Fewshot, StrategyKind::Multistage}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

Verdict check_pair(const QueryPair& pair, const sql::SchemaDef& schema, StrategyKind strategy, bool plans,
                   const Backends& backends, const PipelineConfig& cfg) {
  const auto started = Clock::now();
  Verdict v;
  v.pair_id = pair.id;
  v.strategy = strategy;
  v.plans = plans;

  if (cfg.shortcut_exact && sql::exact_match(pair.sql1, pair.sql2)) {
    v.label = Label::Equivalent;
    v.shortcut = true;
    v.total_ms = ms_since(started);
    return v;
  }
  if (!backends.strategy || !backends.classifier) throw InvalidInput("check_pair needs both backends");
  if (strategy == StrategyKind::Fewshot && !cfg.exemplars) throw InvalidInput("fewshot strategy needs an exemplar set");

  try {
    run(v, pair, schema, backends, cfg);
  } catch (const llm::AuthError&) {
    throw;
  } catch (const llm::BackendError& e) {
    if (!cfg.fail_soft) throw;
    v.label = Label::Unknown;
    v.error = e.what();
  } catch (const prompt::EmptyExplanation& e) {
    if (!cfg.fail_soft) throw;
    v.label = Label::Unknown;
    v.error = e.what();
  }
  v.total_ms = ms_since(started);
  return v;
}

Label parse_label(std::string_view classifier_text) {
  static const std::regex non_eq(R"(non[\s_-]*equivalent)", std::regex::icase);
  static const std::regex eq("equivalent", std::regex::icase);
  const std::string text(classifier_text);
  if (std::regex_search(text, non_eq)) return Label::NonEquivalent;
  if (std::regex_search(text, eq)) return Label::Equivalent;
  return Label::Unknown;
}

std::string prune_output(std::string_view text) {
  std::string clean;
  clean.reserve(text.size());
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == '\n' || c == '\t' || (c >= 0x20 && c != 0x7f)) clean.push_back(ch);
  }
  std::string out;
  std::optional<std::string_view> prev;
  std::string_view rest(clean);
  while (true) {
    const auto nl = rest.find('\n');
    const std::string_view line = rest.substr(0, nl);
    if (!prev || line != *prev) {
      if (prev) out.push_back('\n');
      out.append(line);
    }
    prev = line;
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  return out;
}

nlohmann::json verdict_to_json(const Verdict& v) {
  nlohmann::json timings = nlohmann::json::object();
  nlohmann::json attempts = nlohmann::json::object();
  for (const StageRecord& s : v.stages) {
    timings[s.stage + "_ms"] = s.wall_ms;
    attempts[s.stage] = s.completion.attempts;
  }
  timings["total_ms"] = v.total_ms;
  nlohmann::json j = {{"pair_id", v.pair_id},
                      {"strategy", to_string(v.strategy)},
                      {"plans", v.plans},
                      {"label", to_string(v.label)},
                      {"shortcut", v.shortcut},
                      {"raw", v.raw},
                      {"classifier_raw", v.classifier_raw},
                      {"timings", timings},
                      {"attempts", attempts}};
  if (v.error) j["error"] = *v.error;
  return j;
}

Verdict verdict_from_json(const nlohmann::json& j) {
  Verdict v;
  try {
    v.pair_id = j.at("pair_id").get<std::string>();
    const auto s = strategy_from_string(j.at("strategy").get<std::string>());
    if (!s) throw InvalidInput("unknown strategy in verdict");
    v.strategy = *s;
    v.plans = j.at("plans").get<bool>();
    const auto l = label_from_string(j.at("label").get<std::string>());
    if (!l) throw InvalidInput("unknown label in verdict");
    v.label = *l;
    v.shortcut = j.at("shortcut").get<bool>();
    v.raw = j.value("raw", "");
    v.classifier_raw = j.value("classifier_raw", "");
    if (j.contains("error")) v.error = j["error"].get<std::string>();
    if (j.contains("timings")) v.total_ms = j["timings"].value("total_ms", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed verdict: ") + e.what());
  }
  return v;
}

}  // namespace sqleq::pipeline
