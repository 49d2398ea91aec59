#include "sqleq/llm/backend.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace sqleq::llm {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool strategy_matches(const std::string& wanted, prompt::Strategy actual) {
  const std::string name = prompt::to_string(actual);
  return wanted == name || name.rfind(wanted + "-", 0) == 0;
}

}  // namespace

void GenConfig::validate() const {
  if (model.empty()) throw InvalidInput("model id is empty");
  if (!(temperature >= 0)) throw InvalidInput("temperature must be >= 0");
  if (max_output_tokens <= 0) throw InvalidInput("max_output_tokens must be positive");
  if (!(timeout_seconds > 0)) throw InvalidInput("timeout must be positive");
  if (max_retries < 0) throw InvalidInput("max_retries must be >= 0");
  if (parallelism <= 0) throw InvalidInput("parallelism must be positive");
}

int default_max_tokens(std::string_view model) {
  const std::string m = lower(model);
  if (m.find("codellama") != std::string::npos || m.find("code-llama") != std::string::npos ||
      m.find("code_llama") != std::string::npos) {
    return 500;
  }
  if (m.find("gemini") != std::string::npos) return 10000;
  return 1000;
}

MockBackend::MockBackend(std::vector<MockRule> rules, std::string default_response)
    : rules_(std::move(rules)), default_response_(std::move(default_response)) {}

Completion MockBackend::complete(const prompt::PromptBundle& bundle, const GenConfig&) {
  ++calls_;
  {
    std::lock_guard lock(mu_);
    prompts_.push_back(bundle.body);
  }
  Completion c;
  c.text = default_response_;
  for (const MockRule& r : rules_) {
    if (r.substring && bundle.body.find(*r.substring) == std::string::npos) continue;
    if (r.pair_id && *r.pair_id != bundle.pair_id) continue;
    if (r.strategy && !strategy_matches(*r.strategy, bundle.strategy)) continue;
    c.text = r.response;
    break;
  }
  return c;
}

std::vector<std::string> MockBackend::prompts() const {
  std::lock_guard lock(mu_);
  return prompts_;
}

std::unique_ptr<MockBackend> mock_from_json(const nlohmann::json& j) {
  const nlohmann::json* list = &j;
  std::string fallback = "Unknown";
  if (j.is_object()) {
    list = &j.at("rules");
    fallback = j.value("default", fallback);
  }
  if (!list->is_array()) throw InvalidInput("mock script must be a list of rules");
  std::vector<MockRule> rules;
  try {
    for (const auto& item : *list) {
      MockRule r;
      const auto& m = item.at("match");
      if (m.contains("substring")) r.substring = m["substring"].get<std::string>();
      if (m.contains("pair_id")) r.pair_id = m["pair_id"].get<std::string>();
      if (m.contains("strategy")) r.strategy = m["strategy"].get<std::string>();
      r.response = item.at("response").get<std::string>();
      rules.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidInput(std::string("malformed mock rule: ") + ex.what());
  }
  return std::make_unique<MockBackend>(std::move(rules), fallback);
}

std::unique_ptr<MockBackend> load_mock_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open mock script '" + path + "'");
  try {
    return mock_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& ex) {
    throw InvalidInput("mock script '" + path + "': " + ex.what());
  }
}

Backoff::Backoff(const RetryPolicy& policy) : policy_(policy), rng_(policy.seed) {}

std::chrono::milliseconds Backoff::next() {
  const double raw = static_cast<double>(policy_.base.count()) * std::pow(policy_.factor, retry_++);
  const double capped = std::min(raw, static_cast<double>(policy_.max_delay.count()));
  std::uniform_real_distribution<double> dist(1.0 - policy_.jitter, 1.0 + policy_.jitter);
  const double j = policy_.jitter > 0 ? dist(rng_) : 1.0;
  return std::chrono::milliseconds(static_cast<long long>(std::llround(capped * j)));
}

nlohmann::json chat_request(const std::string& prompt_text, const GenConfig& cfg) {
  return {{"model", cfg.model},
          {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt_text}}})},
          {"temperature", cfg.temperature},
          {"max_tokens", cfg.max_output_tokens}};
}

Completion parse_chat_response(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& ex) {
    throw MalformedResponse(std::string("response is not JSON: ") + ex.what());
  }
  Completion c;
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw MalformedResponse("message content is not a string");
    c.text = content.get<std::string>();
    if (j.contains("usage") && j["usage"].is_object()) {
      Usage u;
      u.prompt_tokens = j["usage"].value("prompt_tokens", 0L);
      u.completion_tokens = j["usage"].value("completion_tokens", 0L);
      c.usage = u;
    }
  } catch (const nlohmann::json::exception& ex) {
    throw MalformedResponse(std::string("unexpected response shape: ") + ex.what());
  }
  return c;
}

}  // namespace sqleq::llm
