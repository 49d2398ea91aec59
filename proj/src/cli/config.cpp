#include <charconv>
#include <cstdlib>

#include "sqleq/cli/cli.hpp"

extern char** environ;

namespace sqleq::cli {

namespace {

template <typename T>
void take(const nlohmann::json& j, const std::string& key, std::optional<T>& slot) {
  try {
    slot = j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw UsageError("config key '" + key + "' has the wrong type");
  }
}

template <typename T>
void overlay(std::optional<T>& into, const std::optional<T>& from) {
  if (from) into = from;
}

ConfigLayer merge(ConfigLayer base, const ConfigLayer& top) {
  overlay(base.backend, top.backend);
  overlay(base.endpoint, top.endpoint);
  overlay(base.api_key, top.api_key);
  overlay(base.model, top.model);
  overlay(base.classifier_model, top.classifier_model);
  overlay(base.temperature, top.temperature);
  overlay(base.max_tokens, top.max_tokens);
  overlay(base.timeout_seconds, top.timeout_seconds);
  overlay(base.max_retries, top.max_retries);
  overlay(base.parallelism, top.parallelism);
  overlay(base.seed, top.seed);
  overlay(base.mock_script, top.mock_script);
  overlay(base.exemplars, top.exemplars);
  overlay(base.unknown_policy, top.unknown_policy);
  return base;
}

}  // namespace

llm::GenConfig CliConfig::gen() const {
  llm::GenConfig g;
  g.model = model;
  g.temperature = temperature;
  g.max_output_tokens = max_tokens > 0 ? max_tokens : llm::default_max_tokens(model);
  g.timeout_seconds = timeout_seconds;
  g.max_retries = max_retries;
  g.parallelism = parallelism;
  return g;
}

llm::GenConfig CliConfig::classifier_gen() const {
  llm::GenConfig g = gen();
  if (!classifier_model.empty()) {
    g.model = classifier_model;
    if (max_tokens <= 0) g.max_output_tokens = llm::default_max_tokens(classifier_model);
  }
  return g;
}

ConfigLayer layer_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  ConfigLayer l;
  for (const auto& [key, v] : j.items()) {
    if (key == "backend") take(v, key, l.backend);
    else if (key == "endpoint") take(v, key, l.endpoint);
    else if (key == "api_key") take(v, key, l.api_key);
    else if (key == "model") take(v, key, l.model);
    else if (key == "classifier_model") take(v, key, l.classifier_model);
    else if (key == "temperature") take(v, key, l.temperature);
    else if (key == "max_tokens") take(v, key, l.max_tokens);
    else if (key == "timeout_seconds") take(v, key, l.timeout_seconds);
    else if (key == "max_retries") take(v, key, l.max_retries);
    else if (key == "parallelism") take(v, key, l.parallelism);
    else if (key == "seed") take(v, key, l.seed);
    else if (key == "mock_script") take(v, key, l.mock_script);
    else if (key == "exemplars") take(v, key, l.exemplars);
    else if (key == "unknown_policy") take(v, key, l.unknown_policy);
    else throw UsageError("unknown config key '" + key + "'");
  }
  return l;
}

ConfigLayer layer_from_env(const EnvMap& env) {
  ConfigLayer l;
  auto get = [&](const char* name) -> std::optional<std::string> {
    const auto it = env.find(name);
    if (it == env.end() || it->second.empty()) return std::nullopt;
    return it->second;
  };
  l.api_key = get("SQLEQ_API_KEY");
  l.endpoint = get("SQLEQ_ENDPOINT");
  l.model = get("SQLEQ_MODEL");
  if (const auto s = get("SQLEQ_SEED")) {
    std::uint64_t seed = 0;
    const auto [p, ec] = std::from_chars(s->data(), s->data() + s->size(), seed);
    if (ec != std::errc() || p != s->data() + s->size()) throw UsageError("SQLEQ_SEED is not an unsigned integer");
    l.seed = seed;
  }
  return l;
}

CliConfig resolve_config(const ConfigLayer& flags, const EnvMap& env, const std::optional<nlohmann::json>& file) {
  ConfigLayer l = file ? layer_from_json(*file) : ConfigLayer{};
  l = merge(std::move(l), layer_from_env(env));
  l = merge(std::move(l), flags);

  CliConfig c;
  if (l.backend) c.backend = *l.backend;
  if (l.endpoint) c.endpoint = *l.endpoint;
  if (l.api_key) c.api_key = *l.api_key;
  if (l.model) c.model = *l.model;
  if (l.classifier_model) c.classifier_model = *l.classifier_model;
  if (l.temperature) c.temperature = *l.temperature;
  if (l.max_tokens) c.max_tokens = *l.max_tokens;
  if (l.timeout_seconds) c.timeout_seconds = *l.timeout_seconds;
  if (l.max_retries) c.max_retries = *l.max_retries;
  if (l.parallelism) c.parallelism = *l.parallelism;
  if (l.seed) c.seed = *l.seed;
  c.mock_script = l.mock_script;
  c.exemplars = l.exemplars;
  if (l.unknown_policy) {
    const auto p = bench::unknown_policy_from_string(*l.unknown_policy);
    if (!p) throw UsageError("unknown_policy must be unknown-as-neq or unknown-wrong");
    c.unknown_policy = *p;
  }

  if (c.backend != "http" && c.backend != "mock") throw UsageError("backend must be http or mock");
  if (c.max_tokens < 0) throw UsageError("max_tokens must not be negative");
  try {
    c.gen().validate();
    c.classifier_gen().validate();
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  return c;
}

nlohmann::json config_to_json(const CliConfig& c) {
  const llm::GenConfig g = c.gen();
  const llm::GenConfig cg = c.classifier_gen();
  nlohmann::json j = {{"backend", c.backend},
                      {"endpoint", c.endpoint},
                      {"api_key", c.api_key.empty() ? "" : "***"},
                      {"model", g.model},
                      {"classifier_model", cg.model},
                      {"temperature", g.temperature},
                      {"max_tokens", g.max_output_tokens},
                      {"classifier_max_tokens", cg.max_output_tokens},
                      {"timeout_seconds", g.timeout_seconds},
                      {"max_retries", g.max_retries},
                      {"parallelism", g.parallelism},
                      {"seed", c.seed},
                      {"unknown_policy", bench::to_string(c.unknown_policy)}};
  j["mock_script"] = c.mock_script ? nlohmann::json(*c.mock_script) : nlohmann::json(nullptr);
  j["exemplars"] = c.exemplars ? nlohmann::json(*c.exemplars) : nlohmann::json(nullptr);
  return j;
}

EnvMap process_env() {
  EnvMap env;
  for (char** e = environ; e && *e; ++e) {
    const std::string kv(*e);
    const auto eq = kv.find('=');
    if (eq != std::string::npos && kv.rfind("SQLEQ_", 0) == 0) env.emplace(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return env;
}

}  // namespace sqleq::cli
