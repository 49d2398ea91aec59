#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "sqleq/bench/bench.hpp"
#include "sqleq/llm/backend.hpp"

namespace sqleq::cli {

enum ExitCode : int {
  kExitEquivalent = 0,
  kExitNonEquivalent = 1,
  kExitUnknown = 2,
  kExitUsage = 64,
  kExitData = 65,
  kExitBackend = 69,
  kExitInternal = 70,
};

/// Bad flags, missing files, unreadable config.
class UsageError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// One source of settings; unset fields fall through to the next source.
struct ConfigLayer {
  std::optional<std::string> backend;  // "http" or "mock"
  std::optional<std::string> endpoint;
  std::optional<std::string> api_key;
  std::optional<std::string> model;
  std::optional<std::string> classifier_model;
  std::optional<double> temperature;
  std::optional<int> max_tokens;
  std::optional<double> timeout_seconds;
  std::optional<int> max_retries;
  std::optional<int> parallelism;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mock_script;
  std::optional<std::string> exemplars;
  std::optional<std::string> unknown_policy;
};

struct CliConfig {
  std::string backend = "http";
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string api_key;
  std::string model = "gpt-4";
  std::string classifier_model;  // empty: same as model
  double temperature = 0.2;
  int max_tokens = 0;            // 0: per-model default
  double timeout_seconds = 120;
  int max_retries = 3;
  int parallelism = 4;
  std::uint64_t seed = 0;
  std::optional<std::string> mock_script;
  std::optional<std::string> exemplars;
  bench::UnknownPolicy unknown_policy = bench::UnknownPolicy::AsNonEquivalent;

  llm::GenConfig gen() const;
  llm::GenConfig classifier_gen() const;
};

using EnvMap = std::map<std::string, std::string>;

/// Keys as in ConfigLayer; unknown keys and wrong types are UsageError.
ConfigLayer layer_from_json(const nlohmann::json& j);
/// SQLEQ_API_KEY, SQLEQ_ENDPOINT, SQLEQ_MODEL, SQLEQ_SEED.
ConfigLayer layer_from_env(const EnvMap& env);

/// flags > env > file > defaults. The result is validated.
CliConfig resolve_config(const ConfigLayer& flags, const EnvMap& env, const std::optional<nlohmann::json>& file);

/// Echo for reports; the API key is masked.
nlohmann::json config_to_json(const CliConfig& cfg);

/// SQLEQ_* variables of the current process.
EnvMap process_env();

/// Whole command line; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const EnvMap& env);

}  // namespace sqleq::cli
