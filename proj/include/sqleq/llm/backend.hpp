#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <semaphore>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sqleq/error.hpp"
#include "sqleq/prompt/prompts.hpp"

namespace sqleq::llm {

class BackendError : public Error {
 public:
  using Error::Error;
};

/// Credential rejected (401/403). Never retried.
class AuthError : public BackendError {
 public:
  using BackendError::BackendError;
};

/// Still throttled (429) after the last retry.
class ThrottledExhausted : public BackendError {
 public:
  using BackendError::BackendError;
};

/// Connection failure, timeout or server error.
class TransportError : public BackendError {
 public:
  using BackendError::BackendError;
};

/// 2xx reply whose body is not a chat-completion object.
class MalformedResponse : public BackendError {
 public:
  using BackendError::BackendError;
};

struct GenConfig {
  std::string model = "gpt-4";
  double temperature = 0.2;
  int max_output_tokens = 1000;
  double timeout_seconds = 120;
  int max_retries = 3;
  int parallelism = 4;

  /// Throws InvalidInput on out-of-range fields.
  void validate() const;
};

/// 500 for Code Llama models, 10000 for Gemini, 1000 otherwise.
int default_max_tokens(std::string_view model);

struct Usage {
  long prompt_tokens = 0;
  long completion_tokens = 0;
};

struct Completion {
  std::string text;
  std::optional<Usage> usage;
  double latency_ms = 0;
  int attempts = 1;
};

class Backend {
 public:
  virtual ~Backend() = default;
  /// Thread-safe.
  virtual Completion complete(const prompt::PromptBundle& bundle, const GenConfig& cfg) = 0;
  virtual std::string name() const = 0;
};

// ---- mock ----

/// Every field that is set must match. An empty rule matches everything.
struct MockRule {
  std::optional<std::string> substring;
  std::optional<std::string> pair_id;
  /// Strategy name; "multistage" matches both of its stages.
  std::optional<std::string> strategy;
  std::string response;
};

class MockBackend : public Backend {
 public:
  explicit MockBackend(std::vector<MockRule> rules = {}, std::string default_response = "Unknown");

  /// First matching rule wins.
  Completion complete(const prompt::PromptBundle& bundle, const GenConfig& cfg) override;
  std::string name() const override { return "mock"; }

  std::size_t calls() const noexcept { return calls_.load(); }
  /// Prompt bodies in call order.
  std::vector<std::string> prompts() const;

 private:
  std::vector<MockRule> rules_;
  std::string default_response_;
  std::atomic<std::size_t> calls_{0};
  mutable std::mutex mu_;
  std::vector<std::string> prompts_;
};

/// Accepts a list of {match:{substring|pair_id|strategy}, response} or an
/// object {rules:[...], default:"..."}.
std::unique_ptr<MockBackend> mock_from_json(const nlohmann::json& j);
std::unique_ptr<MockBackend> load_mock_script(const std::string& path);

// ---- retry ----

using Sleeper = std::function<void(std::chrono::milliseconds)>;

struct RetryPolicy {
  std::chrono::milliseconds base{1000};
  double factor = 2.0;
  std::chrono::milliseconds max_delay{60000};
  double jitter = 0.2;  // delay scaled by a factor drawn from [1 - jitter, 1 + jitter]
  std::uint64_t seed = 0;
};

/// Exponential schedule base * factor^n, capped, with seeded jitter.
class Backoff {
 public:
  explicit Backoff(const RetryPolicy& policy);
  /// Delay before the next retry.
  std::chrono::milliseconds next();

 private:
  RetryPolicy policy_;
  std::mt19937_64 rng_;
  int retry_ = 0;
};

// ---- http ----

struct HttpOptions {
  std::string endpoint;  // e.g. https://api.openai.com/v1/chat/completions
  std::string api_key;
  int parallelism = 4;
  RetryPolicy retry;
  Sleeper sleeper;  // defaults to std::this_thread::sleep_for
};

/// Chat-completion client: POST {model, messages:[{role:"user", content}],
/// temperature, max_tokens} with a bearer token.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpOptions options);
  ~HttpBackend() override;

  Completion complete(const prompt::PromptBundle& bundle, const GenConfig& cfg) override;
  std::string name() const override { return "http"; }

 private:
  HttpOptions options_;
  std::string scheme_host_port_;
  std::string path_;
  std::counting_semaphore<> slots_;
};

/// Request body for one prompt.
nlohmann::json chat_request(const std::string& prompt_text, const GenConfig& cfg);
/// Extracts choices[0].message.content; throws MalformedResponse.
Completion parse_chat_response(const std::string& body);

}  // namespace sqleq::llm
