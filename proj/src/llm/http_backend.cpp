#include <regex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "sqleq/llm/backend.hpp"

namespace sqleq::llm {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

enum class Failure { None, Throttled, Transport };

}  // namespace

HttpBackend::HttpBackend(HttpOptions options)
    : options_(std::move(options)), slots_(std::max(1, options_.parallelism)) {
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(options_.endpoint, m, url)) {
    throw InvalidInput("endpoint must be an http(s) URL, got '" + options_.endpoint + "'");
  }
  scheme_host_port_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme_host_port_.rfind("https", 0) == 0 || scheme_host_port_.rfind("HTTPS", 0) == 0) {
    throw InvalidInput("this build has no TLS support; use an http:// endpoint");
  }
#endif
  if (!options_.sleeper) {
    options_.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

HttpBackend::~HttpBackend() = default;

Completion HttpBackend::complete(const prompt::PromptBundle& bundle, const GenConfig& cfg) {
  cfg.validate();
  const std::string body = chat_request(bundle.body, cfg).dump();
  httplib::Headers headers;
  if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);

  RetryPolicy policy = options_.retry;
  policy.seed ^= fnv1a(bundle.body);
  Backoff backoff(policy);

  const auto started = std::chrono::steady_clock::now();
  const auto timeout = std::chrono::duration<double>(cfg.timeout_seconds);
  Failure failure = Failure::None;
  std::string detail;
  for (int attempt = 1; attempt <= cfg.max_retries + 1; ++attempt) {
    {
      SlotGuard slot(slots_);
      httplib::Client client(scheme_host_port_);
      client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
      client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
      client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
      const auto res = client.Post(path_, headers, body, "application/json");
      if (!res) {
        failure = Failure::Transport;
        detail = "request failed: " + httplib::to_string(res.error());
      } else if (res->status >= 200 && res->status < 300) {
        Completion c = parse_chat_response(res->body);
        c.attempts = attempt;
        c.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        return c;
      } else if (res->status == 401 || res->status == 403) {
        throw AuthError("endpoint rejected the credential (HTTP " + std::to_string(res->status) + ")");
      } else if (res->status == 429) {
        failure = Failure::Throttled;
        detail = "throttled (HTTP 429)";
      } else if (res->status >= 500) {
        failure = Failure::Transport;
        detail = "server error (HTTP " + std::to_string(res->status) + ")";
      } else {
        throw TransportError("request rejected (HTTP " + std::to_string(res->status) + "): " +
                             res->body.substr(0, 200));
      }
    }
    if (attempt <= cfg.max_retries) options_.sleeper(backoff.next());
  }
  const std::string tries = " after " + std::to_string(cfg.max_retries + 1) + " attempts";
  if (failure == Failure::Throttled) throw ThrottledExhausted(detail + tries);
  throw TransportError(detail + tries);
}

}  // namespace sqleq::llm
