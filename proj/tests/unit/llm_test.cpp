#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "fake_server.hpp"
#include "sqleq/llm/backend.hpp"

using namespace sqleq;
using namespace sqleq::llm;
using sqleq::testing::FakeServer;
using namespace std::chrono_literals;

namespace {

prompt::PromptBundle bundle(const std::string& body, prompt::Strategy s = prompt::Strategy::Basic,
                            const std::string& id = "p1") {
  prompt::PromptBundle b;
  b.strategy = s;
  b.body = body;
  b.pair_id = id;
  return b;
}

struct SleepLog {
  std::mutex mu;
  std::vector<std::chrono::milliseconds> delays;
  Sleeper sleeper() {
    return [this](std::chrono::milliseconds d) {
      std::lock_guard lock(mu);
      delays.push_back(d);
    };
  }
};

HttpOptions options(const FakeServer& server, SleepLog& log, int parallelism = 4) {
  HttpOptions o;
  o.endpoint = server.endpoint();
  o.api_key = "secret";
  o.parallelism = parallelism;
  o.sleeper = log.sleeper();
  return o;
}

GenConfig quick() {
  GenConfig c;
  c.timeout_seconds = 5;
  return c;
}

}  // namespace

TEST(GenConfig, Defaults) {
  GenConfig c;
  EXPECT_DOUBLE_EQ(c.temperature, 0.2);
  EXPECT_EQ(c.max_retries, 3);
  EXPECT_EQ(c.parallelism, 4);
  EXPECT_NO_THROW(c.validate());
  c.parallelism = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = GenConfig{};
  c.temperature = -0.1;
  EXPECT_THROW(c.validate(), InvalidInput);
  EXPECT_EQ(default_max_tokens("CodeLlama-34b-Instruct"), 500);
  EXPECT_EQ(default_max_tokens("gpt-4"), 1000);
  EXPECT_EQ(default_max_tokens("gemini-1.5-pro"), 10000);
}

TEST(Mock, ScriptedResponse) {
  MockBackend m({{std::string("SELECT 1"), std::nullopt, std::nullopt, "Equivalent"}}, "Unknown");
  const Completion c = m.complete(bundle("... SELECT 1 ..."), GenConfig{});
  EXPECT_EQ(c.text, "Equivalent");
  EXPECT_EQ(c.attempts, 1);
  EXPECT_EQ(m.complete(bundle("other"), GenConfig{}).text, "Unknown");
  EXPECT_EQ(m.calls(), 2u);
  EXPECT_EQ(m.prompts().front(), "... SELECT 1 ...");
}

TEST(Mock, FirstMatchWinsAndFieldsConjoin) {
  MockBackend m({{std::nullopt, std::string("p2"), std::string("cot"), "A"},
                 {std::nullopt, std::nullopt, std::string("multistage"), "B"},
                 {std::nullopt, std::string("p2"), std::nullopt, "C"}},
                "D");
  EXPECT_EQ(m.complete(bundle("x", prompt::Strategy::Cot, "p2"), {}).text, "A");
  EXPECT_EQ(m.complete(bundle("x", prompt::Strategy::Basic, "p2"), {}).text, "C");
  EXPECT_EQ(m.complete(bundle("x", prompt::Strategy::MultistageDecide, "p2"), {}).text, "B");
  EXPECT_EQ(m.complete(bundle("x", prompt::Strategy::MultistageExplain, "p9"), {}).text, "B");
  EXPECT_EQ(m.complete(bundle("x", prompt::Strategy::Cot, "p9"), {}).text, "D");
}

TEST(Mock, FromJson) {
  auto m = mock_from_json(nlohmann::json::parse(R"({"rules":[
      {"match":{"substring":"### Text"},"response":"Non Equivalent"},
      {"match":{"strategy":"basic"},"response":"looks different"}],"default":"?"})"));
  EXPECT_EQ(m->complete(bundle("### Text\nfoo", prompt::Strategy::Classify), {}).text, "Non Equivalent");
  EXPECT_EQ(m->complete(bundle("q"), {}).text, "looks different");
  EXPECT_EQ(m->complete(bundle("q", prompt::Strategy::Cot), {}).text, "?");
  auto list = mock_from_json(nlohmann::json::parse(R"([{"match":{},"response":"any"}])"));
  EXPECT_EQ(list->complete(bundle("q"), {}).text, "any");
  EXPECT_THROW(mock_from_json(nlohmann::json::parse(R"([{"response":"x"}])")), InvalidInput);
}

TEST(Mock, PureFunctionOfPromptAndScript) {
  MockBackend a({{std::string("z"), std::nullopt, std::nullopt, "1"}});
  MockBackend b({{std::string("z"), std::nullopt, std::nullopt, "1"}});
  for (const char* p : {"az", "b", "zz", "", "b"}) {
    EXPECT_EQ(a.complete(bundle(p), {}).text, b.complete(bundle(p), {}).text);
  }
}

TEST(Backoff, ExponentialWithBoundedJitter) {
  RetryPolicy p;
  p.seed = 42;
  Backoff b(p);
  const std::vector<double> nominal = {1000, 2000, 4000, 8000, 16000, 32000, 60000, 60000};
  for (double n : nominal) {
    const double d = static_cast<double>(b.next().count());
    EXPECT_GE(d, n * 0.8 - 1);
    EXPECT_LE(d, n * 1.2 + 1);
  }
  p.jitter = 0;
  Backoff exact(p);
  EXPECT_EQ(exact.next(), 1000ms);
  EXPECT_EQ(exact.next(), 2000ms);
  EXPECT_EQ(exact.next(), 4000ms);
}

TEST(Backoff, DeterministicUnderSeed) {
  RetryPolicy p;
  p.seed = 7;
  Backoff a(p), b(p);
  p.seed = 8;
  Backoff c(p);
  bool differs = false;
  for (int i = 0; i < 5; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Wire, RequestShape) {
  GenConfig c;
  c.model = "m";
  c.max_output_tokens = 77;
  const auto j = chat_request("hello", c);
  EXPECT_EQ(j["model"], "m");
  EXPECT_EQ(j["messages"].size(), 1u);
  EXPECT_EQ(j["messages"][0]["role"], "user");
  EXPECT_EQ(j["messages"][0]["content"], "hello");
  EXPECT_DOUBLE_EQ(j["temperature"].get<double>(), 0.2);
  EXPECT_EQ(j["max_tokens"], 77);
}

TEST(Wire, ResponseParsing) {
  const Completion c = parse_chat_response(FakeServer::reply("Equivalent"));
  EXPECT_EQ(c.text, "Equivalent");
  ASSERT_TRUE(c.usage);
  EXPECT_EQ(c.usage->completion_tokens, 2);
  EXPECT_EQ(parse_chat_response(R"({"choices":[{"message":{"content":""}}]})").text, "");
  EXPECT_THROW(parse_chat_response("not json"), MalformedResponse);
  EXPECT_THROW(parse_chat_response(R"({"choices":[]})"), MalformedResponse);
  EXPECT_THROW(parse_chat_response(R"({"choices":[{"message":{"content":null}}]})"), MalformedResponse);
}

TEST(Http, EndpointValidation) {
  HttpOptions o;
  o.endpoint = "ftp://x";
  EXPECT_THROW(HttpBackend{o}, InvalidInput);
}

TEST(Http, SendsChatRequest) {
  std::mutex mu;
  nlohmann::json seen;
  std::string auth;
  FakeServer server([&](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(mu);
    seen = nlohmann::json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(FakeServer::reply("they match"), "application/json");
  });
  SleepLog log;
  HttpBackend backend(options(server, log));
  const Completion c = backend.complete(bundle("PROMPT"), quick());
  EXPECT_EQ(c.text, "they match");
  EXPECT_EQ(c.attempts, 1);
  EXPECT_GE(c.latency_ms, 0);
  EXPECT_EQ(auth, "Bearer secret");
  EXPECT_EQ(seen["messages"][0]["content"], "PROMPT");
  EXPECT_TRUE(log.delays.empty());
}

TEST(Http, ThrottleTwiceThenSuccess) {
  std::atomic<int> n{0};
  FakeServer server([&](const httplib::Request&, httplib::Response& res) {
    if (n++ < 2) {
      res.status = 429;
      return;
    }
    res.set_content(FakeServer::reply("Equivalent"), "application/json");
  });
  SleepLog log;
  HttpBackend backend(options(server, log));
  const Completion c = backend.complete(bundle("x"), quick());
  EXPECT_EQ(c.attempts, 3);
  EXPECT_EQ(server.requests(), 3);
  ASSERT_EQ(log.delays.size(), 2u);
  EXPECT_NEAR(static_cast<double>(log.delays[0].count()), 1000, 200);
  EXPECT_NEAR(static_cast<double>(log.delays[1].count()), 2000, 400);
}

TEST(Http, AuthErrorIsNotRetried) {
  for (int status : {401, 403}) {
    FakeServer server([status](const httplib::Request&, httplib::Response& res) { res.status = status; });
    SleepLog log;
    HttpBackend backend(options(server, log));
    EXPECT_THROW(backend.complete(bundle("x"), quick()), AuthError);
    EXPECT_EQ(server.requests(), 1);
    EXPECT_TRUE(log.delays.empty());
  }
}

TEST(Http, ExhaustedRetries) {
  FakeServer throttled([](const httplib::Request&, httplib::Response& res) { res.status = 429; });
  SleepLog log;
  HttpBackend b1(options(throttled, log));
  EXPECT_THROW(b1.complete(bundle("x"), quick()), ThrottledExhausted);
  EXPECT_EQ(throttled.requests(), 4);
  EXPECT_EQ(log.delays.size(), 3u);

  FakeServer broken([](const httplib::Request&, httplib::Response& res) { res.status = 503; });
  HttpBackend b2(options(broken, log));
  GenConfig c = quick();
  c.max_retries = 1;
  EXPECT_THROW(b2.complete(bundle("x"), c), TransportError);
  EXPECT_EQ(broken.requests(), 2);
}

TEST(Http, MalformedBody) {
  FakeServer server([](const httplib::Request&, httplib::Response& res) { res.set_content("{oops", "text/plain"); });
  SleepLog log;
  HttpBackend backend(options(server, log));
  EXPECT_THROW(backend.complete(bundle("x"), quick()), MalformedResponse);
}

TEST(Http, ConnectionRefused) {
  std::string endpoint;
  {
    FakeServer gone([](const httplib::Request&, httplib::Response&) {});
    endpoint = gone.endpoint();
  }
  HttpOptions o;
  o.endpoint = endpoint;
  SleepLog log;
  o.sleeper = log.sleeper();
  HttpBackend backend(o);
  GenConfig c = quick();
  c.max_retries = 2;
  EXPECT_THROW(backend.complete(bundle("x"), c), TransportError);
  EXPECT_EQ(log.delays.size(), 2u);
}

TEST(Http, InFlightNeverExceedsParallelism) {
  std::atomic<int> in_flight{0};
  std::atomic<int> peak{0};
  FakeServer server([&](const httplib::Request&, httplib::Response& res) {
    const int now = ++in_flight;
    int prev = peak.load();
    while (now > prev && !peak.compare_exchange_weak(prev, now)) {
    }
    std::this_thread::sleep_for(20ms);
    --in_flight;
    res.set_content(FakeServer::reply("ok"), "application/json");
  });
  SleepLog log;
  HttpBackend backend(options(server, log, 3));
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int i = 0; i < 16; ++i) {
    threads.emplace_back([&, i] {
      if (backend.complete(bundle("x" + std::to_string(i)), quick()).text == "ok") ++ok;
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), 16);
  EXPECT_LE(peak.load(), 3);
  EXPECT_GE(peak.load(), 2);
}
