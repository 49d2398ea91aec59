#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <mutex>
#include <thread>

#include "sqleq/bench/bench.hpp"

namespace sqleq::bench {

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

pipeline::Verdict failed_verdict(const QueryPair& p, const RunOptions& opts, const std::string& what) {
  pipeline::Verdict v;
  v.pair_id = p.id;
  v.strategy = opts.strategy;
  v.plans = opts.plans;
  v.label = Label::Unknown;
  v.error = what;
  return v;
}

std::map<std::string, Label> predictions_of(const RunReport& r) {
  std::map<std::string, Label> out;
  for (const auto& v : r.verdicts) out.emplace(v.pair_id, v.label);
  return out;
}

std::set<std::string> errored_of(const RunReport& r) {
  std::set<std::string> out;
  for (const auto& v : r.verdicts) {
    if (v.error) out.insert(v.pair_id);
  }
  return out;
}

}  // namespace

const pipeline::Verdict* RunReport::verdict_for(const std::string& pair_id) const {
  const auto it = std::lower_bound(pairs.begin(), pairs.end(), pair_id,
                                   [](const QueryPair& p, const std::string& id) { return p.id < id; });
  if (it == pairs.end() || it->id != pair_id) return nullptr;
  return &verdicts[static_cast<std::size_t>(it - pairs.begin())];
}

RunReport run_benchmark(const Dataset& dataset, const pipeline::Backends& backends, RunOptions opts) {
  if (opts.parallelism == 0) throw InvalidInput("parallelism must be at least 1");
  if (opts.pipeline.exemplars) {
    for (const auto& id : opts.pipeline.exemplars->pair_ids()) opts.scoring.excluded.insert(id);
  }
  opts.pipeline.fail_soft = true;

  RunReport report;
  report.strategy = opts.strategy;
  report.plans = opts.plans;
  report.scoring = opts.scoring;
  report.config = opts.config_echo;
  for (const QueryPair& p : dataset.pairs) {
    if (p.label && !opts.scoring.excluded.count(p.id)) report.pairs.push_back(p);
  }
  std::sort(report.pairs.begin(), report.pairs.end(),
            [](const QueryPair& a, const QueryPair& b) { return a.id < b.id; });
  report.verdicts.resize(report.pairs.size());

  report.started_at = utc_now();
  const auto t0 = std::chrono::steady_clock::now();

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex fatal_mu;
  std::exception_ptr fatal;

  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= report.pairs.size()) return;
      const QueryPair& p = report.pairs[i];
      try {
        report.verdicts[i] =
            pipeline::check_pair(p, dataset.schema_of(p), opts.strategy, opts.plans, backends, opts.pipeline);
      } catch (const llm::AuthError&) {
        std::lock_guard lock(fatal_mu);
        if (!fatal) fatal = std::current_exception();
        stop = true;
      } catch (const Error& e) {
        report.verdicts[i] = failed_verdict(p, opts, e.what());
      } catch (...) {
        std::lock_guard lock(fatal_mu);
        if (!fatal) fatal = std::current_exception();
        stop = true;
      }
    }
  };

  const std::size_t n = std::min(opts.parallelism, std::max<std::size_t>(report.pairs.size(), 1));
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (fatal) std::rethrow_exception(fatal);

  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  report.finished_at = utc_now();
  report.metrics = report_metrics(report);
  return report;
}

Metrics report_metrics(const RunReport& report) {
  return compute_metrics(predictions_of(report), report.pairs, report.scoring, errored_of(report));
}

std::map<std::string, Metrics> breakdown(const RunReport& report, Axis axis) {
  std::map<std::string, std::vector<QueryPair>> groups;
  for (const QueryPair& p : report.pairs) {
    if (!is_scored(p, report.scoring)) continue;
    if (axis == Axis::Difficulty) {
      groups[to_string(p.difficulty)].push_back(p);
    } else if (p.question) {
      groups[*p.question].push_back(p);
    }
  }
  const auto predictions = predictions_of(report);
  const auto errored = errored_of(report);
  std::map<std::string, Metrics> out;
  for (const auto& [key, pairs] : groups) out.emplace(key, compute_metrics(predictions, pairs, report.scoring, errored));
  return out;
}

}  // namespace sqleq::bench
