#include <cmath>

#include "sqleq/bench/bench.hpp"

namespace sqleq::bench {

const char* to_string(UnknownPolicy policy) {
  return policy == UnknownPolicy::AsNonEquivalent ? "unknown-as-neq" : "unknown-wrong";
}

std::optional<UnknownPolicy> unknown_policy_from_string(std::string_view text) {
  if (text == "unknown-as-neq" || text == "neq" || text == "A" || text == "a") return UnknownPolicy::AsNonEquivalent;
  if (text == "unknown-wrong" || text == "wrong" || text == "B" || text == "b") return UnknownPolicy::AlwaysWrong;
  return std::nullopt;
}

bool is_scored(const QueryPair& pair, const ScoringOptions& opts) {
  if (!pair.label || *pair.label == Label::Unknown) return false;
  if (opts.exclude_exact && pair.exact_match) return false;
  return !opts.excluded.count(pair.id);
}

bool is_correct(Label truth, Label predicted, UnknownPolicy policy) {
  if (predicted == Label::Unknown) {
    return policy == UnknownPolicy::AsNonEquivalent && truth == Label::NonEquivalent;
  }
  return predicted == truth;
}

double geometric_mean(double eq_accuracy, double neq_accuracy) {
  if (eq_accuracy <= 0 || neq_accuracy <= 0) return 0.0;
  return std::sqrt(eq_accuracy * neq_accuracy);
}

Metrics compute_metrics(const std::map<std::string, Label>& predictions, const std::vector<QueryPair>& pairs,
                        const ScoringOptions& opts, const std::set<std::string>& errored) {
  Metrics m;
  Counts& c = m.counts;
  for (const QueryPair& p : pairs) {
    if (!is_scored(p, opts)) continue;
    const auto it = predictions.find(p.id);
    if (it == predictions.end()) throw InvalidInput("no prediction for scored pair '" + p.id + "'");
    const bool ok = is_correct(*p.label, it->second, opts.unknown);
    if (*p.label == Label::Equivalent) {
      ++c.eq_total;
      c.eq_correct += ok;
    } else {
      ++c.neq_total;
      c.neq_correct += ok;
    }
    c.unknown += it->second == Label::Unknown;
    c.errors += errored.count(p.id);
  }
  if (c.eq_total) m.eq_accuracy = static_cast<double>(c.eq_correct) / static_cast<double>(c.eq_total);
  if (c.neq_total) m.neq_accuracy = static_cast<double>(c.neq_correct) / static_cast<double>(c.neq_total);
  if (m.eq_accuracy && m.neq_accuracy) m.gm = geometric_mean(*m.eq_accuracy, *m.neq_accuracy);
  return m;
}

nlohmann::json metrics_to_json(const Metrics& m) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json j = {{"eq_accuracy", opt(m.eq_accuracy)}, {"neq_accuracy", opt(m.neq_accuracy)}};
  if (m.gm) j["gm"] = *m.gm;
  j["counts"] = {{"eq_total", m.counts.eq_total},     {"neq_total", m.counts.neq_total},
                 {"eq_correct", m.counts.eq_correct}, {"neq_correct", m.counts.neq_correct},
                 {"unknown", m.counts.unknown},       {"errors", m.counts.errors}};
  return j;
}

}  // namespace sqleq::bench
