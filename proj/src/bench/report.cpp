#include <cstdio>
#include <fstream>

#include "sqleq/bench/bench.hpp"

namespace sqleq::bench {

namespace {

constexpr Difficulty kDifficultyOrder[] = {Difficulty::Easy, Difficulty::Medium, Difficulty::Hard,
                                           Difficulty::ExtraHard, Difficulty::Unlabeled};

std::string fixed(const std::optional<double>& v, int digits) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, *v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out.push_back(c);
  }
  return out;
}

nlohmann::json breakdown_json(const RunReport& r, Axis axis) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, m] : breakdown(r, axis)) j[k] = metrics_to_json(m);
  return j;
}

std::string md_row(const std::string& name, const Metrics& m) {
  return "| " + md_cell(name) + " | " + fixed(m.eq_accuracy, 3) + " | " + fixed(m.neq_accuracy, 3) + " | " +
         fixed(m.gm, 4) + " | " + std::to_string(m.counts.eq_total) + " | " + std::to_string(m.counts.neq_total) +
         " |\n";
}

constexpr const char* kMdHeader = " | EQ | NEQ | GM | #EQ | #NEQ |\n|---|---|---|---|---|---|\n";

std::string render_markdown(const RunReport& r) {
  const Metrics m = report_metrics(r);
  std::string out = "## ";
  out += pipeline::to_string(r.strategy);
  out += r.plans ? " + plans\n\n" : "\n\n";
  out += std::string("| Run") + kMdHeader;
  out += md_row(std::string(pipeline::to_string(r.strategy)) + (r.plans ? " + plans" : ""), m);

  const auto by_diff = breakdown(r, Axis::Difficulty);
  if (!by_diff.empty()) {
    out += std::string("\n### Difficulty\n\n| Difficulty") + kMdHeader;
    for (Difficulty d : kDifficultyOrder) {
      const auto it = by_diff.find(to_string(d));
      if (it != by_diff.end()) out += md_row(it->first, it->second);
    }
  }
  const auto by_q = breakdown(r, Axis::Question);
  if (!by_q.empty()) {
    out += std::string("\n### Question\n\n| Question") + kMdHeader;
    for (const auto& [k, qm] : by_q) out += md_row(k, qm);
  }
  out += "\nUnknown predictions: " + std::to_string(m.counts.unknown) +
         ", errors: " + std::to_string(m.counts.errors) + ", policy: " + to_string(r.scoring.unknown) + "\n";
  return out;
}

std::string render_csv(const RunReport& r) {
  std::string out = "pair_id,truth,prediction,correct,scored,shortcut,difficulty,question,error\n";
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    const QueryPair& p = r.pairs[i];
    const pipeline::Verdict& v = r.verdicts[i];
    const bool scored = is_scored(p, r.scoring);
    std::string correct;
    if (scored) correct = is_correct(*p.label, v.label, r.scoring.unknown) ? "1" : "0";
    out += csv_field(p.id) + "," + to_string(*p.label) + "," + to_string(v.label) + "," + correct + "," +
           (scored ? "1" : "0") + "," + (v.shortcut ? "1" : "0") + "," + to_string(p.difficulty) + "," +
           csv_field(p.question.value_or("")) + "," + csv_field(v.error.value_or("")) + "\n";
  }
  const Metrics m = report_metrics(r);
  out += "\nmetric,value\n";
  out += "eq_accuracy," + fixed(m.eq_accuracy, 6) + "\n";
  out += "neq_accuracy," + fixed(m.neq_accuracy, 6) + "\n";
  out += "gm," + fixed(m.gm, 6) + "\n";
  out += "eq_total," + std::to_string(m.counts.eq_total) + "\n";
  out += "neq_total," + std::to_string(m.counts.neq_total) + "\n";
  out += "unknown," + std::to_string(m.counts.unknown) + "\n";
  out += "errors," + std::to_string(m.counts.errors) + "\n";
  return out;
}

}  // namespace

std::optional<ReportFormat> report_format_from_string(std::string_view text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "markdown" || text == "md") return ReportFormat::Markdown;
  return std::nullopt;
}

nlohmann::json report_to_json(const RunReport& r) {
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    const QueryPair& p = r.pairs[i];
    const bool scored = is_scored(p, r.scoring);
    nlohmann::json j = {{"pair_id", p.id},
                        {"truth", to_string(*p.label)},
                        {"difficulty", to_string(p.difficulty)},
                        {"exact_match", p.exact_match},
                        {"scored", scored},
                        {"verdict", pipeline::verdict_to_json(r.verdicts[i])}};
    if (p.question) j["question"] = *p.question;
    if (scored) j["correct"] = is_correct(*p.label, r.verdicts[i].label, r.scoring.unknown);
    pairs.push_back(std::move(j));
  }
  return {{"strategy", pipeline::to_string(r.strategy)},
          {"plans", r.plans},
          {"scoring",
           {{"unknown_policy", to_string(r.scoring.unknown)},
            {"exclude_exact", r.scoring.exclude_exact},
            {"excluded", r.scoring.excluded}}},
          {"config", r.config},
          {"metrics", metrics_to_json(report_metrics(r))},
          {"breakdowns", {{"difficulty", breakdown_json(r, Axis::Difficulty)}, {"question", breakdown_json(r, Axis::Question)}}},
          {"pairs", pairs},
          {"started_at", r.started_at},
          {"finished_at", r.finished_at},
          {"timings", {{"wall_ms", r.wall_ms}}}};
}

std::string render_report(const RunReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return report_to_json(report).dump(2) + "\n";
    case ReportFormat::Csv: return render_csv(report);
    case ReportFormat::Markdown: return render_markdown(report);
  }
  return "";
}

void emit_report(const RunReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << render_report(report, format);
  if (!out) throw InvalidInput("write failed: " + path);
}

nlohmann::json strip_volatile(const nlohmann::json& j) {
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : j.items()) {
      if (k == "started_at" || k == "finished_at" || k == "timings") continue;
      out[k] = strip_volatile(v);
    }
    return out;
  }
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : j) out.push_back(strip_volatile(v));
    return out;
  }
  return j;
}

}  // namespace sqleq::bench
