#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqleq/error.hpp"
#include "sqleq/pipeline/pipeline.hpp"
#include "sqleq/types.hpp"

namespace sqleq::bench {

class BenchError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class ParseError : public BenchError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : BenchError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class MissingSchema : public BenchError {
 public:
  explicit MissingSchema(const std::string& name) : BenchError("unknown schema '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DuplicateId : public BenchError {
 public:
  explicit DuplicateId(const std::string& id) : BenchError("duplicate pair id '" + id + "'"), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

// ---- dataset ---------------------------------------------------------------

/// Schemas file: a JSON object mapping schema name to a schema document.
std::map<std::string, sql::SchemaDef> schemas_from_json(const nlohmann::json& j);

/// One JSON object per line: id, sql1, sql2, schema, label, and optionally
/// difficulty, question, explanation. Blank lines are skipped.
Dataset parse_dataset(std::string_view jsonl, std::map<std::string, sql::SchemaDef> schemas);
Dataset load_dataset(const std::string& jsonl_path, const std::string& schemas_path);

// ---- metrics ---------------------------------------------------------------

enum class UnknownPolicy {
  AsNonEquivalent,  // policy A
  AlwaysWrong,      // policy B
};

const char* to_string(UnknownPolicy policy);
std::optional<UnknownPolicy> unknown_policy_from_string(std::string_view text);

struct ScoringOptions {
  UnknownPolicy unknown = UnknownPolicy::AsNonEquivalent;
  bool exclude_exact = true;
  std::set<std::string> excluded;  // e.g. few-shot exemplar pairs
};

bool is_scored(const QueryPair& pair, const ScoringOptions& opts);
bool is_correct(Label truth, Label predicted, UnknownPolicy policy);

struct Counts {
  std::size_t eq_total = 0;
  std::size_t neq_total = 0;
  std::size_t eq_correct = 0;
  std::size_t neq_correct = 0;
  std::size_t unknown = 0;
  std::size_t errors = 0;
  bool operator==(const Counts&) const = default;
};

/// Accuracies are empty for a class with no members; gm is then omitted.
struct Metrics {
  std::optional<double> eq_accuracy;
  std::optional<double> neq_accuracy;
  std::optional<double> gm;
  Counts counts;
};

double geometric_mean(double eq_accuracy, double neq_accuracy);

/// Every scored pair must have a prediction (InvalidInput otherwise).
Metrics compute_metrics(const std::map<std::string, Label>& predictions, const std::vector<QueryPair>& pairs,
                        const ScoringOptions& opts = {}, const std::set<std::string>& errored = {});

nlohmann::json metrics_to_json(const Metrics& m);

// ---- runs ------------------------------------------------------------------

struct RunOptions {
  pipeline::StrategyKind strategy = pipeline::StrategyKind::Basic;
  bool plans = false;
  pipeline::PipelineConfig pipeline;
  ScoringOptions scoring;
  std::size_t parallelism = 4;
  nlohmann::json config_echo = nlohmann::json::object();
};

struct RunReport {
  pipeline::StrategyKind strategy = pipeline::StrategyKind::Basic;
  bool plans = false;
  ScoringOptions scoring;
  std::vector<QueryPair> pairs;             // every pair that was run, sorted by id
  std::vector<pipeline::Verdict> verdicts;  // parallel to pairs
  Metrics metrics;
  nlohmann::json config = nlohmann::json::object();
  std::string started_at;
  std::string finished_at;
  double wall_ms = 0;

  const pipeline::Verdict* verdict_for(const std::string& pair_id) const;
};

/// Runs every labelled pair not in opts.scoring.excluded (exemplars are
/// added automatically). Pair errors are recorded on the verdict; an
/// AuthError stops the run and is rethrown.
RunReport run_benchmark(const Dataset& dataset, const pipeline::Backends& backends, RunOptions opts);

/// Recomputes metrics over the report's verdicts.
Metrics report_metrics(const RunReport& report);

enum class Axis { Difficulty, Question };

/// Pairs without a question tag are left out of the question axis.
std::map<std::string, Metrics> breakdown(const RunReport& report, Axis axis);

// ---- coverage --------------------------------------------------------------

struct ToolResult {
  std::string pair_id;
  bool supported = false;
  std::optional<Label> tool_label;
  std::string tool;  // "tool" when the file does not name one
};

std::vector<ToolResult> parse_tool_results(std::string_view jsonl);
std::vector<ToolResult> load_tool_results(const std::string& path);

struct CoverageCounts {
  std::size_t supported = 0;
  std::size_t unsupported = 0;
  std::size_t supported_correct = 0;
  std::size_t unsupported_correct = 0;
};

struct CoverageReport {
  std::map<std::string, CoverageCounts> tools;
  std::vector<std::string> warnings;
};

CoverageReport coverage_compare(const RunReport& report, const std::vector<ToolResult>& results);
nlohmann::json coverage_to_json(const CoverageReport& c);

// ---- reports ---------------------------------------------------------------

enum class ReportFormat { Json, Csv, Markdown };

std::optional<ReportFormat> report_format_from_string(std::string_view text);

/// Volatile values live only under "started_at", "finished_at" and
/// "timings" keys.
nlohmann::json report_to_json(const RunReport& report);
std::string render_report(const RunReport& report, ReportFormat format);
void emit_report(const RunReport& report, ReportFormat format, const std::string& path);

/// Copy of j with every "started_at", "finished_at" and "timings" key removed.
nlohmann::json strip_volatile(const nlohmann::json& j);

}  // namespace sqleq::bench
