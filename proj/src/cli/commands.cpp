#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "sqleq/cli/cli.hpp"
#include "sqleq/oracle/oracle.hpp"
#include "sqleq/pipeline/pipeline.hpp"
#include "sqleq/plan/logical_plan.hpp"
#include "sqleq/prompt/prompts.hpp"
#include "sqleq/sql/features.hpp"
#include "sqleq/sql/normalize.hpp"
#include "sqleq/sql/parser.hpp"
#include "sqleq/sql/schema.hpp"

namespace sqleq::cli {

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

sql::SchemaDef read_schema(const std::string& path) { return sql::schema_from_json(read_json(path)); }

pipeline::StrategyKind strategy_of(const std::string& name) {
  const auto s = pipeline::strategy_from_string(name);
  if (!s) throw UsageError("unknown strategy '" + name + "' (basic, cot, fewshot, multistage)");
  return *s;
}

struct BackendSet {
  std::unique_ptr<llm::Backend> owned;
  pipeline::Backends view() const { return {owned.get(), owned.get()}; }
};

BackendSet make_backends(const CliConfig& cfg) {
  BackendSet b;
  if (cfg.backend == "mock") {
    if (cfg.mock_script) {
      b.owned = llm::load_mock_script(*cfg.mock_script);
    } else {
      b.owned = std::make_unique<llm::MockBackend>();
    }
  } else {
    llm::HttpOptions o;
    o.endpoint = cfg.endpoint;
    o.api_key = cfg.api_key;
    o.parallelism = cfg.parallelism;
    o.retry.seed = cfg.seed;
    b.owned = std::make_unique<llm::HttpBackend>(std::move(o));
  }
  return b;
}

pipeline::PipelineConfig pipeline_config(const CliConfig& cfg) {
  pipeline::PipelineConfig p;
  p.gen = cfg.gen();
  p.classifier_gen = cfg.classifier_gen();
  return p;
}

std::string fixed(const std::optional<double>& v, int digits) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, *v);
  return buf;
}

std::string instance_id(const std::string& path) { return std::filesystem::path(path).stem().string(); }

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err, const EnvMap& env) : out_(out), err_(err), env_(env) {}

  int main(int argc, const char* const* argv) {
    CLI::App app{"Decide SQL query-pair equivalence with LLM prompting pipelines", "sqleq"};
    app.require_subcommand(1);
    app.fallthrough();
    add_globals(app);

    auto* check = app.add_subcommand("check", "Classify one query pair");
    check->add_option("--sql1", sql1_, "First query")->required();
    check->add_option("--sql2", sql2_, "Second query")->required();
    check->add_option("--schema", schema_path_, "Schema JSON file")->required()->check(CLI::ExistingFile);
    check->add_option("--strategy", strategy_, "basic, cot, fewshot or multistage")->capture_default_str();
    check->add_flag("--with-plans", with_plans_, "Add logical plans to the prompts");
    check->add_option("--id", pair_id_, "Pair id used in prompts and matching")->capture_default_str();

    auto* bench = app.add_subcommand("bench", "Run a strategy over a dataset");
    bench->add_option("--dataset", dataset_, "Dataset JSONL")->required()->check(CLI::ExistingFile);
    bench->add_option("--schemas", schemas_, "Schemas JSON")->required()->check(CLI::ExistingFile);
    bench->add_option("--strategy", strategy_)->capture_default_str();
    bench->add_flag("--with-plans", with_plans_);
    bench->add_option("--out", out_path_, "Report file (stdout when absent)");
    bench->add_option("--format", format_, "json, csv or markdown")->capture_default_str();
    bench->add_option("--tool-results", tool_results_, "Formal-tool results JSONL")->check(CLI::ExistingFile);
    bench->add_flag("--include-exact", include_exact_, "Score exact-match pairs too");

    auto* plan = app.add_subcommand("plan", "Print the logical plan of a query");
    plan->add_option("--sql", sql1_)->required();
    plan->add_option("--schema", schema_path_)->required()->check(CLI::ExistingFile);

    auto* features = app.add_subcommand("features", "Print the feature profile of a query");
    features->add_option("--sql", sql1_)->required();

    auto* prompt = app.add_subcommand("prompt", "Print a prompt exactly as sent");
    prompt->add_option("--strategy", strategy_, "basic, cot, fewshot, explain, decide or classify")
        ->capture_default_str();
    prompt->add_option("--fixture", fixture_, "JSON with schema, pair, exemplars, explanations, classify_raw")
        ->check(CLI::ExistingFile);
    prompt->add_option("--sql1", sql1_);
    prompt->add_option("--sql2", sql2_);
    prompt->add_option("--schema", schema_path_)->check(CLI::ExistingFile);
    prompt->add_flag("--with-plans", with_plans_);
    prompt->add_option("--slot", slot_, "Query explained by the explain prompt")->check(CLI::Range(1, 2));
    prompt->add_option("--explanation1", expl1_);
    prompt->add_option("--explanation2", expl2_);
    prompt->add_option("--raw", raw_, "Model output for the classify prompt");

    auto* oracle = app.add_subcommand("oracle", "Run pairs on concrete database instances");
    oracle->add_option("--dataset", dataset_)->required()->check(CLI::ExistingFile);
    oracle->add_option("--schemas", schemas_)->required()->check(CLI::ExistingFile);
    oracle->add_option("--instances", instances_, "Instance JSON files")->required()->check(CLI::ExistingFile);
    oracle->add_option("--format", format_, "text or json");

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out_, err_);
      return code == 0 ? 0 : kExitUsage;
    }

    try {
      cfg_ = resolve_config(flag_layer(), env_, config_file());
      if (*check) return cmd_check();
      if (*bench) return cmd_bench();
      if (*plan) return cmd_plan();
      if (*features) return cmd_features();
      if (*prompt) return cmd_prompt();
      if (*oracle) return cmd_oracle();
    } catch (const UsageError& e) {
      err_ << "sqleq: " << e.what() << "\n";
      return kExitUsage;
    } catch (const llm::BackendError& e) {
      err_ << "sqleq: backend: " << e.what() << "\n";
      return kExitBackend;
    } catch (const InvalidInput& e) {
      err_ << "sqleq: " << e.what() << "\n";
      return kExitData;
    } catch (const std::exception& e) {
      err_ << "sqleq: internal error: " << e.what() << "\n";
      return kExitInternal;
    }
    return kExitInternal;
  }

 private:
  void add_globals(CLI::App& app) {
    app.add_option("--config", config_path_, "JSON config file (overrides SQLEQ_CONFIG)");
    opts_.backend = app.add_option("--backend", backend_, "http or mock");
    opts_.endpoint = app.add_option("--endpoint", endpoint_, "Chat-completion URL");
    opts_.model = app.add_option("--model", model_);
    opts_.classifier_model = app.add_option("--classifier-model", classifier_model_);
    opts_.temperature = app.add_option("--temperature", temperature_);
    opts_.max_tokens = app.add_option("--max-tokens", max_tokens_);
    opts_.parallelism = app.add_option("--parallelism", parallelism_);
    opts_.seed = app.add_option("--seed", seed_);
    opts_.mock_script = app.add_option("--mock-script", mock_script_, "Mock backend rules JSON")
                            ->check(CLI::ExistingFile);
    opts_.exemplars = app.add_option("--exemplars", exemplars_, "Few-shot exemplar JSON")->check(CLI::ExistingFile);
    opts_.unknown_policy = app.add_option("--unknown-policy", unknown_policy_, "unknown-as-neq or unknown-wrong");
  }

  ConfigLayer flag_layer() const {
    ConfigLayer l;
    if (opts_.backend->count()) l.backend = backend_;
    if (opts_.endpoint->count()) l.endpoint = endpoint_;
    if (opts_.model->count()) l.model = model_;
    if (opts_.classifier_model->count()) l.classifier_model = classifier_model_;
    if (opts_.temperature->count()) l.temperature = temperature_;
    if (opts_.max_tokens->count()) l.max_tokens = max_tokens_;
    if (opts_.parallelism->count()) l.parallelism = parallelism_;
    if (opts_.seed->count()) l.seed = seed_;
    if (opts_.mock_script->count()) l.mock_script = mock_script_;
    if (opts_.exemplars->count()) l.exemplars = exemplars_;
    if (opts_.unknown_policy->count()) l.unknown_policy = unknown_policy_;
    return l;
  }

  std::optional<nlohmann::json> config_file() const {
    std::string path = config_path_;
    if (path.empty()) {
      const auto it = env_.find("SQLEQ_CONFIG");
      if (it != env_.end()) path = it->second;
    }
    if (path.empty()) return std::nullopt;
    try {
      return nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError("config " + path + ": " + e.what());
    }
  }

  std::optional<prompt::ExemplarSet> exemplars_for(const Dataset* ds) const {
    if (cfg_.exemplars) return prompt::load_exemplar_file(*cfg_.exemplars);
    if (ds) return prompt::select_exemplars(*ds, cfg_.seed);
    return std::nullopt;
  }

  int cmd_check() {
    const sql::SchemaDef schema = read_schema(schema_path_);
    QueryPair pair;
    pair.id = pair_id_;
    pair.sql1 = sql1_;
    pair.sql2 = sql2_;
    const auto kind = strategy_of(strategy_);
    pipeline::PipelineConfig pc = pipeline_config(cfg_);
    if (kind == pipeline::StrategyKind::Fewshot) {
      pc.exemplars = exemplars_for(nullptr);
      if (!pc.exemplars) throw UsageError("fewshot needs --exemplars");
    }
    const bool exact = sql::exact_match(pair.sql1, pair.sql2);
    BackendSet backends;
    if (!exact) backends = make_backends(cfg_);
    const pipeline::Verdict v =
        pipeline::check_pair(pair, schema, kind, with_plans_, exact ? pipeline::Backends{} : backends.view(), pc);
    nlohmann::json j = pipeline::verdict_to_json(v);
    j["config"] = config_to_json(cfg_);
    out_ << j.dump(2) << "\n";
    switch (v.label) {
      case Label::Equivalent: return kExitEquivalent;
      case Label::NonEquivalent: return kExitNonEquivalent;
      case Label::Unknown: return kExitUnknown;
    }
    return kExitInternal;
  }

  int cmd_bench() {
    const auto format = bench::report_format_from_string(format_.empty() ? "json" : format_);
    if (!format) throw UsageError("--format must be json, csv or markdown");
    const Dataset ds = bench::load_dataset(dataset_, schemas_);
    std::vector<bench::ToolResult> tool;
    if (!tool_results_.empty()) tool = bench::load_tool_results(tool_results_);

    bench::RunOptions ro;
    ro.strategy = strategy_of(strategy_);
    ro.plans = with_plans_;
    ro.pipeline = pipeline_config(cfg_);
    if (ro.strategy == pipeline::StrategyKind::Fewshot) ro.pipeline.exemplars = exemplars_for(&ds);
    ro.scoring.unknown = cfg_.unknown_policy;
    ro.scoring.exclude_exact = !include_exact_;
    ro.parallelism = static_cast<std::size_t>(cfg_.parallelism);
    ro.config_echo = config_to_json(cfg_);
    ro.config_echo.erase("parallelism");
    ro.config_echo["dataset"] = std::filesystem::path(dataset_).filename().string();

    BackendSet backends = make_backends(cfg_);
    const bench::RunReport report = bench::run_benchmark(ds, backends.view(), ro);

    std::optional<bench::CoverageReport> coverage;
    if (!tool_results_.empty()) {
      coverage = bench::coverage_compare(report, tool);
      for (const auto& w : coverage->warnings) err_ << "sqleq: warning: " << w << "\n";
    }

    std::string body;
    if (*format == bench::ReportFormat::Json) {
      nlohmann::json j = bench::report_to_json(report);
      if (coverage) j["coverage"] = bench::coverage_to_json(*coverage);
      body = j.dump(2) + "\n";
    } else {
      body = bench::render_report(report, *format);
    }
    if (out_path_.empty()) {
      out_ << body;
      return 0;
    }
    std::ofstream f(out_path_, std::ios::binary);
    if (!f) throw UsageError("cannot write " + out_path_);
    f << body;

    const bench::Metrics& m = report.metrics;
    if (*format == bench::ReportFormat::Json) {
      nlohmann::json s = {{"report", out_path_}, {"metrics", bench::metrics_to_json(m)}};
      if (coverage) s["coverage"] = bench::coverage_to_json(*coverage);
      out_ << s.dump() << "\n";
    } else {
      out_ << "EQ " << fixed(m.eq_accuracy, 3) << "  NEQ " << fixed(m.neq_accuracy, 3) << "  GM " << fixed(m.gm, 4)
           << "  (" << m.counts.eq_total << " EQ, " << m.counts.neq_total << " NEQ, " << m.counts.unknown
           << " unknown, " << m.counts.errors << " errors) -> " << out_path_ << "\n";
      if (coverage) {
        for (const auto& [name, c] : coverage->tools) {
          out_ << name << ": supported " << c.supported << " (" << c.supported_correct << "), unsupported "
               << c.unsupported << " (" << c.unsupported_correct << ")\n";
        }
      }
    }
    return 0;
  }

  int cmd_plan() {
    const sql::SchemaDef schema = read_schema(schema_path_);
    out_ << plan::plan_or_placeholder(sql1_, schema) << "\n";
    return 0;
  }

  int cmd_features() {
    sql::SqlAst ast;
    try {
      ast = sql::parse_sql(sql1_, sql::ParseMode::Lenient);
    } catch (const Error& e) {
      throw InvalidInput(e.what());
    }
    out_ << sql::features_to_json(sql::extract_features(ast)).dump(2) << "\n";
    return 0;
  }

  int cmd_prompt() {
    nlohmann::json fx = fixture_.empty() ? nlohmann::json::object() : read_json(fixture_);
    QueryPair pair;
    pair.id = "cli";
    if (fx.contains("pair")) {
      pair.id = fx["pair"].value("id", pair.id);
      pair.sql1 = fx["pair"].value("sql1", "");
      pair.sql2 = fx["pair"].value("sql2", "");
    }
    if (!sql1_.empty()) pair.sql1 = sql1_;
    if (!sql2_.empty()) pair.sql2 = sql2_;

    if (strategy_ == "classify" || strategy_ == "classify-output") {
      std::string raw = raw_;
      if (raw.empty() && fx.contains("classify_raw")) raw = fx["classify_raw"].get<std::string>();
      out_ << prompt::build_classify(raw).body;
      return 0;
    }

    sql::SchemaDef schema;
    if (!schema_path_.empty()) {
      schema = read_schema(schema_path_);
    } else if (fx.contains("schema")) {
      schema = sql::schema_from_json(fx["schema"]);
    } else {
      throw UsageError("prompt needs --schema or a fixture with a schema");
    }
    std::optional<prompt::PlanTexts> plans;
    if (with_plans_) plans = prompt::plans_for(pair, schema);

    if (strategy_ == "basic") {
      out_ << prompt::build_basic(pair, schema, plans).body;
    } else if (strategy_ == "cot") {
      out_ << prompt::build_cot(pair, schema, plans).body;
    } else if (strategy_ == "fewshot") {
      std::optional<prompt::ExemplarSet> ex = exemplars_for(nullptr);
      if (!ex && fx.contains("exemplars")) ex = prompt::exemplars_from_json(fx["exemplars"]);
      if (!ex) throw UsageError("fewshot needs --exemplars or a fixture with exemplars");
      out_ << prompt::build_fewshot(pair, schema, plans, *ex).body;
    } else if (strategy_ == "explain" || strategy_ == "multistage-explain") {
      out_ << prompt::build_explain(slot_, pair, schema, plans).body;
    } else if (strategy_ == "decide" || strategy_ == "multistage-decide") {
      std::string e1 = expl1_, e2 = expl2_;
      if (fx.contains("explanations")) {
        if (e1.empty()) e1 = fx["explanations"].at(0).get<std::string>();
        if (e2.empty()) e2 = fx["explanations"].at(1).get<std::string>();
      }
      out_ << prompt::build_decide(pair, schema, plans, e1, e2).body;
    } else {
      throw UsageError("unknown prompt strategy '" + strategy_ + "'");
    }
    return 0;
  }

  int cmd_oracle() {
    if (format_.empty()) format_ = "text";
    if (format_ != "text" && format_ != "json") {
      throw UsageError("--format must be text or json");
    }
    const Dataset ds = bench::load_dataset(dataset_, schemas_);
    std::map<std::string, std::vector<oracle::DatabaseInstance>> by_schema;
    std::map<std::string, std::vector<std::string>> ids_by_schema;
    std::set<std::string> used;
    for (const QueryPair& p : ds.pairs) used.insert(p.schema);
    for (const std::string& name : used) {
      const sql::SchemaDef& schema = ds.schemas.at(name);
      for (const std::string& path : instances_) {
        try {
          by_schema[name].push_back(oracle::load_instance_file(path, schema));
          ids_by_schema[name].push_back(instance_id(path));
        } catch (const InvalidInput& e) {
          err_ << "sqleq: instance " << path << " skipped for schema " << name << ": " << e.what() << "\n";
        }
      }
    }

    nlohmann::json all = nlohmann::json::array();
    for (const QueryPair& p : ds.pairs) {
      const auto& insts = by_schema[p.schema];
      const auto& ids = ids_by_schema[p.schema];
      nlohmann::json j = {{"pair_id", p.id}};
      if (insts.empty()) {
        j["outcome"] = "Inconclusive";
        j["reason"] = "no instance matches the schema";
      } else {
        const oracle::OracleOutcome o = oracle::oracle_check(p, ds.schema_of(p), insts);
        j.update(oracle::outcome_to_json(o));
        if (o.witness) j["witness_id"] = ids[*o.witness];
        for (auto& issue : j.contains("issues") ? j["issues"] : nlohmann::json::array()) {
          issue["instance_id"] = ids[issue["instance"].get<std::size_t>()];
        }
      }
      all.push_back(j);
    }

    if (format_ == "json") {
      out_ << all.dump(2) << "\n";
      return 0;
    }
    for (const auto& j : all) {
      out_ << j["pair_id"].get<std::string>() << ": " << j["outcome"].get<std::string>();
      if (j.contains("witness_id")) out_ << " (witness " << j["witness_id"].get<std::string>() << ")";
      if (j.contains("reason")) out_ << ": " << j["reason"].get<std::string>();
      out_ << "\n";
      if (j.contains("issues")) {
        for (const auto& i : j["issues"]) {
          out_ << "  " << i.value("instance_id", "?") << ": " << i["kind"].get<std::string>() << ": "
               << i["message"].get<std::string>() << "\n";
        }
      }
    }
    return 0;
  }

  std::ostream& out_;
  std::ostream& err_;
  const EnvMap& env_;
  CliConfig cfg_;

  struct {
    CLI::Option* backend = nullptr;
    CLI::Option* endpoint = nullptr;
    CLI::Option* model = nullptr;
    CLI::Option* classifier_model = nullptr;
    CLI::Option* temperature = nullptr;
    CLI::Option* max_tokens = nullptr;
    CLI::Option* parallelism = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* mock_script = nullptr;
    CLI::Option* exemplars = nullptr;
    CLI::Option* unknown_policy = nullptr;
  } opts_;

  std::string config_path_, backend_, endpoint_, model_, classifier_model_, mock_script_, exemplars_, unknown_policy_;
  double temperature_ = 0;
  int max_tokens_ = 0;
  int parallelism_ = 0;
  std::uint64_t seed_ = 0;

  std::string sql1_, sql2_, schema_path_, strategy_ = "basic", pair_id_ = "cli";
  bool with_plans_ = false;
  bool include_exact_ = false;
  std::string dataset_, schemas_, out_path_, format_, tool_results_, fixture_;
  std::vector<std::string> instances_;
  int slot_ = 1;
  std::string expl1_, expl2_, raw_;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const EnvMap& env) {
  return Cli(out, err, env).main(argc, argv);
}

}  // namespace sqleq::cli
