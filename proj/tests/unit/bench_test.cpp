#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "bench_fixtures.hpp"
#include "sqleq/bench/bench.hpp"

using namespace sqleq;
using namespace sqleq::bench;
namespace td = sqleq::testdata;

namespace {

const std::string kFixtures = std::string(SQLEQ_SOURCE_DIR) + "/tests/fixtures/";

Dataset bench20() { return load_dataset(kFixtures + "bench20.jsonl", kFixtures + "schemas.json"); }

std::string line(const std::string& id, const std::string& extra = R"(,"label":"EQ")") {
  return R"({"id":")" + id + R"(","sql1":"SELECT a FROM t","sql2":"SELECT b FROM t","schema":"shop")" + extra + "}\n";
}

QueryPair scored(const std::string& id, Label truth) {
  QueryPair p;
  p.id = id;
  p.label = truth;
  return p;
}

class ThrowingBackend : public llm::Backend {
 public:
  explicit ThrowingBackend(std::string bad_pair, bool auth) : bad_(std::move(bad_pair)), auth_(auth) {}
  llm::Completion complete(const prompt::PromptBundle& b, const llm::GenConfig&) override {
    ++calls;
    if (b.pair_id == bad_) {
      if (auth_) throw llm::AuthError("401 from server");
      throw llm::TransportError("connection reset");
    }
    return {"Equivalent", std::nullopt, 0, 1};
  }
  std::string name() const override { return "throwing"; }
  std::atomic<int> calls{0};

 private:
  std::string bad_;
  bool auth_;
};

RunReport run_with(const Dataset& ds, llm::Backend& b, pipeline::StrategyKind s, std::size_t parallelism) {
  RunOptions opts;
  opts.strategy = s;
  opts.parallelism = parallelism;
  return run_benchmark(ds, {&b, &b}, opts);
}

}  // namespace

TEST(Dataset, ThreeLines) {
  const Dataset ds = parse_dataset(line("a") + line("b") + line("c"), td::fixture_schemas());
  ASSERT_EQ(ds.pairs.size(), 3u);
  EXPECT_EQ(ds.pairs[1].id, "b");
  EXPECT_EQ(ds.pairs[0].label, Label::Equivalent);
  EXPECT_EQ(ds.pairs[0].difficulty, Difficulty::Unlabeled);
}

TEST(Dataset, MissingLabelReportsLine) {
  try {
    parse_dataset(line("a") + line("b", ""), td::fixture_schemas());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    parse_dataset(line("a") + "\n{oops\n", td::fixture_schemas());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_dataset(line("a", R"(,"label":"maybe")"), td::fixture_schemas()), ParseError);
  EXPECT_THROW(parse_dataset(line("a", R"(,"label":"Unknown")"), td::fixture_schemas()), ParseError);
  EXPECT_THROW(parse_dataset(line("a", R"(,"label":"EQ","difficulty":"Brutal")"), td::fixture_schemas()),
               ParseError);
}

TEST(Dataset, SchemaAndIdChecks) {
  EXPECT_THROW(parse_dataset(line("a") + line("a"), td::fixture_schemas()), DuplicateId);
  EXPECT_THROW(parse_dataset(line("a"), {}), MissingSchema);
  const Dataset ds = parse_dataset(
      line("a", R"(,"label":false,"difficulty":"extra-hard","question":3,"explanation":"why")"),
      td::fixture_schemas());
  EXPECT_EQ(ds.pairs[0].label, Label::NonEquivalent);
  EXPECT_EQ(ds.pairs[0].difficulty, Difficulty::ExtraHard);
  EXPECT_EQ(ds.pairs[0].question, "3");
  EXPECT_EQ(ds.pairs[0].explanation, "why");
}

TEST(Dataset, FixtureFileAndExactFlags) {
  const Dataset ds = bench20();
  ASSERT_EQ(ds.pairs.size(), 20u);
  std::vector<std::string> exact;
  for (const auto& p : ds.pairs) {
    if (p.exact_match) exact.push_back(p.id);
  }
  EXPECT_EQ(exact, (std::vector<std::string>{"b01", "b09", "b19"}));
  EXPECT_THROW(load_dataset(kFixtures + "nope.jsonl", kFixtures + "schemas.json"), InvalidInput);
}

TEST(Dataset, SpiderShapedDenominators) {
  const Dataset ds = parse_dataset(td::spider_like_jsonl(), td::fixture_schemas());
  ASSERT_EQ(ds.pairs.size(), 1034u);
  std::map<std::string, Label> all_eq;
  std::size_t exact = 0;
  for (const auto& p : ds.pairs) {
    all_eq[p.id] = Label::Equivalent;
    exact += p.exact_match;
  }
  EXPECT_EQ(exact, 460u);
  const Metrics m = compute_metrics(all_eq, ds.pairs);
  EXPECT_EQ(m.counts.eq_total, 385u);
  EXPECT_EQ(m.counts.neq_total, 189u);
}

TEST(Metrics, TableOneExamples) {
  EXPECT_NEAR(geometric_mean(0.875, 0.714), 0.7904, 1e-3);
  EXPECT_NEAR(geometric_mean(0.948, 0.153), 0.3808, 1e-3);
  EXPECT_EQ(geometric_mean(0.993, 0.000), 0.0);

  std::vector<QueryPair> pairs;
  std::map<std::string, Label> pred;
  for (int i = 0; i < 8; ++i) {
    pairs.push_back(scored("e" + std::to_string(i), Label::Equivalent));
    pred["e" + std::to_string(i)] = i < 7 ? Label::Equivalent : Label::NonEquivalent;
  }
  for (int i = 0; i < 7; ++i) {
    pairs.push_back(scored("n" + std::to_string(i), Label::NonEquivalent));
    pred["n" + std::to_string(i)] = i < 5 ? Label::NonEquivalent : Label::Equivalent;
  }
  const Metrics m = compute_metrics(pred, pairs);
  EXPECT_DOUBLE_EQ(*m.eq_accuracy, 0.875);
  EXPECT_NEAR(*m.neq_accuracy, 0.714, 1e-3);
  EXPECT_NEAR(*m.gm, 0.7904, 1e-3);
}

TEST(Metrics, ZeroAccuracyGivesZeroGm) {
  const std::vector<QueryPair> pairs = {scored("a", Label::Equivalent), scored("b", Label::NonEquivalent)};
  const Metrics m = compute_metrics({{"a", Label::Equivalent}, {"b", Label::Equivalent}}, pairs);
  EXPECT_EQ(*m.neq_accuracy, 0.0);
  EXPECT_EQ(*m.gm, 0.0);
}

TEST(Metrics, EmptyClassOmitsGm) {
  const std::vector<QueryPair> pairs = {scored("a", Label::Equivalent)};
  const Metrics m = compute_metrics({{"a", Label::Equivalent}}, pairs);
  EXPECT_EQ(*m.eq_accuracy, 1.0);
  EXPECT_FALSE(m.neq_accuracy);
  EXPECT_FALSE(m.gm);
  const auto j = metrics_to_json(m);
  EXPECT_TRUE(j["neq_accuracy"].is_null());
  EXPECT_FALSE(j.contains("gm"));
}

TEST(Metrics, MissingPredictionRejected) {
  EXPECT_THROW(compute_metrics({}, {scored("a", Label::Equivalent)}), InvalidInput);
}

TEST(Metrics, ExclusionsAndCounts) {
  QueryPair dup = scored("dup", Label::Equivalent);
  dup.exact_match = true;
  const std::vector<QueryPair> pairs = {dup, scored("ex", Label::Equivalent), scored("n", Label::NonEquivalent),
                                        scored("e", Label::Equivalent)};
  ScoringOptions opts;
  opts.excluded = {"ex"};
  const Metrics m = compute_metrics({{"n", Label::Unknown}, {"e", Label::Unknown}}, pairs, opts, {"e"});
  EXPECT_EQ(m.counts.eq_total, 1u);
  EXPECT_EQ(m.counts.neq_total, 1u);
  EXPECT_EQ(m.counts.unknown, 2u);
  EXPECT_EQ(m.counts.errors, 1u);
  EXPECT_EQ(*m.neq_accuracy, 1.0);
  EXPECT_EQ(*m.eq_accuracy, 0.0);

  opts.unknown = UnknownPolicy::AlwaysWrong;
  EXPECT_EQ(*compute_metrics({{"n", Label::Unknown}, {"e", Label::Unknown}}, pairs, opts).neq_accuracy, 0.0);
  opts.exclude_exact = false;
  EXPECT_THROW(compute_metrics({{"n", Label::Unknown}, {"e", Label::Unknown}}, pairs, opts), InvalidInput);
}

TEST(Metrics, GmInvariantAndPolicies) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 300; ++round) {
    std::vector<QueryPair> pairs;
    std::map<std::string, Label> pred;
    const int n = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      const std::string id = std::to_string(i);
      pairs.push_back(scored(id, rng() % 2 ? Label::Equivalent : Label::NonEquivalent));
      pred[id] = static_cast<Label>(rng() % 3);
    }
    ScoringOptions a, b;
    b.unknown = UnknownPolicy::AlwaysWrong;
    const Metrics ma = compute_metrics(pred, pairs, a);
    const Metrics mb = compute_metrics(pred, pairs, b);
    EXPECT_EQ(ma.eq_accuracy, mb.eq_accuracy);
    if (ma.neq_accuracy) EXPECT_GE(*ma.neq_accuracy, *mb.neq_accuracy);
    for (const Metrics* m : {&ma, &mb}) {
      if (m->gm) EXPECT_NEAR(*m->gm, std::sqrt(*m->eq_accuracy * *m->neq_accuracy), 1e-12);
    }
  }
}

TEST(Breakdown, SingleDifficulty) {
  const Dataset ds = parse_dataset(line("a", R"(,"label":"EQ","difficulty":"Hard")") +
                                       line("b", R"(,"label":"NEQ","difficulty":"Hard")"),
                                   td::fixture_schemas());
  llm::MockBackend mock;
  const RunReport r = run_with(ds, mock, pipeline::StrategyKind::Basic, 1);
  const auto d = breakdown(r, Axis::Difficulty);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.begin()->first, "Hard");
  EXPECT_TRUE(breakdown(r, Axis::Question).empty());
}

TEST(Breakdown, QuestionOneScripted) {
  const Dataset ds = parse_dataset(td::equiquest_like_jsonl(), td::fixture_schemas());
  std::vector<std::pair<std::string, std::string>> answers;
  for (int i = 0; i < 110; ++i) {
    const bool truth_eq = i < 102;
    const bool say_eq = truth_eq && i < 68;
    answers.emplace_back(td::padded("eq", i), say_eq ? "Equivalent" : "Non Equivalent");
  }
  auto mock = td::scripted_mock(answers, "Equivalent");
  const RunReport r = run_with(ds, mock, pipeline::StrategyKind::Basic, 8);
  const auto q = breakdown(r, Axis::Question);
  ASSERT_EQ(q.size(), 5u);
  const Metrics& q1 = q.at("Q1");
  EXPECT_NEAR(*q1.eq_accuracy, 0.667, 1e-3);
  EXPECT_EQ(*q1.neq_accuracy, 1.0);
  EXPECT_NEAR(*q1.gm, 0.8167, 1e-3);
  EXPECT_EQ(r.metrics.counts.eq_total, 307u);
  EXPECT_EQ(r.metrics.counts.neq_total, 192u);
}

TEST(Breakdown, SpiderDifficultyTotals) {
  const Dataset ds = parse_dataset(td::spider_like_jsonl(), td::fixture_schemas());
  llm::MockBackend mock({}, "Equivalent");
  const RunReport r = run_with(ds, mock, pipeline::StrategyKind::Basic, 16);
  const auto d = breakdown(r, Axis::Difficulty);
  ASSERT_EQ(d.size(), 4u);
  for (const auto& split : td::kSpiderDifficulty) {
    EXPECT_EQ(d.at(split.tag).counts.eq_total, static_cast<std::size_t>(split.eq)) << split.tag;
    EXPECT_EQ(d.at(split.tag).counts.neq_total, static_cast<std::size_t>(split.neq)) << split.tag;
  }
  EXPECT_EQ(mock.calls(), 2u * 574u);
}

TEST(Run, DeterministicAcrossParallelism) {
  const Dataset ds = bench20();
  std::string first_json, first_csv;
  for (std::size_t par : {1u, 4u, 16u, 4u, 1u}) {
    auto mock = llm::load_mock_script(kFixtures + "mock20.json");
    const RunReport r = run_with(ds, *mock, pipeline::StrategyKind::Cot, par);
    const std::string j = strip_volatile(report_to_json(r)).dump();
    const std::string csv = render_report(r, ReportFormat::Csv);
    if (first_json.empty()) {
      first_json = j;
      first_csv = csv;
    }
    EXPECT_EQ(j, first_json) << par;
    EXPECT_EQ(csv, first_csv) << par;
  }
}

TEST(Run, MultistageCallsAndShortcut) {
  const Dataset ds = bench20();
  llm::MockBackend mock({}, "Equivalent");
  const RunReport r = run_with(ds, mock, pipeline::StrategyKind::Multistage, 4);
  EXPECT_EQ(mock.calls(), 4u * 17u);
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    EXPECT_EQ(r.verdicts[i].shortcut, r.pairs[i].exact_match);
  }
}

TEST(Run, PairErrorsAreRecorded) {
  const Dataset ds = bench20();
  ThrowingBackend b("b05", false);
  const RunReport r = run_with(ds, b, pipeline::StrategyKind::Basic, 4);
  const auto* v = r.verdict_for("b05");
  ASSERT_NE(v, nullptr);
  EXPECT_EQ(v->label, Label::Unknown);
  ASSERT_TRUE(v->error);
  EXPECT_EQ(r.metrics.counts.errors, 1u);
  EXPECT_EQ(r.metrics.counts.unknown, 1u);
  EXPECT_EQ(r.verdict_for("nope"), nullptr);
}

TEST(Run, AuthErrorAborts) {
  const Dataset ds = bench20();
  ThrowingBackend b("b02", true);
  EXPECT_THROW(run_with(ds, b, pipeline::StrategyKind::Basic, 1), llm::AuthError);
  EXPECT_LT(b.calls.load(), 20);
  ThrowingBackend par("b02", true);
  EXPECT_THROW(run_with(ds, par, pipeline::StrategyKind::Basic, 16), llm::AuthError);
}

TEST(Run, ExemplarsExcluded) {
  const Dataset ds = parse_dataset(td::equiquest_like_jsonl(), td::fixture_schemas());
  RunOptions opts;
  opts.strategy = pipeline::StrategyKind::Fewshot;
  opts.pipeline.exemplars = prompt::select_exemplars(ds, 7);
  llm::MockBackend mock({}, "Equivalent");
  const RunReport r = run_benchmark(ds, {&mock, &mock}, opts);
  EXPECT_EQ(r.pairs.size(), 495u);
  for (const auto& id : opts.pipeline.exemplars->pair_ids()) EXPECT_EQ(r.verdict_for(id), nullptr);
  EXPECT_EQ(r.metrics.counts.eq_total + r.metrics.counts.neq_total, 495u);
  opts.parallelism = 0;
  EXPECT_THROW(run_benchmark(ds, {&mock, &mock}, opts), InvalidInput);
}

TEST(Coverage, AllSupportedAllCorrect) {
  const Dataset ds = bench20();
  auto mock = llm::load_mock_script(kFixtures + "mock20.json");
  const RunReport r = run_with(ds, *mock, pipeline::StrategyKind::Basic, 2);
  std::vector<ToolResult> tool;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    tool.push_back({r.pairs[i].id, true, std::nullopt, "solver"});
    correct += is_correct(*r.pairs[i].label, r.verdicts[i].label, UnknownPolicy::AsNonEquivalent);
  }
  const CoverageReport c = coverage_compare(r, tool);
  EXPECT_EQ(c.tools.at("solver").supported, 20u);
  EXPECT_EQ(c.tools.at("solver").supported_correct, correct);
  EXPECT_TRUE(c.warnings.empty());

  auto all_right = td::scripted_mock({{"b03", "Non Equivalent"}, {"b05", "Non Equivalent"}, {"b07", "Non Equivalent"},
                                      {"b10", "Non Equivalent"}, {"b11", "Non Equivalent"}, {"b12", "Non Equivalent"},
                                      {"b14", "Non Equivalent"}, {"b17", "Non Equivalent"}, {"b18", "Non Equivalent"}},
                                     "Equivalent");
  const RunReport perfect = run_with(ds, all_right, pipeline::StrategyKind::Basic, 2);
  const CoverageReport pc = coverage_compare(perfect, tool);
  EXPECT_EQ(pc.tools.at("solver").supported_correct, pc.tools.at("solver").supported);
}

TEST(Coverage, UnknownIdsWarn) {
  const Dataset ds = bench20();
  llm::MockBackend mock({}, "Equivalent");
  const RunReport r = run_with(ds, mock, pipeline::StrategyKind::Basic, 2);
  const auto tool = parse_tool_results(
      "{\"pair_id\":\"b01\",\"supported\":true,\"tool_label\":\"EQ\"}\n\n"
      "{\"pair_id\":\"zzz\",\"supported\":false}\n"
      "{\"pair_id\":\"b01\",\"supported\":false}\n");
  ASSERT_EQ(tool.size(), 3u);
  EXPECT_EQ(tool[0].tool_label, Label::Equivalent);
  const CoverageReport c = coverage_compare(r, tool);
  EXPECT_EQ(c.warnings.size(), 2u);
  EXPECT_EQ(c.tools.at("tool").supported, 1u);
  EXPECT_EQ(c.tools.at("tool").unsupported, 0u);
  EXPECT_THROW(parse_tool_results("{\"pair_id\":\"x\"}\n"), ParseError);
  EXPECT_EQ(coverage_to_json(c)["tools"]["tool"]["supported_correct"], 1);
}

TEST(Coverage, SolverRowOverlap) {
  const Dataset ds = parse_dataset(td::equiquest_like_jsonl(), td::fixture_schemas());
  std::vector<std::pair<std::string, std::string>> answers;
  std::vector<ToolResult> tool;
  for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
    const QueryPair& p = ds.pairs[i];
    const bool supported = i < 151;
    const bool right = supported ? i < 124 : i < 151 + 182;
    const bool say_eq = (*p.label == Label::Equivalent) == right;
    answers.emplace_back(p.id, say_eq ? "Equivalent" : "Non Equivalent");
    tool.push_back({p.id, supported, std::nullopt, "SQLSolver"});
  }
  auto mock = td::scripted_mock(answers, "Unknown");
  const RunReport r = run_with(ds, mock, pipeline::StrategyKind::Basic, 8);
  const CoverageReport c = coverage_compare(r, tool);
  const CoverageCounts& n = c.tools.at("SQLSolver");
  EXPECT_EQ(n.supported, 151u);
  EXPECT_EQ(n.supported_correct, 124u);
  EXPECT_EQ(n.unsupported, 348u);
  EXPECT_EQ(n.unsupported_correct, 182u);
}

TEST(Report, Formats) {
  const Dataset ds = bench20();
  auto mock = llm::load_mock_script(kFixtures + "mock20.json");
  const RunReport r = run_with(ds, *mock, pipeline::StrategyKind::Basic, 3);

  const auto j = report_to_json(r);
  ASSERT_EQ(j["pairs"].size(), 20u);
  for (std::size_t i = 1; i < j["pairs"].size(); ++i) {
    EXPECT_LT(j["pairs"][i - 1]["pair_id"].get<std::string>(), j["pairs"][i]["pair_id"].get<std::string>());
  }
  EXPECT_EQ(j["metrics"]["counts"]["eq_total"], 8);
  EXPECT_EQ(j["metrics"]["counts"]["neq_total"], 9);
  EXPECT_TRUE(j.contains("started_at"));
  const auto stripped = strip_volatile(j);
  EXPECT_FALSE(stripped.contains("started_at"));
  EXPECT_FALSE(stripped["pairs"][0]["verdict"].contains("timings"));

  const std::string csv = render_report(r, ReportFormat::Csv);
  EXPECT_EQ(csv.rfind("pair_id,truth,prediction,correct,scored,shortcut,difficulty,question,error\n", 0), 0u);
  EXPECT_NE(csv.find("\nmetric,value\neq_accuracy,"), std::string::npos);
  EXPECT_NE(csv.find("b01,Equivalent,Equivalent,,0,1,Easy,,\n"), std::string::npos);

  const std::string md = render_report(r, ReportFormat::Markdown);
  EXPECT_NE(md.find("| Run | EQ | NEQ | GM | #EQ | #NEQ |"), std::string::npos);
  EXPECT_LT(md.find("| Easy |"), md.find("| Medium |"));
  EXPECT_LT(md.find("| Hard |"), md.find("| ExtraHard |"));

  const auto path = std::filesystem::temp_directory_path() / "sqleq_bench_report.csv";
  emit_report(r, ReportFormat::Csv, path.string());
  std::ifstream in(path);
  const std::string back((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(back, csv);
  std::filesystem::remove(path);
  EXPECT_EQ(report_format_from_string("md"), ReportFormat::Markdown);
  EXPECT_FALSE(report_format_from_string("xml"));
}
