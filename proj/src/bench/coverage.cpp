#include <fstream>
#include <sstream>

#include "sqleq/bench/bench.hpp"

namespace sqleq::bench {

std::vector<ToolResult> parse_tool_results(std::string_view jsonl) {
  std::vector<ToolResult> out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ToolResult r;
      r.pair_id = j.at("pair_id").get<std::string>();
      r.supported = j.at("supported").get<bool>();
      if (j.contains("tool_label") && !j["tool_label"].is_null()) {
        r.tool_label = label_from_string(j["tool_label"].get<std::string>());
        if (!r.tool_label) throw ParseError(line_no, "unknown tool_label");
      }
      r.tool = j.value("tool", "tool");
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

std::vector<ToolResult> load_tool_results(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tool_results(ss.str());
}

CoverageReport coverage_compare(const RunReport& report, const std::vector<ToolResult>& results) {
  CoverageReport out;
  std::set<std::pair<std::string, std::string>> seen;
  for (const ToolResult& r : results) {
    const pipeline::Verdict* v = report.verdict_for(r.pair_id);
    if (!v) {
      out.warnings.push_back("unknown pair id '" + r.pair_id + "' ignored");
      continue;
    }
    if (!seen.emplace(r.tool, r.pair_id).second) {
      out.warnings.push_back("duplicate entry for '" + r.pair_id + "' ignored");
      continue;
    }
    const auto& pair = report.pairs[static_cast<std::size_t>(v - report.verdicts.data())];
    const bool ok = pair.label && is_correct(*pair.label, v->label, report.scoring.unknown);
    CoverageCounts& c = out.tools[r.tool];
    if (r.supported) {
      ++c.supported;
      c.supported_correct += ok;
    } else {
      ++c.unsupported;
      c.unsupported_correct += ok;
    }
  }
  return out;
}

nlohmann::json coverage_to_json(const CoverageReport& c) {
  nlohmann::json tools = nlohmann::json::object();
  for (const auto& [name, n] : c.tools) {
    tools[name] = {{"supported", n.supported},
                   {"supported_correct", n.supported_correct},
                   {"unsupported", n.unsupported},
                   {"unsupported_correct", n.unsupported_correct}};
  }
  return {{"tools", tools}, {"warnings", c.warnings}};
}

}  // namespace sqleq::bench
