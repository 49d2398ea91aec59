#include <fstream>
#include <sstream>
#include <unordered_set>

#include "sqleq/bench/bench.hpp"
#include "sqleq/sql/normalize.hpp"

namespace sqleq::bench {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool blank(std::string_view line) { return line.find_first_not_of(" \t\r") == std::string_view::npos; }

std::string required_string(const nlohmann::json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) throw ParseError(line, std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const nlohmann::json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  if (!it->is_string()) throw ParseError(line, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

QueryPair parse_pair(const nlohmann::json& obj, std::size_t line) {
  if (!obj.is_object()) throw ParseError(line, "expected a JSON object");
  QueryPair p;
  p.id = required_string(obj, "id", line);
  if (p.id.empty()) throw ParseError(line, "empty id");
  p.sql1 = required_string(obj, "sql1", line);
  p.sql2 = required_string(obj, "sql2", line);
  p.schema = required_string(obj, "schema", line);

  const auto label = obj.find("label");
  if (label == obj.end() || label->is_null()) throw ParseError(line, "missing field 'label'");
  std::optional<Label> parsed;
  if (label->is_boolean()) parsed = label->get<bool>() ? Label::Equivalent : Label::NonEquivalent;
  if (label->is_string()) parsed = label_from_string(label->get<std::string>());
  if (!parsed || *parsed == Label::Unknown) throw ParseError(line, "label must be Equivalent or Non Equivalent");
  p.label = parsed;

  if (const auto d = optional_string(obj, "difficulty", line)) {
    const auto diff = difficulty_from_string(*d);
    if (!diff) throw ParseError(line, "unknown difficulty '" + *d + "'");
    p.difficulty = *diff;
  }
  p.question = optional_string(obj, "question", line);
  p.explanation = optional_string(obj, "explanation", line);
  p.exact_match = sql::exact_match(p.sql1, p.sql2);
  return p;
}

}  // namespace

std::map<std::string, sql::SchemaDef> schemas_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("schemas file must map names to schemas");
  std::map<std::string, sql::SchemaDef> out;
  for (const auto& [name, doc] : j.items()) {
    try {
      out.emplace(name, sql::schema_from_json(doc));
    } catch (const InvalidInput& e) {
      throw InvalidInput("schema '" + name + "': " + e.what());
    }
  }
  return out;
}

Dataset parse_dataset(std::string_view jsonl, std::map<std::string, sql::SchemaDef> schemas) {
  Dataset ds;
  ds.schemas = std::move(schemas);
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    const std::size_t nl = jsonl.find('\n', pos);
    const std::string_view line = jsonl.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? jsonl.size() + 1 : nl + 1;
    if (blank(line)) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, e.what());
    }
    QueryPair p = parse_pair(obj, line_no);
    if (!ds.schemas.count(p.schema)) throw MissingSchema(p.schema);
    if (!seen.insert(p.id).second) throw DuplicateId(p.id);
    ds.pairs.push_back(std::move(p));
  }
  return ds;
}

Dataset load_dataset(const std::string& jsonl_path, const std::string& schemas_path) {
  nlohmann::json schemas;
  try {
    schemas = nlohmann::json::parse(read_file(schemas_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(schemas_path + ": " + e.what());
  }
  return parse_dataset(read_file(jsonl_path), schemas_from_json(schemas));
}

}  // namespace sqleq::bench
