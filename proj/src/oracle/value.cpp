#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "sqleq/oracle/oracle.hpp"

namespace sqleq::oracle {

namespace {

int rank(const Value& v) {
  switch (v.index()) {
    case 0: return 0;
    case 1: return 1;
    case 2:
    case 3: return 2;
    default: return 3;
  }
}

double as_double(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

int sign(double d) { return d < 0 ? -1 : (d > 0 ? 1 : 0); }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

int compare_values(const Value& a, const Value& b) {
  const int ra = rank(a);
  const int rb = rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (ra) {
    case 0: return 0;
    case 1: return static_cast<int>(std::get<bool>(a)) - static_cast<int>(std::get<bool>(b));
    case 2: {
      const auto* ia = std::get_if<std::int64_t>(&a);
      const auto* ib = std::get_if<std::int64_t>(&b);
      if (ia && ib) return *ia < *ib ? -1 : (*ia > *ib ? 1 : 0);
      const double da = as_double(a);
      const double db = as_double(b);
      // NaN sorts below every other number so the order stays total.
      if (std::isnan(da) || std::isnan(db)) return std::isnan(da) ? (std::isnan(db) ? 0 : -1) : 1;
      return sign(da - db);
    }
    default: {
      const int c = std::get<std::string>(a).compare(std::get<std::string>(b));
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
  }
}

std::string to_string(const Value& v) {
  switch (v.index()) {
    case 0: return "NULL";
    case 1: return std::get<bool>(v) ? "true" : "false";
    case 2: return std::to_string(std::get<std::int64_t>(v));
    case 3: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.15g", std::get<double>(v));
      std::string s = buf;
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      return s;
    }
    default: return std::get<std::string>(v);
  }
}

nlohmann::json value_to_json(const Value& v) {
  switch (v.index()) {
    case 0: return nullptr;
    case 1: return std::get<bool>(v);
    case 2: return std::get<std::int64_t>(v);
    case 3: return std::get<double>(v);
    default: return std::get<std::string>(v);
  }
}

Value value_from_json(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return Null{};
    case nlohmann::json::value_t::boolean: return j.get<bool>();
    case nlohmann::json::value_t::number_integer: return j.get<std::int64_t>();
    case nlohmann::json::value_t::number_unsigned: {
      const auto u = j.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(INT64_MAX)) return static_cast<double>(u);
      return static_cast<std::int64_t>(u);
    }
    case nlohmann::json::value_t::number_float: return j.get<double>();
    case nlohmann::json::value_t::string: return j.get<std::string>();
    default: throw InvalidInput("cell values must be null, boolean, number or string");
  }
}

const TableData* DatabaseInstance::find(std::string_view name) const {
  auto it = tables.find(lower(name));
  return it == tables.end() ? nullptr : &it->second;
}

DatabaseInstance instance_from_json(const nlohmann::json& j, const sql::SchemaDef& schema) {
  DatabaseInstance db;
  db.schema = schema;
  for (const sql::TableDef& t : schema.tables) db.tables[lower(t.name)] = TableData{t.columns, {}};
  if (!j.is_object() || !j.contains("tables") || !j["tables"].is_object()) {
    throw InvalidInput("instance must be an object with a 'tables' object");
  }
  for (const auto& [name, body] : j["tables"].items()) {
    const sql::TableDef* def = schema.find_table(name);
    if (!def) throw InvalidInput("instance table '" + name + "' is not in the schema");
    TableData& data = db.tables[lower(def->name)];
    try {
      const auto cols = body.at("columns").get<std::vector<std::string>>();
      if (cols.size() != def->columns.size()) {
        throw InvalidInput("table '" + name + "' must list exactly the schema's " +
                           std::to_string(def->columns.size()) + " columns");
      }
      // position in file -> position in schema
      std::vector<std::size_t> map(cols.size());
      std::set<std::size_t> used;
      for (std::size_t i = 0; i < cols.size(); ++i) {
        bool found = false;
        for (std::size_t k = 0; k < def->columns.size(); ++k) {
          if (sql::iequals(def->columns[k], cols[i])) {
            map[i] = k;
            found = used.insert(k).second;
            break;
          }
        }
        if (!found) throw InvalidInput("table '" + name + "' has unknown or repeated column '" + cols[i] + "'");
      }
      std::size_t line = 0;
      for (const auto& r : body.at("rows")) {
        ++line;
        if (!r.is_array() || r.size() != cols.size()) {
          throw InvalidInput("table '" + name + "' row " + std::to_string(line) + " has wrong arity");
        }
        Row row(cols.size());
        for (std::size_t i = 0; i < cols.size(); ++i) row[map[i]] = value_from_json(r[i]);
        data.rows.push_back(std::move(row));
      }
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput("table '" + name + "': " + e.what());
    }

    const auto pk = schema.primary_key_of(def->name);
    if (pk.empty()) continue;
    std::vector<std::size_t> idx;
    for (const std::string& c : pk) {
      for (std::size_t k = 0; k < def->columns.size(); ++k) {
        if (sql::iequals(def->columns[k], c)) idx.push_back(k);
      }
    }
    std::set<Row, bool (*)(const Row&, const Row&)> seen([](const Row& a, const Row& b) {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                          [](const Value& x, const Value& y) { return compare_values(x, y) < 0; });
    });
    for (const Row& row : data.rows) {
      Row key;
      for (std::size_t k : idx) {
        if (is_null(row[k])) throw InvalidInput("table '" + name + "' has a NULL primary key value");
        key.push_back(row[k]);
      }
      if (!seen.insert(key).second) throw InvalidInput("table '" + name + "' has a duplicate primary key");
    }
  }
  return db;
}

DatabaseInstance load_instance_file(const std::string& path, const sql::SchemaDef& schema) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open instance file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("instance file '" + path + "': " + e.what());
  }
  return instance_from_json(j, schema);
}

nlohmann::json instance_to_json(const DatabaseInstance& db) {
  nlohmann::json tables = nlohmann::json::object();
  for (const sql::TableDef& t : db.schema.tables) {
    const TableData* data = db.find(t.name);
    nlohmann::json rows = nlohmann::json::array();
    for (const Row& r : data->rows) {
      nlohmann::json row = nlohmann::json::array();
      for (const Value& v : r) row.push_back(value_to_json(v));
      rows.push_back(std::move(row));
    }
    tables[t.name] = {{"columns", data->columns}, {"rows", rows}};
  }
  return {{"tables", tables}};
}

}  // namespace sqleq::oracle
