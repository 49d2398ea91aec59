#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>

#include "sqleq/oracle/oracle.hpp"
#include "sqleq/sql/parser.hpp"

namespace sqleq::oracle {

namespace {

using plan::ExprKind;
using plan::OpKind;
using plan::PlanNode;
using plan::ScalarExpr;
using plan::SubqueryKind;
using sql::BinaryOp;

using Rows = std::vector<Row>;
using Truth = std::optional<bool>;

struct RowLess {
  bool operator()(const Row& a, const Row& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](const Value& x, const Value& y) { return compare_values(x, y) < 0; });
  }
};

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

Value bool_value(Truth t) { return t ? Value(*t) : Value(Null{}); }

std::optional<Value> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const long long i = std::stoll(s, &used);
    if (used == s.size()) return Value(static_cast<std::int64_t>(i));
  } catch (...) {
  }
  try {
    std::size_t used = 0;
    const double d = std::stod(s, &used);
    if (used == s.size()) return Value(d);
  } catch (...) {
  }
  return std::nullopt;
}

Truth truth(const Value& v) {
  switch (v.index()) {
    case 0: return std::nullopt;
    case 1: return std::get<bool>(v);
    case 2: return std::get<std::int64_t>(v) != 0;
    case 3: return std::get<double>(v) != 0.0;
    default: {
      const auto n = parse_number(std::get<std::string>(v));
      return n ? truth(*n) : Truth(false);
    }
  }
}

// Numeric view for arithmetic; booleans count as 0/1, text must look numeric.
Value numeric(const Value& v, const char* what) {
  if (const auto* b = std::get_if<bool>(&v)) return static_cast<std::int64_t>(*b);
  if (const auto* s = std::get_if<std::string>(&v)) {
    if (auto n = parse_number(*s)) return *n;
    throw RuntimeExecError(std::string("non-numeric text '") + *s + "' used in " + what);
  }
  return v;
}

double as_double(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

Value arithmetic(BinaryOp op, const Value& l, const Value& r) {
  if (is_null(l) || is_null(r)) return Null{};
  const Value a = numeric(l, "arithmetic");
  const Value b = numeric(r, "arithmetic");
  const auto* ia = std::get_if<std::int64_t>(&a);
  const auto* ib = std::get_if<std::int64_t>(&b);
  if (ia && ib) {
    std::int64_t out = 0;
    switch (op) {
      case BinaryOp::Add:
        if (__builtin_add_overflow(*ia, *ib, &out)) throw RuntimeExecError("integer overflow");
        return out;
      case BinaryOp::Sub:
        if (__builtin_sub_overflow(*ia, *ib, &out)) throw RuntimeExecError("integer overflow");
        return out;
      case BinaryOp::Mul:
        if (__builtin_mul_overflow(*ia, *ib, &out)) throw RuntimeExecError("integer overflow");
        return out;
      case BinaryOp::Div:
        if (*ib == 0) return Null{};
        if (*ia == INT64_MIN && *ib == -1) throw RuntimeExecError("integer overflow");
        return *ia / *ib;
      case BinaryOp::Mod:
        if (*ib == 0) return Null{};
        if (*ib == -1) return std::int64_t{0};
        return *ia % *ib;
      default: break;
    }
  }
  const double x = as_double(a);
  const double y = as_double(b);
  switch (op) {
    case BinaryOp::Add: return x + y;
    case BinaryOp::Sub: return x - y;
    case BinaryOp::Mul: return x * y;
    case BinaryOp::Div: return y == 0 ? Value(Null{}) : Value(x / y);
    case BinaryOp::Mod: return y == 0 ? Value(Null{}) : Value(std::fmod(x, y));
    default: break;
  }
  throw RuntimeExecError("bad arithmetic operator");
}

Truth compare(BinaryOp op, const Value& l, const Value& r) {
  if (is_null(l) || is_null(r)) return std::nullopt;
  const int c = compare_values(l, r);
  switch (op) {
    case BinaryOp::Eq: return c == 0;
    case BinaryOp::Ne: return c != 0;
    case BinaryOp::Lt: return c < 0;
    case BinaryOp::Le: return c <= 0;
    case BinaryOp::Gt: return c > 0;
    case BinaryOp::Ge: return c >= 0;
    default: break;
  }
  throw RuntimeExecError("bad comparison operator");
}

Truth and3(Truth a, Truth b) {
  if (a == false || b == false) return false;
  if (!a || !b) return std::nullopt;
  return true;
}

Truth or3(Truth a, Truth b) {
  if (a == true || b == true) return true;
  if (!a || !b) return std::nullopt;
  return false;
}

Truth not3(Truth a) { return a ? Truth(!*a) : std::nullopt; }

bool like_match(std::string_view s, std::string_view p) {
  // Iterative wildcard match with backtracking to the last '%'.
  std::size_t si = 0, pi = 0, star = std::string_view::npos, mark = 0;
  while (si < s.size()) {
    if (pi < p.size() && (p[pi] == '_' || p[pi] == s[si])) {
      ++si;
      ++pi;
    } else if (pi < p.size() && p[pi] == '%') {
      star = pi++;
      mark = si;
    } else if (star != std::string_view::npos) {
      pi = star + 1;
      si = ++mark;
    } else {
      return false;
    }
  }
  while (pi < p.size() && p[pi] == '%') ++pi;
  return pi == p.size();
}

std::string text_of(const Value& v) { return to_string(v); }

Value literal_value(const sql::Literal& l) {
  switch (l.kind) {
    case sql::LiteralKind::Null: return Null{};
    case sql::LiteralKind::Boolean: return lower(l.text) == "true";
    case sql::LiteralKind::String: return l.text;
    case sql::LiteralKind::Integer: {
      try {
        return static_cast<std::int64_t>(std::stoll(l.text));
      } catch (const std::out_of_range&) {
        return std::stod(l.text);
      }
    }
    case sql::LiteralKind::Real: return std::stod(l.text);
  }
  return Null{};
}

Value cast_value(const Value& v, const std::string& type) {
  if (is_null(v)) return Null{};
  const std::string t = lower(type);
  auto starts = [&](std::string_view p) { return t.rfind(p, 0) == 0; };
  if (starts("int") || starts("bigint") || starts("smallint") || starts("tinyint")) {
    const Value n = numeric(v, "CAST");
    if (const auto* d = std::get_if<double>(&n)) {
      if (!std::isfinite(*d) || std::fabs(*d) >= 9.2e18) throw RuntimeExecError("integer out of range");
      return static_cast<std::int64_t>(*d);
    }
    return n;
  }
  if (starts("real") || starts("float") || starts("double") || starts("numeric") || starts("decimal")) {
    return as_double(numeric(v, "CAST"));
  }
  if (starts("text") || starts("varchar") || starts("char") || starts("character") || starts("string")) {
    return text_of(v);
  }
  if (starts("bool")) {
    const Truth t2 = truth(v);
    return bool_value(t2);
  }
  throw UnsupportedFeature("CAST to " + type);
}

class Executor {
 public:
  explicit Executor(const DatabaseInstance& db) : db_(db) {}

  Rows run(const PlanNode& n) {
    switch (n.kind) {
      case OpKind::Scan: {
        const TableData* t = db_.find(n.table);
        if (!t) throw RuntimeExecError("instance has no table '" + n.table + "'");
        return t->rows;
      }
      case OpKind::Values: {
        Rows out;
        const Row empty;
        for (const auto& exprs : n.rows) {
          Row r;
          for (const ScalarExpr& e : exprs) r.push_back(eval(e, empty));
          out.push_back(std::move(r));
        }
        return out;
      }
      case OpKind::Filter: {
        Rows out;
        for (Row& r : run(*n.children[0])) {
          if (truth(eval(*n.predicate, r)) == true) out.push_back(std::move(r));
        }
        return out;
      }
      case OpKind::Project: {
        Rows out;
        for (const Row& r : run(*n.children[0])) {
          Row p;
          p.reserve(n.exprs.size());
          for (const ScalarExpr& e : n.exprs) p.push_back(eval(e, r));
          out.push_back(std::move(p));
        }
        return out;
      }
      case OpKind::Join: return join(n);
      case OpKind::Aggregate: return aggregate(n);
      case OpKind::Sort: return sort(n);
      case OpKind::Limit: return limit(n);
      case OpKind::SetOp: return set_op(n);
      case OpKind::CteBind: {
        if (n.recursive) throw UnsupportedFeature("recursive CTE '" + n.table + "'");
        auto rows = std::make_shared<const Rows>(run(*n.children[0]));
        ctes_.emplace_back(lower(n.table), rows);
        ++generation_;
        Rows out;
        try {
          out = run(*n.children[1]);
        } catch (...) {
          ctes_.pop_back();
          ++generation_;
          throw;
        }
        ctes_.pop_back();
        ++generation_;
        return out;
      }
      case OpKind::CteRef: {
        const std::string name = lower(n.table);
        for (auto it = ctes_.rbegin(); it != ctes_.rend(); ++it) {
          if (it->first == name) return *it->second;
        }
        throw RuntimeExecError("CTE '" + n.table + "' is not bound");
      }
    }
    throw RuntimeExecError("unknown operator");
  }

 private:
  const DatabaseInstance& db_;
  std::vector<const Row*> outer_;  // rows of enclosing queries, innermost last
  std::vector<std::pair<std::string, std::shared_ptr<const Rows>>> ctes_;
  // Uncorrelated subquery results, valid while the CTE bindings are unchanged.
  std::map<const PlanNode*, Rows> cache_;
  std::uint64_t generation_ = 0;
  std::uint64_t cache_generation_ = 0;

  Rows join(const PlanNode& n) {
    const Rows left = run(*n.children[0]);
    const Rows right = run(*n.children[1]);
    const std::size_t lw = n.children[0]->columns.size();
    const std::size_t rw = n.children[1]->columns.size();
    Rows out;
    std::vector<bool> right_hit(right.size(), false);
    for (const Row& l : left) {
      bool hit = false;
      for (std::size_t j = 0; j < right.size(); ++j) {
        Row row = l;
        row.insert(row.end(), right[j].begin(), right[j].end());
        if (n.predicate && truth(eval(*n.predicate, row)) != true) continue;
        hit = true;
        right_hit[j] = true;
        out.push_back(std::move(row));
      }
      if (!hit && (n.join_kind == sql::JoinKind::Left || n.join_kind == sql::JoinKind::Full)) {
        Row row = l;
        row.resize(lw + rw, Null{});
        out.push_back(std::move(row));
      }
    }
    if (n.join_kind == sql::JoinKind::Right || n.join_kind == sql::JoinKind::Full) {
      for (std::size_t j = 0; j < right.size(); ++j) {
        if (right_hit[j]) continue;
        Row row(lw, Null{});
        row.insert(row.end(), right[j].begin(), right[j].end());
        out.push_back(std::move(row));
      }
    }
    return out;
  }

  Rows aggregate(const PlanNode& n) {
    const Rows input = run(*n.children[0]);
    std::vector<Row> keys;
    std::vector<std::vector<const Row*>> members;
    std::map<Row, std::size_t, RowLess> index;
    for (const Row& r : input) {
      Row key;
      for (const ScalarExpr& e : n.exprs) key.push_back(eval(e, r));
      auto [it, fresh] = index.emplace(key, keys.size());
      if (fresh) {
        keys.push_back(std::move(key));
        members.emplace_back();
      }
      members[it->second].push_back(&r);
    }
    if (n.exprs.empty() && keys.empty()) {
      keys.emplace_back();
      members.emplace_back();
    }
    Rows out;
    for (std::size_t g = 0; g < keys.size(); ++g) {
      Row row = keys[g];
      for (const plan::AggCall& a : n.aggs) row.push_back(agg_value(a, members[g]));
      out.push_back(std::move(row));
    }
    return out;
  }

  Value agg_value(const plan::AggCall& a, const std::vector<const Row*>& rows) {
    const std::string& f = a.name;
    if (f == "count" && a.star) return static_cast<std::int64_t>(rows.size());
    if (f == "any_value") return rows.empty() ? Value(Null{}) : eval(a.args.at(0), *rows.front());
    if (a.args.empty()) throw UnsupportedFeature("aggregate " + f + " without arguments");

    std::vector<Value> vals;
    for (const Row* r : rows) {
      Value v = eval(a.args[0], *r);
      if (!is_null(v)) vals.push_back(std::move(v));
    }
    if (a.distinct) {
      std::vector<Value> uniq;
      for (Value& v : vals) {
        const bool seen = std::any_of(uniq.begin(), uniq.end(), [&](const Value& u) { return compare_values(u, v) == 0; });
        if (!seen) uniq.push_back(std::move(v));
      }
      vals = std::move(uniq);
    }

    if (f == "count") return static_cast<std::int64_t>(vals.size());
    if (f == "sum" || f == "total" || f == "avg") {
      bool all_int = true;
      std::int64_t isum = 0;
      double dsum = 0;
      for (const Value& raw : vals) {
        const Value v = numeric(raw, f.c_str());
        dsum += as_double(v);
        if (const auto* i = std::get_if<std::int64_t>(&v); i && all_int) {
          if (__builtin_add_overflow(isum, *i, &isum)) throw RuntimeExecError("integer overflow in " + f);
        } else {
          all_int = false;
        }
      }
      if (f == "total") return dsum;
      if (vals.empty()) return Null{};
      if (f == "avg") return dsum / static_cast<double>(vals.size());
      return all_int ? Value(isum) : Value(dsum);
    }
    if (f == "min" || f == "max") {
      if (vals.empty()) return Null{};
      const bool want_min = f == "min";
      Value best = vals.front();
      for (const Value& v : vals) {
        const int c = compare_values(v, best);
        if (want_min ? c < 0 : c > 0) best = v;
      }
      return best;
    }
    if (f == "group_concat" || f == "string_agg") {
      if (vals.empty()) return Null{};
      std::string sep = ",";
      if (a.args.size() > 1 && !rows.empty()) sep = text_of(eval(a.args[1], *rows.front()));
      std::string out;
      for (std::size_t i = 0; i < vals.size(); ++i) out += (i ? sep : "") + text_of(vals[i]);
      return out;
    }
    if (f == "bool_and" || f == "every" || f == "bool_or") {
      if (vals.empty()) return Null{};
      const bool is_and = f != "bool_or";
      bool acc = is_and;
      for (const Value& v : vals) {
        const bool b = truth(v).value_or(false);
        acc = is_and ? (acc && b) : (acc || b);
      }
      return acc;
    }
    throw UnsupportedFeature("aggregate function " + f);
  }

  Rows sort(const PlanNode& n) {
    Rows rows = run(*n.children[0]);
    std::stable_sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
      for (const plan::SortKey& k : n.keys) {
        const Value& x = a[k.column];
        const Value& y = b[k.column];
        int c;
        if (k.nulls != sql::NullsOrder::Default && (is_null(x) || is_null(y))) {
          if (is_null(x) && is_null(y)) continue;
          const bool first = k.nulls == sql::NullsOrder::First;
          return is_null(x) ? first : !first;
        }
        c = compare_values(x, y);
        if (!k.ascending) c = -c;
        if (c != 0) return c < 0;
      }
      return false;
    });
    for (Row& r : rows) r.resize(n.keep);
    return rows;
  }

  std::optional<std::int64_t> count_arg(const std::optional<ScalarExpr>& e, const char* what) {
    if (!e) return std::nullopt;
    const Value v = eval(*e, Row{});
    if (is_null(v)) return std::nullopt;
    const Value n = numeric(v, what);
    if (const auto* i = std::get_if<std::int64_t>(&n)) return *i;
    throw RuntimeExecError(std::string(what) + " must be an integer");
  }

  Rows limit(const PlanNode& n) {
    Rows rows = run(*n.children[0]);
    const auto off = count_arg(n.offset, "OFFSET").value_or(0);
    const auto lim = count_arg(n.limit, "LIMIT");
    const std::size_t start = off > 0 ? std::min<std::size_t>(static_cast<std::size_t>(off), rows.size()) : 0;
    std::size_t end = rows.size();
    if (lim && *lim >= 0) end = std::min(end, start + static_cast<std::size_t>(*lim));
    return Rows(rows.begin() + static_cast<std::ptrdiff_t>(start), rows.begin() + static_cast<std::ptrdiff_t>(end));
  }

  static Rows distinct_rows(const Rows& in) {
    Rows out;
    std::map<Row, bool, RowLess> seen;
    for (const Row& r : in) {
      if (seen.emplace(r, true).second) out.push_back(r);
    }
    return out;
  }

  Rows set_op(const PlanNode& n) {
    const Rows l = run(*n.children[0]);
    const Rows r = run(*n.children[1]);
    std::map<Row, std::size_t, RowLess> right_count;
    for (const Row& row : r) ++right_count[row];
    Rows out;
    switch (n.set_kind) {
      case sql::SetOpKind::Union:
        out = l;
        out.insert(out.end(), r.begin(), r.end());
        return n.all ? out : distinct_rows(out);
      case sql::SetOpKind::Intersect:
        for (const Row& row : n.all ? l : distinct_rows(l)) {
          auto it = right_count.find(row);
          if (it == right_count.end() || it->second == 0) continue;
          if (n.all) --it->second;
          out.push_back(row);
        }
        return out;
      case sql::SetOpKind::Except:
        for (const Row& row : n.all ? l : distinct_rows(l)) {
          auto it = right_count.find(row);
          if (it != right_count.end() && it->second > 0) {
            if (n.all) --it->second;
            continue;
          }
          out.push_back(row);
        }
        return out;
    }
    return out;
  }

  // ---- expressions --------------------------------------------------------

  const Rows& subquery_rows(const ScalarExpr& e, const Row& row, Rows& holder) {
    if (!e.correlated) {
      if (cache_generation_ != generation_) {
        cache_.clear();
        cache_generation_ = generation_;
      }
      auto it = cache_.find(e.plan.get());
      if (it != cache_.end()) return it->second;
    }
    outer_.push_back(&row);
    try {
      holder = run(*e.plan);
    } catch (...) {
      outer_.pop_back();
      throw;
    }
    outer_.pop_back();
    if (!e.correlated) return cache_[e.plan.get()] = std::move(holder);
    return holder;
  }

  Truth quantified(BinaryOp op, sql::Quantifier q, const Value& lhs, const std::vector<Value>& items) {
    const bool any = q == sql::Quantifier::Any;
    bool saw_null = false;
    for (const Value& v : items) {
      const Truth t = compare(op, lhs, v);
      if (!t) {
        saw_null = true;
      } else if (*t == any) {
        return any;
      }
    }
    if (saw_null) return std::nullopt;
    return !any;
  }

  Value eval(const ScalarExpr& e, const Row& row) {
    switch (e.kind) {
      case ExprKind::Column: {
        if (e.level == 0) return row.at(e.index);
        if (e.level > outer_.size()) throw RuntimeExecError("outer reference out of range");
        return outer_[outer_.size() - e.level]->at(e.index);
      }
      case ExprKind::Literal: return literal_value(e.literal);
      case ExprKind::Unary: {
        const Value v = eval(e.children[0], row);
        if (e.unary_op == sql::UnaryOp::Not) return bool_value(not3(truth(v)));
        if (is_null(v)) return Null{};
        const Value n = numeric(v, "unary sign");
        if (e.unary_op == sql::UnaryOp::Plus) return n;
        if (const auto* i = std::get_if<std::int64_t>(&n)) {
          if (*i == INT64_MIN) throw RuntimeExecError("integer overflow");
          return -*i;
        }
        return -std::get<double>(n);
      }
      case ExprKind::Binary: {
        if (e.binary_op == BinaryOp::And) {
          const Truth a = truth(eval(e.children[0], row));
          if (a == false) return false;
          return bool_value(and3(a, truth(eval(e.children[1], row))));
        }
        if (e.binary_op == BinaryOp::Or) {
          const Truth a = truth(eval(e.children[0], row));
          if (a == true) return true;
          return bool_value(or3(a, truth(eval(e.children[1], row))));
        }
        const Value l = eval(e.children[0], row);
        const Value r = eval(e.children[1], row);
        switch (e.binary_op) {
          case BinaryOp::Add:
          case BinaryOp::Sub:
          case BinaryOp::Mul:
          case BinaryOp::Div:
          case BinaryOp::Mod: return arithmetic(e.binary_op, l, r);
          case BinaryOp::Concat:
            if (is_null(l) || is_null(r)) return Null{};
            return text_of(l) + text_of(r);
          default: return bool_value(compare(e.binary_op, l, r));
        }
      }
      case ExprKind::IsNull: {
        const bool n = is_null(eval(e.children[0], row));
        return e.negated ? !n : n;
      }
      case ExprKind::Between: {
        const Value v = eval(e.children[0], row);
        const Truth t = and3(compare(BinaryOp::Ge, v, eval(e.children[1], row)),
                             compare(BinaryOp::Le, v, eval(e.children[2], row)));
        return bool_value(e.negated ? not3(t) : t);
      }
      case ExprKind::Like: {
        const Value v = eval(e.children[0], row);
        const Value p = eval(e.children[1], row);
        if (is_null(v) || is_null(p)) return Null{};
        std::string s = text_of(v), pat = text_of(p);
        if (e.case_insensitive) {
          s = lower(s);
          pat = lower(pat);
        }
        const bool m = like_match(s, pat);
        return e.negated ? !m : m;
      }
      case ExprKind::InList: {
        const Value v = eval(e.children[0], row);
        std::vector<Value> items;
        for (std::size_t i = 1; i < e.children.size(); ++i) items.push_back(eval(e.children[i], row));
        const Truth t = quantified(BinaryOp::Eq, sql::Quantifier::Any, v, items);
        return bool_value(e.negated ? not3(t) : t);
      }
      case ExprKind::Case: {
        std::size_t i = 0;
        std::optional<Value> operand;
        if (e.has_operand) operand = eval(e.children[i++], row);
        const std::size_t end = e.children.size() - (e.has_else ? 1 : 0);
        for (; i < end; i += 2) {
          const Value w = eval(e.children[i], row);
          const Truth hit = operand ? compare(BinaryOp::Eq, *operand, w) : truth(w);
          if (hit == true) return eval(e.children[i + 1], row);
        }
        return e.has_else ? eval(e.children.back(), row) : Value(Null{});
      }
      case ExprKind::Function: return function(e, row);
      case ExprKind::Cast: return cast_value(eval(e.children[0], row), e.name);
      case ExprKind::Array:
      case ExprKind::QuantifiedArray: throw UnsupportedFeature("array expressions");
      case ExprKind::Subquery: return subquery(e, row);
    }
    throw RuntimeExecError("unknown expression");
  }

  Value subquery(const ScalarExpr& e, const Row& row) {
    std::optional<Value> lhs;
    if (e.subquery == SubqueryKind::In || e.subquery == SubqueryKind::Quantified) lhs = eval(e.children[0], row);
    Rows holder;
    const Rows& rows = subquery_rows(e, row, holder);
    switch (e.subquery) {
      case SubqueryKind::Scalar:
        if (rows.empty()) return Null{};
        if (rows.size() > 1) throw RuntimeExecError("scalar subquery returned more than one row");
        return rows[0].at(0);
      case SubqueryKind::Exists: return !rows.empty();
      case SubqueryKind::In:
      case SubqueryKind::Quantified: {
        std::vector<Value> items;
        for (const Row& r : rows) items.push_back(r.at(0));
        if (e.subquery == SubqueryKind::In) {
          const Truth t = quantified(BinaryOp::Eq, sql::Quantifier::Any, *lhs, items);
          return bool_value(e.negated ? not3(t) : t);
        }
        return bool_value(quantified(e.binary_op, e.quantifier, *lhs, items));
      }
    }
    throw RuntimeExecError("unknown subquery kind");
  }

  Value function(const ScalarExpr& e, const Row& row) {
    if (e.window) throw UnsupportedFeature("window function " + e.name);
    if (sql::is_aggregate_name(e.name)) throw RuntimeExecError("aggregate " + e.name + " outside aggregation");
    std::vector<Value> args;
    const std::string& f = e.name;
    if (f == "coalesce" || f == "ifnull") {
      for (const ScalarExpr& a : e.children) {
        Value v = eval(a, row);
        if (!is_null(v)) return v;
      }
      return Null{};
    }
    for (const ScalarExpr& a : e.children) args.push_back(eval(a, row));
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi) throw RuntimeExecError("wrong number of arguments to " + f);
    };
    if (f == "nullif") {
      arity(2, 2);
      return compare(BinaryOp::Eq, args[0], args[1]) == true ? Value(Null{}) : args[0];
    }
    if (f == "abs") {
      arity(1, 1);
      if (is_null(args[0])) return Null{};
      const Value n = numeric(args[0], "abs");
      if (const auto* i = std::get_if<std::int64_t>(&n)) {
        if (*i == INT64_MIN) throw RuntimeExecError("integer overflow");
        return *i < 0 ? -*i : *i;
      }
      return std::fabs(std::get<double>(n));
    }
    if (f == "lower" || f == "upper" || f == "length" || f == "trim" || f == "ltrim" || f == "rtrim") {
      arity(1, 1);
      if (is_null(args[0])) return Null{};
      std::string s = text_of(args[0]);
      if (f == "lower") return lower(s);
      if (f == "upper") return upper(s);
      if (f == "length") return static_cast<std::int64_t>(s.size());
      const auto first = s.find_first_not_of(' ');
      const auto last = s.find_last_not_of(' ');
      if (first == std::string::npos) return std::string();
      if (f == "ltrim") return s.substr(first);
      if (f == "rtrim") return s.substr(0, last + 1);
      return s.substr(first, last - first + 1);
    }
    if (f == "round") {
      arity(1, 2);
      if (is_null(args[0]) || (args.size() == 2 && is_null(args[1]))) return Null{};
      const double x = as_double(numeric(args[0], "round"));
      const double digits = args.size() == 2 ? as_double(numeric(args[1], "round")) : 0;
      const double scale = std::pow(10.0, digits);
      return std::round(x * scale) / scale;
    }
    if (f == "substr" || f == "substring") {
      arity(2, 3);
      for (const Value& a : args) {
        if (is_null(a)) return Null{};
      }
      const std::string s = text_of(args[0]);
      const auto start = std::get<std::int64_t>(cast_value(args[1], "int"));
      const std::int64_t len =
          args.size() == 3 ? std::get<std::int64_t>(cast_value(args[2], "int")) : static_cast<std::int64_t>(s.size());
      std::int64_t from = start - 1;
      std::int64_t to = from + len;
      from = std::clamp<std::int64_t>(from, 0, static_cast<std::int64_t>(s.size()));
      to = std::clamp<std::int64_t>(to, from, static_cast<std::int64_t>(s.size()));
      return s.substr(static_cast<std::size_t>(from), static_cast<std::size_t>(to - from));
    }
    if (f == "replace") {
      arity(3, 3);
      for (const Value& a : args) {
        if (is_null(a)) return Null{};
      }
      std::string s = text_of(args[0]);
      const std::string from = text_of(args[1]), to = text_of(args[2]);
      if (from.empty()) return s;
      std::string out;
      for (std::size_t i = 0; i < s.size();) {
        if (s.compare(i, from.size(), from) == 0) {
          out += to;
          i += from.size();
        } else {
          out.push_back(s[i++]);
        }
      }
      return out;
    }
    throw UnsupportedFeature("function " + f);
  }
};

}  // namespace

ResultTable execute(const plan::LogicalPlan& plan, const DatabaseInstance& db) {
  if (!plan.root) throw RuntimeExecError("empty plan");
  ResultTable out;
  for (const plan::OutColumn& c : plan.root->columns) out.columns.push_back(c.name);
  out.rows = Executor(db).run(*plan.root);
  out.ordered = plan.ordered;
  return out;
}

ResultTable execute(const sql::SqlAst& ast, const DatabaseInstance& db) {
  return execute(plan::build_plan(ast, db.schema), db);
}

}  // namespace sqleq::oracle
