#include <algorithm>
#include <unordered_map>

#include "sqleq/plan/logical_plan.hpp"
#include "sqleq/sql/render.hpp"

namespace sqleq::plan {

using sql::iequals;
namespace ast = sqleq::sql;

bool ScalarExpr::operator==(const ScalarExpr& o) const {
  return kind == o.kind && level == o.level && index == o.index && literal == o.literal &&
         unary_op == o.unary_op && binary_op == o.binary_op && quantifier == o.quantifier &&
         subquery == o.subquery && negated == o.negated && case_insensitive == o.case_insensitive &&
         distinct == o.distinct && star == o.star && has_operand == o.has_operand &&
         has_else == o.has_else && name == o.name && window == o.window && children == o.children &&
         plan == o.plan;
}

namespace {

using NodePtr = std::shared_ptr<PlanNode>;
using BindingMap = std::unordered_map<const ast::ColumnRef*, ast::ColumnBinding>;

struct Scope {
  std::vector<OutColumn> columns;
  std::size_t refs = 0;  // lookups from nested subqueries that landed here
};

struct CteInfo {
  std::string name;
  std::vector<OutColumn> columns;
};

ScalarExpr column_expr(std::size_t level, std::size_t index, std::string label) {
  ScalarExpr e;
  e.kind = ExprKind::Column;
  e.level = level;
  e.index = index;
  e.label = std::move(label);
  return e;
}

bool is_aggregate_call(const ScalarExpr& e) {
  return e.kind == ExprKind::Function && !e.window && ast::is_aggregate_name(e.name);
}

// Aggregate call anywhere in `e`, not looking into subqueries.
bool contains_aggregate(const ScalarExpr& e) {
  if (is_aggregate_call(e)) return true;
  return std::any_of(e.children.begin(), e.children.end(), contains_aggregate);
}

bool contains_aggregate(const ast::Expr& e);

struct AstAggregateFinder {
  bool operator()(const ast::Function& f) const {
    if (!f.window && ast::is_aggregate_name(f.name)) return true;
    return std::any_of(f.args.begin(), f.args.end(), [](const ast::Expr& a) { return contains_aggregate(a); });
  }
  bool operator()(const ast::Unary& n) const { return contains_aggregate(*n.operand); }
  bool operator()(const ast::Binary& n) const { return contains_aggregate(*n.lhs) || contains_aggregate(*n.rhs); }
  bool operator()(const ast::IsNull& n) const { return contains_aggregate(*n.operand); }
  bool operator()(const ast::Between& n) const {
    return contains_aggregate(*n.operand) || contains_aggregate(*n.low) || contains_aggregate(*n.high);
  }
  bool operator()(const ast::Like& n) const { return contains_aggregate(*n.operand) || contains_aggregate(*n.pattern); }
  bool operator()(const ast::InList& n) const {
    return contains_aggregate(*n.operand) ||
           std::any_of(n.items.begin(), n.items.end(), [](const ast::Expr& a) { return contains_aggregate(a); });
  }
  bool operator()(const ast::InSubquery& n) const { return contains_aggregate(*n.operand); }
  bool operator()(const ast::Quantified& n) const {
    return contains_aggregate(*n.lhs) || (n.rhs_expr && contains_aggregate(**n.rhs_expr));
  }
  bool operator()(const ast::Case& n) const {
    if (n.operand && contains_aggregate(**n.operand)) return true;
    if (n.otherwise && contains_aggregate(**n.otherwise)) return true;
    return std::any_of(n.whens.begin(), n.whens.end(), [](const ast::WhenClause& w) {
      return contains_aggregate(w.condition) || contains_aggregate(w.result);
    });
  }
  bool operator()(const ast::Cast& n) const { return contains_aggregate(*n.operand); }
  bool operator()(const ast::ArrayCtor& n) const {
    return std::any_of(n.items.begin(), n.items.end(), [](const ast::Expr& a) { return contains_aggregate(a); });
  }
  template <typename T>
  bool operator()(const T&) const {
    return false;
  }
};

bool contains_aggregate(const ast::Expr& e) { return std::visit(AstAggregateFinder{}, e.node); }

std::string natural_name(const ast::Expr& e) {
  if (const auto* c = std::get_if<ast::ColumnRef>(&e.node)) return c->name;
  if (const auto* f = std::get_if<ast::Function>(&e.node)) return f->name;
  if (const auto* c = std::get_if<ast::Cast>(&e.node)) return natural_name(*c->operand);
  if (e.is<ast::Case>()) return "case";
  return "?column?";
}

std::optional<sql::ColumnBinding> origin_of(const ScalarExpr& e, const std::vector<OutColumn>& input) {
  if (e.kind == ExprKind::Column && e.level == 0 && e.index < input.size()) return input[e.index].origin;
  return std::nullopt;
}

bool query_references(const ast::Query& q, const std::string& name);

bool table_references(const ast::TableRef& r, const std::string& name) {
  if (const auto* t = std::get_if<ast::NamedTable>(&r.node)) return iequals(t->name, name);
  if (const auto* d = std::get_if<ast::DerivedTable>(&r.node)) return query_references(*d->query, name);
  const auto& j = std::get<ast::JoinClause>(r.node);
  return table_references(*j.left, name) || table_references(*j.right, name);
}

bool body_references(const ast::QueryBody& b, const std::string& name) {
  if (const auto* core = std::get_if<ast::SelectCore>(&b.node)) {
    return std::any_of(core->from.begin(), core->from.end(),
                       [&](const ast::TableRef& r) { return table_references(r, name); });
  }
  if (const auto* op = std::get_if<ast::SetOperation>(&b.node)) {
    return body_references(*op->lhs, name) || body_references(*op->rhs, name);
  }
  return query_references(*std::get<ast::NestedQuery>(b.node).query, name);
}

bool query_references(const ast::Query& q, const std::string& name) {
  for (const ast::Cte& cte : q.ctes) {
    if (query_references(*cte.query, name)) return true;
  }
  return body_references(q.body, name);
}

class Planner {
 public:
  Planner(const sql::SchemaDef& schema, BindingMap* bindings) : schema_(schema), bindings_(bindings) {}

  NodePtr query(const ast::Query& q) {
    ctes_.emplace_back();
    std::vector<std::pair<const ast::Cte*, NodePtr>> defs;
    for (const ast::Cte& cte : q.ctes) {
      for (const CteInfo& seen : ctes_.back()) {
        if (iequals(seen.name, cte.name)) throw PlanError("WITH query name '" + cte.name + "' specified more than once");
      }
      const bool self_ref = q.recursive && query_references(*cte.query, cte.name);
      NodePtr def;
      if (self_ref) {
        const auto* op = std::get_if<ast::SetOperation>(&cte.query->body.node);
        if (!op || op->kind != ast::SetOpKind::Union) {
          throw PlanError("recursive query '" + cte.name + "' must have the form anchor UNION [ALL] step");
        }
        if (body_references(*op->lhs, cte.name)) {
          throw PlanError("recursive reference to '" + cte.name + "' in the anchor term");
        }
        NodePtr anchor = body(*op->lhs, {});
        ctes_.back().push_back(CteInfo{cte.name, cte_columns(cte, anchor->columns)});
        def = query(*cte.query);
        if (def->columns.size() != anchor->columns.size()) throw PlanError("recursive query column count mismatch");
      } else {
        def = query(*cte.query);
        ctes_.back().push_back(CteInfo{cte.name, cte_columns(cte, def->columns)});
      }
      defs.emplace_back(&cte, def);
    }

    NodePtr node = ordered_body(q.body, q.order_by);
    if (q.limit || q.offset) {
      auto limit = std::make_shared<PlanNode>();
      limit->kind = OpKind::Limit;
      limit->columns = node->columns;
      Scope empty;
      if (q.limit) limit->limit = bind(*q.limit, empty);
      if (q.offset) limit->offset = bind(*q.offset, empty);
      limit->children.push_back(node);
      node = limit;
    }

    for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
      auto bind_node = std::make_shared<PlanNode>();
      bind_node->kind = OpKind::CteBind;
      bind_node->table = it->first->name;
      bind_node->recursive = q.recursive && query_references(*it->first->query, it->first->name);
      bind_node->columns = node->columns;
      bind_node->children = {it->second, node};
      node = bind_node;
    }
    ctes_.pop_back();
    return node;
  }

 private:
  const sql::SchemaDef& schema_;
  BindingMap* bindings_;
  std::vector<Scope*> outer_;               // enclosing query rows, innermost last
  std::vector<std::vector<CteInfo>> ctes_;  // WITH frames, innermost last

  static std::vector<OutColumn> cte_columns(const ast::Cte& cte, const std::vector<OutColumn>& def) {
    if (!cte.columns.empty() && cte.columns.size() != def.size()) {
      throw PlanError("WITH query '" + cte.name + "' has " + std::to_string(def.size()) + " columns but " +
                      std::to_string(cte.columns.size()) + " names");
    }
    std::vector<OutColumn> out;
    for (std::size_t i = 0; i < def.size(); ++i) {
      out.push_back(OutColumn{cte.name, cte.columns.empty() ? def[i].name : cte.columns[i], false, std::nullopt});
    }
    return out;
  }

  // ---- query bodies -------------------------------------------------------

  NodePtr body(const ast::QueryBody& b, const std::vector<ast::OrderItem>& order_by) {
    return ordered_body(b, order_by);
  }

  NodePtr ordered_body(const ast::QueryBody& b, const std::vector<ast::OrderItem>& order_by) {
    if (const auto* core = std::get_if<ast::SelectCore>(&b.node)) return select(*core, order_by);

    NodePtr node;
    if (const auto* op = std::get_if<ast::SetOperation>(&b.node)) {
      NodePtr lhs = body(*op->lhs, {});
      NodePtr rhs = body(*op->rhs, {});
      if (lhs->columns.size() != rhs->columns.size()) {
        throw PlanError(std::string("each ") + ast::to_string(op->kind) + " query must have the same number of columns");
      }
      node = std::make_shared<PlanNode>();
      node->kind = OpKind::SetOp;
      node->set_kind = op->kind;
      node->all = op->all;
      for (const OutColumn& c : lhs->columns) node->columns.push_back(OutColumn{"", c.name, false, std::nullopt});
      node->children = {lhs, rhs};
    } else {
      node = query(*std::get<ast::NestedQuery>(b.node).query);
    }
    if (order_by.empty()) return node;

    std::vector<SortKey> keys;
    for (const ast::OrderItem& item : order_by) {
      auto slot = output_slot(item.expr, node->columns, node->columns.size());
      if (!slot) throw PlanError("ORDER BY on a set operation must name a result column");
      keys.push_back(SortKey{*slot, item.ascending, item.nulls, sql::render_expr(item.expr)});
    }
    return sort(node, std::move(keys), node->columns.size());
  }

  static NodePtr sort(NodePtr input, std::vector<SortKey> keys, std::size_t keep) {
    auto node = std::make_shared<PlanNode>();
    node->kind = OpKind::Sort;
    node->keys = std::move(keys);
    node->keep = keep;
    node->columns.assign(input->columns.begin(), input->columns.begin() + static_cast<std::ptrdiff_t>(keep));
    node->children.push_back(std::move(input));
    return node;
  }

  // Ordinal or output-name match for an ORDER BY / GROUP BY item.
  static std::optional<std::size_t> output_slot(const ast::Expr& e, const std::vector<OutColumn>& cols,
                                                std::size_t visible) {
    if (const auto* lit = std::get_if<ast::Literal>(&e.node)) {
      if (lit->kind != ast::LiteralKind::Integer) return std::nullopt;
      const long long k = std::stoll(lit->text);
      if (k < 1 || static_cast<std::size_t>(k) > visible) {
        throw PlanError("ORDER BY position " + lit->text + " is not in select list");
      }
      return static_cast<std::size_t>(k - 1);
    }
    const auto* ref = std::get_if<ast::ColumnRef>(&e.node);
    if (!ref || ref->qualifier) return std::nullopt;
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < visible; ++i) {
      if (!iequals(cols[i].name, ref->name)) continue;
      if (found) throw AmbiguousColumn(ref->name);
      found = i;
    }
    return found;
  }

  // ---- SELECT ---------------------------------------------------------------

  NodePtr select(const ast::SelectCore& core, const std::vector<ast::OrderItem>& order_by) {
    bool has_agg = !core.group_by.empty() || core.having.has_value();
    for (const ast::SelectItem& item : core.projection) has_agg = has_agg || contains_aggregate(item.expr);
    for (const ast::OrderItem& item : order_by) has_agg = has_agg || contains_aggregate(item.expr);

    if (core.from.empty() && !core.where && !has_agg && !core.distinct) return values_select(core, order_by);

    // FROM
    NodePtr node;
    if (core.from.empty()) {
      node = std::make_shared<PlanNode>();
      node->kind = OpKind::Values;
      node->rows.emplace_back();
    } else {
      node = table(core.from[0]);
      for (std::size_t i = 1; i < core.from.size(); ++i) {
        NodePtr rhs = table(core.from[i]);
        auto join = std::make_shared<PlanNode>();
        join->kind = OpKind::Join;
        join->join_kind = ast::JoinKind::Cross;
        join->columns = node->columns;
        join->columns.insert(join->columns.end(), rhs->columns.begin(), rhs->columns.end());
        join->children = {node, rhs};
        node = join;
      }
    }
    Scope from;
    from.columns = node->columns;

    // WHERE
    if (core.where) {
      ScalarExpr pred = bind(*core.where, from);
      if (contains_aggregate(pred)) throw PlanError("aggregate functions are not allowed in WHERE");
      node = filter(node, std::move(pred));
    }

    // GROUP BY / aggregates
    std::vector<ScalarExpr> groups;
    std::vector<AggCall> aggs;
    if (has_agg) {
      for (const ast::Expr& g : core.group_by) groups.push_back(group_key(g, core, from));
      for (const ScalarExpr& g : groups) {
        if (contains_aggregate(g)) throw PlanError("aggregate functions are not allowed in GROUP BY");
      }
    }
    // Everything above the aggregate is bound against the FROM row and then
    // rewritten onto the aggregate's output row.
    auto post = [&](const ast::Expr& e) {
      ScalarExpr bound = bind(e, from);
      return has_agg ? lift(bound, groups, aggs) : bound;
    };

    std::optional<ScalarExpr> having;
    if (core.having) having = post(*core.having);

    std::vector<ScalarExpr> items;
    std::vector<std::string> aliases;
    std::vector<OutColumn> out;
    for (const ast::SelectItem& item : core.projection) {
      if (const auto* star = std::get_if<ast::Star>(&item.expr.node)) {
        bool any = false;
        for (std::size_t i = 0; i < from.columns.size(); ++i) {
          const OutColumn& c = from.columns[i];
          if (star->qualifier ? !iequals(c.relation, *star->qualifier) : c.using_hidden) continue;
          any = true;
          ScalarExpr col = column_expr(0, i, star_label(c));
          items.push_back(has_agg ? lift(col, groups, aggs) : col);
          aliases.emplace_back();
          out.push_back(OutColumn{"", c.name, false, c.origin});
        }
        if (!any && star->qualifier) throw UnresolvedName(*star->qualifier + ".*");
        continue;
      }
      ScalarExpr bound = bind(item.expr, from);
      std::optional<sql::ColumnBinding> origin = origin_of(bound, from.columns);
      items.push_back(has_agg ? lift(bound, groups, aggs) : std::move(bound));
      aliases.push_back(item.alias.value_or(""));
      out.push_back(OutColumn{"", item.alias ? *item.alias : natural_name(item.expr), false, has_agg ? std::nullopt : origin});
    }
    const std::size_t visible = items.size();

    // ORDER BY keys: output column when possible, otherwise an extra
    // projected expression that only the Sort sees.
    std::vector<SortKey> keys;
    for (const ast::OrderItem& item : order_by) {
      std::optional<std::size_t> slot = output_slot(item.expr, out, visible);
      ScalarExpr bound;
      if (!slot) {
        bound = post(item.expr);
        for (std::size_t i = 0; i < items.size() && !slot; ++i) {
          if (items[i] == bound) slot = i;
        }
      }
      if (!slot) {
        if (core.distinct) throw PlanError("for SELECT DISTINCT, ORDER BY expressions must appear in select list");
        slot = items.size();
        items.push_back(std::move(bound));
        aliases.emplace_back();
      }
      keys.push_back(SortKey{*slot, item.ascending, item.nulls, sql::render_expr(item.expr)});
    }

    if (has_agg) {
      auto agg = std::make_shared<PlanNode>();
      agg->kind = OpKind::Aggregate;
      agg->exprs = groups;
      agg->aggs = aggs;
      for (std::size_t i = 0; i < groups.size(); ++i) {
        agg->columns.push_back(OutColumn{"", groups[i].kind == ExprKind::Column ? groups[i].label : "?group?", false, std::nullopt});
      }
      for (const AggCall& a : aggs) agg->columns.push_back(OutColumn{"", a.name, false, std::nullopt});
      agg->children.push_back(node);
      node = agg;
      if (having) node = filter(node, std::move(*having));
    }

    auto project = std::make_shared<PlanNode>();
    project->kind = OpKind::Project;
    project->exprs = std::move(items);
    project->aliases = std::move(aliases);
    project->visible = visible;
    project->columns = out;
    for (std::size_t i = visible; i < project->exprs.size(); ++i) {
      project->columns.push_back(OutColumn{"", "$sort" + std::to_string(i - visible), false, std::nullopt});
    }
    project->children.push_back(node);
    node = project;

    if (core.distinct) {
      auto distinct = std::make_shared<PlanNode>();
      distinct->kind = OpKind::Aggregate;
      for (std::size_t i = 0; i < visible; ++i) {
        distinct->exprs.push_back(column_expr(0, i, out[i].name));
      }
      distinct->columns = out;
      distinct->children.push_back(node);
      node = distinct;
    }

    if (!keys.empty()) node = sort(node, std::move(keys), visible);
    return node;
  }

  NodePtr values_select(const ast::SelectCore& core, const std::vector<ast::OrderItem>& order_by) {
    auto node = std::make_shared<PlanNode>();
    node->kind = OpKind::Values;
    Scope empty;
    node->rows.emplace_back();
    for (const ast::SelectItem& item : core.projection) {
      if (item.expr.is<ast::Star>()) throw PlanError("SELECT * with no tables specified is not valid");
      node->rows.back().push_back(bind(item.expr, empty));
      node->columns.push_back(OutColumn{"", item.alias ? *item.alias : natural_name(item.expr), false, std::nullopt});
    }
    if (order_by.empty()) return node;
    std::vector<SortKey> keys;
    for (const ast::OrderItem& item : order_by) {
      auto slot = output_slot(item.expr, node->columns, node->columns.size());
      if (!slot) throw PlanError("ORDER BY of a table-less SELECT must name a result column");
      keys.push_back(SortKey{*slot, item.ascending, item.nulls, sql::render_expr(item.expr)});
    }
    const std::size_t width = node->columns.size();
    return sort(node, std::move(keys), width);
  }

  static std::string star_label(const OutColumn& c) {
    return c.relation.empty() ? sql::render_identifier(c.name)
                              : sql::render_identifier(c.relation) + "." + sql::render_identifier(c.name);
  }

  static NodePtr filter(NodePtr input, ScalarExpr pred) {
    auto node = std::make_shared<PlanNode>();
    node->kind = OpKind::Filter;
    node->columns = input->columns;
    node->predicate = std::move(pred);
    node->children.push_back(std::move(input));
    return node;
  }

  ScalarExpr group_key(const ast::Expr& g, const ast::SelectCore& core, Scope& from) {
    // GROUP BY 2 and GROUP BY <output alias> name select-list items.
    if (const auto* lit = std::get_if<ast::Literal>(&g.node); lit && lit->kind == ast::LiteralKind::Integer) {
      const long long k = std::stoll(lit->text);
      if (k < 1 || static_cast<std::size_t>(k) > core.projection.size() ||
          core.projection[static_cast<std::size_t>(k - 1)].expr.is<ast::Star>()) {
        throw PlanError("GROUP BY position " + lit->text + " is not in select list");
      }
      return bind(core.projection[static_cast<std::size_t>(k - 1)].expr, from);
    }
    if (const auto* ref = std::get_if<ast::ColumnRef>(&g.node); ref && !ref->qualifier) {
      if (!find_in(from, std::nullopt, ref->name)) {
        for (const ast::SelectItem& item : core.projection) {
          if (item.alias && iequals(*item.alias, ref->name)) return bind(item.expr, from);
        }
      }
    }
    return bind(g, from);
  }

  // Rewrites an expression over the FROM row into one over the aggregate's
  // output row (group keys, then aggregate calls).
  ScalarExpr lift(const ScalarExpr& e, const std::vector<ScalarExpr>& groups, std::vector<AggCall>& aggs) {
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (groups[i] == e) return column_expr(0, i, render_scalar(e));
    }
    if (is_aggregate_call(e)) {
      for (const ScalarExpr& a : e.children) {
        if (contains_aggregate(a)) throw PlanError("aggregate function calls cannot be nested");
      }
      AggCall call{e.name, e.distinct, e.star, false, e.children};
      return column_expr(0, groups.size() + intern(aggs, std::move(call)), render_scalar(e));
    }
    if (e.kind == ExprKind::Column && e.level == 0) {
      AggCall call{"any_value", false, false, true, {e}};
      return column_expr(0, groups.size() + intern(aggs, std::move(call)), e.label);
    }
    if (e.kind == ExprKind::Subquery && e.correlated) {
      throw PlanError("correlated subqueries above GROUP BY are not supported");
    }
    ScalarExpr out = e;
    for (ScalarExpr& c : out.children) c = lift(c, groups, aggs);
    return out;
  }

  static std::size_t intern(std::vector<AggCall>& aggs, AggCall call) {
    for (std::size_t i = 0; i < aggs.size(); ++i) {
      if (aggs[i] == call) return i;
    }
    aggs.push_back(std::move(call));
    return aggs.size() - 1;
  }

  // ---- FROM items -------------------------------------------------------------

  const CteInfo* find_cte(const std::string& name) const {
    for (auto frame = ctes_.rbegin(); frame != ctes_.rend(); ++frame) {
      for (const CteInfo& info : *frame) {
        if (iequals(info.name, name)) return &info;
      }
    }
    return nullptr;
  }

  NodePtr table(const ast::TableRef& ref) {
    if (const auto* named = std::get_if<ast::NamedTable>(&ref.node)) return named_table(*named);
    if (const auto* derived = std::get_if<ast::DerivedTable>(&ref.node)) {
      NodePtr node = query(*derived->query);
      for (OutColumn& c : node->columns) {
        c.relation = derived->alias.value_or("");
        c.using_hidden = false;
      }
      return node;
    }
    const auto& j = std::get<ast::JoinClause>(ref.node);
    NodePtr lhs = table(*j.left);
    NodePtr rhs = table(*j.right);
    auto node = std::make_shared<PlanNode>();
    node->kind = OpKind::Join;
    node->join_kind = j.kind;
    node->columns = lhs->columns;
    node->columns.insert(node->columns.end(), rhs->columns.begin(), rhs->columns.end());
    Scope scope;
    scope.columns = node->columns;
    if (j.condition) {
      node->predicate = bind(*j.condition, scope);
      if (contains_aggregate(*node->predicate)) throw PlanError("aggregate functions are not allowed in JOIN conditions");
    } else if (!j.using_columns.empty()) {
      const std::size_t width = lhs->columns.size();
      for (const std::string& name : j.using_columns) {
        auto l = unique_column(lhs->columns, name, 0);
        auto r = unique_column(rhs->columns, name, width);
        ScalarExpr eq;
        eq.kind = ExprKind::Binary;
        eq.binary_op = ast::BinaryOp::Eq;
        eq.children = {column_expr(0, l, star_label(node->columns[l])), column_expr(0, r, star_label(node->columns[r]))};
        node->columns[r].using_hidden = true;
        if (!node->predicate) {
          node->predicate = std::move(eq);
        } else {
          ScalarExpr both;
          both.kind = ExprKind::Binary;
          both.binary_op = ast::BinaryOp::And;
          both.children = {std::move(*node->predicate), std::move(eq)};
          node->predicate = std::move(both);
        }
      }
    }
    node->children = {lhs, rhs};
    return node;
  }

  static std::size_t unique_column(const std::vector<OutColumn>& cols, const std::string& name, std::size_t base) {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i].using_hidden || !iequals(cols[i].name, name)) continue;
      if (found) throw AmbiguousColumn(name);
      found = i;
    }
    if (!found) throw UnresolvedName(name);
    return base + *found;
  }

  NodePtr named_table(const ast::NamedTable& t) {
    auto node = std::make_shared<PlanNode>();
    node->alias = t.alias;
    const std::string relation = t.alias.value_or(t.name);
    if (const CteInfo* cte = find_cte(t.name)) {
      node->kind = OpKind::CteRef;
      node->table = cte->name;
      for (const OutColumn& c : cte->columns) node->columns.push_back(OutColumn{relation, c.name, false, std::nullopt});
      return node;
    }
    const sql::TableDef* def = schema_.find_table(t.name);
    std::string short_name = t.name;
    if (!def) {
      const std::size_t dot = t.name.rfind('.');
      if (dot != std::string::npos) {
        def = schema_.find_table(t.name.substr(dot + 1));
        short_name = t.name.substr(dot + 1);
      }
    }
    if (!def) throw UnresolvedName(t.name);
    node->kind = OpKind::Scan;
    node->table = def->name;
    const std::string rel = t.alias.value_or(short_name);
    for (const std::string& c : def->columns) {
      node->columns.push_back(OutColumn{rel, c, false, sql::ColumnBinding{def->name, c}});
    }
    return node;
  }

  // ---- expressions --------------------------------------------------------

  static std::optional<std::size_t> find_in(const Scope& scope, const std::optional<std::string>& qualifier,
                                            const std::string& name) {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < scope.columns.size(); ++i) {
      const OutColumn& c = scope.columns[i];
      if (qualifier ? !iequals(c.relation, *qualifier) : c.using_hidden) continue;
      if (!iequals(c.name, name)) continue;
      if (found) throw AmbiguousColumn(qualifier ? *qualifier + "." + name : name);
      found = i;
    }
    return found;
  }

  ScalarExpr column(const ast::ColumnRef& ref, Scope& local) {
    const std::string label = sql::render_expr(ast::Expr{ast::ColumnRef{ref.qualifier, ref.name, ref.raw, std::nullopt}});
    auto record = [&](const OutColumn& c) {
      if (bindings_ && c.origin) (*bindings_)[&ref] = *c.origin;
    };
    if (auto i = find_in(local, ref.qualifier, ref.name)) {
      record(local.columns[*i]);
      return column_expr(0, *i, label);
    }
    for (std::size_t level = 1; level <= outer_.size(); ++level) {
      Scope& scope = *outer_[outer_.size() - level];
      if (auto i = find_in(scope, ref.qualifier, ref.name)) {
        ++scope.refs;
        record(scope.columns[*i]);
        return column_expr(level, *i, label);
      }
    }
    if (!ref.qualifier && !ref.raw.empty() && ref.raw.front() == '"') {
      ScalarExpr lit;
      lit.kind = ExprKind::Literal;
      lit.literal = ast::Literal{ast::LiteralKind::String, ref.name};
      return lit;
    }
    throw UnresolvedName(ref.qualifier ? *ref.qualifier + "." + ref.name : ref.name);
  }

  ScalarExpr subquery(const ast::Query& q, Scope& local, SubqueryKind kind) {
    outer_.push_back(&local);
    auto total_refs = [&] {
      std::size_t n = 0;
      for (const Scope* s : outer_) n += s->refs;
      return n;
    };
    const std::size_t before = total_refs();
    NodePtr node;
    try {
      node = query(q);
    } catch (...) {
      outer_.pop_back();
      throw;
    }
    const bool correlated = total_refs() != before;
    outer_.pop_back();
    if (kind != SubqueryKind::Exists && node->columns.size() != 1) {
      throw PlanError("subquery must return only one column");
    }
    ScalarExpr e;
    e.kind = ExprKind::Subquery;
    e.subquery = kind;
    e.correlated = correlated;
    e.plan = node;
    return e;
  }

  ScalarExpr unary_node(ExprKind kind, ScalarExpr child) {
    ScalarExpr e;
    e.kind = kind;
    e.children.push_back(std::move(child));
    return e;
  }

  ScalarExpr bind(const ast::Expr& expr, Scope& local) {
    return std::visit([&](const auto& n) { return bind_node(n, local); }, expr.node);
  }

  ScalarExpr bind_node(const ast::ColumnRef& n, Scope& local) { return column(n, local); }
  ScalarExpr bind_node(const ast::Literal& n, Scope&) {
    ScalarExpr e;
    e.kind = ExprKind::Literal;
    e.literal = n;
    return e;
  }
  ScalarExpr bind_node(const ast::Star&, Scope&) { throw PlanError("'*' is only allowed in a select list"); }
  ScalarExpr bind_node(const ast::Unary& n, Scope& local) {
    ScalarExpr e = unary_node(ExprKind::Unary, bind(*n.operand, local));
    e.unary_op = n.op;
    return e;
  }
  ScalarExpr bind_node(const ast::Binary& n, Scope& local) {
    ScalarExpr e;
    e.kind = ExprKind::Binary;
    e.binary_op = n.op;
    e.children.push_back(bind(*n.lhs, local));
    e.children.push_back(bind(*n.rhs, local));
    return e;
  }
  ScalarExpr bind_node(const ast::IsNull& n, Scope& local) {
    ScalarExpr e = unary_node(ExprKind::IsNull, bind(*n.operand, local));
    e.negated = n.negated;
    return e;
  }
  ScalarExpr bind_node(const ast::Between& n, Scope& local) {
    ScalarExpr e;
    e.kind = ExprKind::Between;
    e.negated = n.negated;
    e.children = {bind(*n.operand, local), bind(*n.low, local), bind(*n.high, local)};
    return e;
  }
  ScalarExpr bind_node(const ast::Like& n, Scope& local) {
    ScalarExpr e;
    e.kind = ExprKind::Like;
    e.negated = n.negated;
    e.case_insensitive = n.case_insensitive;
    e.children = {bind(*n.operand, local), bind(*n.pattern, local)};
    return e;
  }
  ScalarExpr bind_node(const ast::InList& n, Scope& local) {
    ScalarExpr e;
    e.kind = ExprKind::InList;
    e.negated = n.negated;
    e.children.push_back(bind(*n.operand, local));
    for (const ast::Expr& item : n.items) e.children.push_back(bind(item, local));
    return e;
  }
  ScalarExpr bind_node(const ast::InSubquery& n, Scope& local) {
    ScalarExpr operand = bind(*n.operand, local);
    ScalarExpr e = subquery(*n.query, local, SubqueryKind::In);
    e.negated = n.negated;
    e.children.push_back(std::move(operand));
    return e;
  }
  ScalarExpr bind_node(const ast::Exists& n, Scope& local) { return subquery(*n.query, local, SubqueryKind::Exists); }
  ScalarExpr bind_node(const ast::ScalarSubquery& n, Scope& local) {
    return subquery(*n.query, local, SubqueryKind::Scalar);
  }
  ScalarExpr bind_node(const ast::Quantified& n, Scope& local) {
    ScalarExpr lhs = bind(*n.lhs, local);
    ScalarExpr e;
    if (n.rhs_query) {
      e = subquery(**n.rhs_query, local, SubqueryKind::Quantified);
      e.children.push_back(std::move(lhs));
    } else {
      e.kind = ExprKind::QuantifiedArray;
      e.children = {std::move(lhs), bind(**n.rhs_expr, local)};
    }
    e.binary_op = n.op;
    e.quantifier = n.quantifier;
    return e;
  }
  ScalarExpr bind_node(const ast::Case& n, Scope& local) {
    ScalarExpr e;
    e.kind = ExprKind::Case;
    if (n.operand) {
      e.has_operand = true;
      e.children.push_back(bind(**n.operand, local));
    }
    for (const ast::WhenClause& w : n.whens) {
      e.children.push_back(bind(w.condition, local));
      e.children.push_back(bind(w.result, local));
    }
    if (n.otherwise) {
      e.has_else = true;
      e.children.push_back(bind(**n.otherwise, local));
    }
    return e;
  }
  ScalarExpr bind_node(const ast::Function& n, Scope& local) {
    ScalarExpr e;
    e.kind = ExprKind::Function;
    e.name = n.name;
    e.distinct = n.distinct;
    e.star = n.star;
    e.window = n.window;
    for (const ast::Expr& a : n.args) e.children.push_back(bind(a, local));
    return e;
  }
  ScalarExpr bind_node(const ast::Cast& n, Scope& local) {
    ScalarExpr e = unary_node(ExprKind::Cast, bind(*n.operand, local));
    e.name = n.type_name;
    return e;
  }
  ScalarExpr bind_node(const ast::ArrayCtor& n, Scope& local) {
    ScalarExpr e;
    e.kind = ExprKind::Array;
    for (const ast::Expr& item : n.items) e.children.push_back(bind(item, local));
    return e;
  }
};

LogicalPlan plan_with(const sql::SqlAst& ast, const sql::SchemaDef& schema, BindingMap* bindings) {
  if (ast.partial) {
    throw PlanError("statement has an unrecognized clause at offset " + std::to_string(ast.opaque_offset));
  }
  Planner planner(schema, bindings);
  LogicalPlan plan;
  plan.root = planner.query(ast.root);
  plan.ordered = !ast.root.order_by.empty();
  return plan;
}

}  // namespace

LogicalPlan build_plan(const sql::SqlAst& ast, const sql::SchemaDef& schema) {
  return plan_with(ast, schema, nullptr);
}

void bind_columns(sql::SqlAst& ast, const sql::SchemaDef& schema) {
  BindingMap bindings;
  plan_with(ast, schema, &bindings);
  for (const auto& [ref, binding] : bindings) {
    // The map keys point into `ast`, which the caller handed over mutably.
    const_cast<ast::ColumnRef*>(ref)->binding = binding;
  }
}

}  // namespace sqleq::plan
