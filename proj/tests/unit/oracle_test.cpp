#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "queries.hpp"
#include "sqleq/oracle/oracle.hpp"
#include "sqleq/sql/parser.hpp"

using namespace sqleq;
using namespace sqleq::oracle;
namespace td = sqleq::testdata;
using nlohmann::json;

namespace {

sql::SchemaDef small_schema() {
  return sql::schema_from_json(json::parse(R"({"tables":[
      {"name":"t","columns":["a","b"]},
      {"name":"s","columns":["a","c"]},
      {"name":"x","columns":["x"]}],
    "foreign_keys":[],"primary_keys":[]})"));
}

DatabaseInstance small_db() {
  return instance_from_json(json::parse(R"({"tables":{
      "t":{"columns":["a","b"],"rows":[[1,10],[2,null],[2,30],[null,40]]},
      "s":{"columns":["a","c"],"rows":[[2,"x"],[3,"y"],[null,"z"]]},
      "x":{"columns":["x"],"rows":[[null],[null],[null]]}}})"),
                            small_schema());
}

ResultTable run(const std::string& sql, const DatabaseInstance& db) { return execute(sql::parse_sql(sql), db); }

// Rows rendered as "v,v;v,v" for compact expectations.
std::string flat(const ResultTable& r) {
  std::string out;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (i) out += ";";
    for (std::size_t k = 0; k < r.rows[i].size(); ++k) {
      if (k) out += ",";
      out += to_string(r.rows[i][k]);
    }
  }
  return out;
}

std::string q(const std::string& sql) { return flat(run(sql, small_db())); }

sql::SchemaDef baseball() { return sql::schema_from_json(json::parse(td::kBaseballSchemaJson)); }

// One player with two batting rows (cs 2 and 3).
DatabaseInstance witness() {
  return instance_from_json(json::parse(R"({"tables":{
      "people":{"columns":["playerid","namefirst","namelast","birthyear","birthmonth","birthday"],
                "rows":[["p1","Ann","Lee",1980,1,2]]},
      "batting":{"columns":["playerid","yearid","stint","teamid","cs"],
                 "rows":[["p1",2000,1,"BOS",2],["p1",2001,1,"BOS",3]]}}})"),
                            baseball());
}

// One batting row per player, no nulls.
DatabaseInstance one_row_each() {
  return instance_from_json(json::parse(R"({"tables":{
      "people":{"columns":["playerid","namefirst","namelast","birthyear","birthmonth","birthday"],
                "rows":[["p1","Ann","Lee",1980,1,2],["p2","Bob","Ray",1981,3,4],["p3","Cid","Fox",1982,5,6],
                        ["p4","Dan","Orr",1983,7,8]]},
      "batting":{"columns":["playerid","yearid","stint","teamid","cs"],
                 "rows":[["p1",2000,1,"BOS",4],["p2",2000,1,"NYA",1],["p3",2001,1,"BOS",4]]}}})"),
                            baseball());
}

ResultTable table(std::vector<Row> rows, bool ordered, std::size_t arity = 1) {
  ResultTable r;
  r.columns.assign(arity, "c");
  r.rows = std::move(rows);
  r.ordered = ordered;
  return r;
}

}  // namespace

TEST(Execute, CountStar) {
  EXPECT_EQ(q("SELECT COUNT(*) FROM s"), "3");
  EXPECT_EQ(q("SELECT COUNT(*) FROM s WHERE 1 = 0"), "0");
}

TEST(Execute, SumOfNullsIsNull) {
  EXPECT_EQ(q("SELECT SUM(x) FROM x"), "NULL");
  EXPECT_EQ(q("SELECT COUNT(x), MIN(x), AVG(x) FROM x"), "0,NULL,NULL");
}

TEST(Execute, Figure1OnWitness) {
  const ResultTable r1 = execute(sql::parse_sql(td::kFig1Query1), witness());
  const ResultTable r2 = execute(sql::parse_sql(td::kFig1Query2), witness());
  EXPECT_EQ(flat(r1), "p1,Ann,Lee,5");
  EXPECT_EQ(flat(r2), "p1,Ann,Lee,3;p1,Ann,Lee,2");
  EXPECT_TRUE(r1.ordered);
  EXPECT_EQ(r1.columns, (std::vector<std::string>{"playerid", "firstname", "lastname", "total_caught_stealing"}));
}

TEST(Execute, ThreeValuedLogic) {
  EXPECT_EQ(q("SELECT a FROM t WHERE a = a"), "1;2;2");
  EXPECT_EQ(q("SELECT a FROM t WHERE NOT (b > 15)"), "1");
  EXPECT_EQ(q("SELECT a FROM t WHERE a NOT IN (SELECT a FROM s)"), "");
  EXPECT_EQ(q("SELECT a FROM t WHERE a IN (SELECT a FROM s)"), "2;2");
  EXPECT_EQ(q("SELECT b FROM t WHERE a NOT IN (1, 3)"), "NULL;30");
  EXPECT_EQ(q("SELECT NULL = NULL, NULL OR TRUE, NULL AND FALSE, NOT NULL"), "NULL,true,false,NULL");
  EXPECT_EQ(q("SELECT b FROM t WHERE b IS NULL OR a IS NULL"), "NULL;40");
  EXPECT_EQ(q("SELECT a FROM t WHERE b BETWEEN 10 AND 30"), "1;2");
}

TEST(Execute, Joins) {
  EXPECT_EQ(q("SELECT t.b, s.c FROM t JOIN s ON t.a = s.a"), "NULL,x;30,x");
  EXPECT_EQ(q("SELECT t.b, s.c FROM t LEFT JOIN s ON t.a = s.a"), "10,NULL;NULL,x;30,x;40,NULL");
  EXPECT_EQ(q("SELECT t.b, s.c FROM t RIGHT JOIN s ON t.a = s.a"), "NULL,x;30,x;NULL,y;NULL,z");
  EXPECT_EQ(q("SELECT t.b, s.c FROM t FULL JOIN s ON t.a = s.a"), "10,NULL;NULL,x;30,x;40,NULL;NULL,y;NULL,z");
  EXPECT_EQ(q("SELECT COUNT(*) FROM t, s"), "12");
  EXPECT_EQ(q("SELECT COUNT(*) FROM t CROSS JOIN s"), "12");
  EXPECT_EQ(q("SELECT a, b, c FROM t JOIN s USING (a)"), "2,NULL,x;2,30,x");
}

TEST(Execute, Grouping) {
  EXPECT_EQ(q("SELECT a, COUNT(*), COUNT(b), SUM(b) FROM t GROUP BY a"), "1,1,1,10;2,2,1,30;NULL,1,1,40");
  EXPECT_EQ(q("SELECT a FROM t GROUP BY a HAVING COUNT(*) > 1"), "2");
  EXPECT_EQ(q("SELECT COUNT(DISTINCT a), COUNT(a) FROM t"), "2,3");
  EXPECT_EQ(q("SELECT AVG(b) FROM t"), "26.6666666666667");
  EXPECT_EQ(q("SELECT MAX(c), MIN(c) FROM s"), "z,x");
  EXPECT_EQ(q("SELECT DISTINCT a FROM t"), "1;2;NULL");
  EXPECT_EQ(q("SELECT a, COUNT(*) FROM t WHERE a > 5 GROUP BY a"), "");
  EXPECT_EQ(q("SELECT SUM(a) * 2 FROM t"), "10");
  EXPECT_EQ(q("SELECT a, b FROM t GROUP BY a"), "1,10;2,NULL;NULL,40");
}

TEST(Execute, SortLimit) {
  EXPECT_EQ(q("SELECT b FROM t ORDER BY b"), "NULL;10;30;40");
  EXPECT_EQ(q("SELECT b FROM t ORDER BY b DESC"), "40;30;10;NULL");
  EXPECT_EQ(q("SELECT b FROM t ORDER BY b NULLS LAST"), "10;30;40;NULL");
  EXPECT_EQ(q("SELECT b FROM t ORDER BY b DESC NULLS FIRST"), "NULL;40;30;10");
  EXPECT_EQ(q("SELECT b FROM t ORDER BY a DESC, b"), "NULL;30;10;40");
  EXPECT_EQ(q("SELECT b FROM t ORDER BY b LIMIT 2 OFFSET 1"), "10;30");
  EXPECT_EQ(q("SELECT b FROM t ORDER BY 1 DESC LIMIT 1"), "40");
  EXPECT_EQ(q("SELECT a AS k FROM t ORDER BY k, b LIMIT 10 OFFSET 9"), "");
}

TEST(Execute, SetOperations) {
  EXPECT_EQ(q("SELECT a FROM t UNION SELECT a FROM s"), "1;2;NULL;3");
  EXPECT_EQ(q("SELECT a FROM t UNION ALL SELECT a FROM s"), "1;2;2;NULL;2;3;NULL");
  EXPECT_EQ(q("SELECT a FROM t INTERSECT SELECT a FROM s"), "2;NULL");
  EXPECT_EQ(q("SELECT a FROM t EXCEPT SELECT a FROM s"), "1");
  EXPECT_EQ(q("SELECT a FROM t EXCEPT ALL SELECT a FROM s"), "1;2");
  EXPECT_EQ(q("SELECT a FROM t INTERSECT ALL SELECT a FROM s"), "2;NULL");
}

TEST(Execute, SubqueriesAndCtes) {
  EXPECT_EQ(q("SELECT b FROM t WHERE EXISTS (SELECT 1 FROM s WHERE s.a = t.a)"), "NULL;30");
  EXPECT_EQ(q("SELECT (SELECT c FROM s WHERE s.a = t.a) FROM t"), "NULL;x;x;NULL");
  EXPECT_EQ(q("SELECT b FROM t WHERE b > ALL (SELECT b FROM t WHERE a = 2)"), "");
  EXPECT_EQ(q("SELECT b FROM t WHERE b >= ALL (SELECT b FROM t WHERE b IS NOT NULL)"), "40");
  EXPECT_EQ(q("SELECT b FROM t WHERE b < ANY (SELECT b FROM t)"), "10;30");
  EXPECT_EQ(q("WITH w AS (SELECT a, b FROM t WHERE b > 10) SELECT COUNT(*) FROM w"), "2");
  EXPECT_EQ(q("WITH w (k) AS (SELECT a FROM s) SELECT k FROM w WHERE k > 2"), "3");
  EXPECT_EQ(q("SELECT d.m FROM (SELECT MAX(b) AS m FROM t) AS d"), "40");
  EXPECT_EQ(q("SELECT b FROM t WHERE b = (SELECT MAX(b) FROM t)"), "40");
  EXPECT_EQ(q("SELECT a FROM t WHERE 1 < (SELECT COUNT(*) FROM t AS u WHERE u.a = t.a)"), "2;2");
}

TEST(Execute, ScalarFunctions) {
  EXPECT_EQ(q("SELECT COALESCE(NULL, 2, 3), NULLIF(1, 1), ABS(-4), 7 / 2, 7 % 3, 7.0 / 2, 1 / 0"),
            "2,NULL,4,3,1,3.5,NULL");
  EXPECT_EQ(q("SELECT 'a' || 'b' || 1, 'a' || NULL, UPPER('ab'), LENGTH('abc'), SUBSTR('hello', 2, 3)"),
            "ab1,NULL,AB,3,ell");
  EXPECT_EQ(q("SELECT c FROM s WHERE c LIKE '_'"), "x;y;z");
  EXPECT_EQ(q("SELECT 'Abc' LIKE 'a%', 'Abc' ILIKE 'a%', 'abc' NOT LIKE '%c'"), "false,true,false");
  EXPECT_EQ(q("SELECT CASE WHEN a > 1 THEN 'big' WHEN a = 1 THEN 'one' ELSE 'none' END FROM t"),
            "one;big;big;none");
  EXPECT_EQ(q("SELECT CASE a WHEN 2 THEN 'two' END FROM t"), "NULL;two;two;NULL");
  EXPECT_EQ(q("SELECT CAST(b AS TEXT) || '!', CAST('12' AS INTEGER) + 1 FROM t WHERE a = 1"), "10!,13");
  EXPECT_EQ(q("SELECT ROUND(2.567, 2), -a FROM t WHERE a = 1"), "2.57,-1");
}

TEST(Execute, Errors) {
  const auto db = small_db();
  EXPECT_THROW(run("SELECT (SELECT a FROM t) FROM s", db), RuntimeExecError);
  EXPECT_THROW(run("SELECT ROW_NUMBER() OVER (ORDER BY a) FROM t", db), UnsupportedFeature);
  EXPECT_THROW(run("SELECT a FROM t WHERE a = ANY (ARRAY[1, 2])", db), UnsupportedFeature);
  EXPECT_THROW(run("SELECT frobnicate(a) FROM t", db), UnsupportedFeature);
  EXPECT_THROW(run("SELECT a + c FROM s", db), RuntimeExecError);
  EXPECT_THROW(run("WITH RECURSIVE r (n) AS (SELECT 1 UNION ALL SELECT n + 1 FROM r WHERE n < 3) SELECT n FROM r", db),
               UnsupportedFeature);
  EXPECT_THROW(run("SELECT 9223372036854775807 + 1", db), RuntimeExecError);
}

TEST(Execute, Deterministic) {
  const auto db = small_db();
  for (const char* sql : {"SELECT a, b FROM t ORDER BY a", "SELECT a FROM t UNION SELECT a FROM s",
                          "SELECT t.b, s.c FROM t FULL JOIN s ON t.a = s.a"}) {
    EXPECT_EQ(flat(run(sql, db)), flat(run(sql, db)));
  }
}

TEST(Instance, Validation) {
  const auto schema = sql::schema_from_json(json::parse(
      R"({"tables":[{"name":"k","columns":["id","v"]}],"foreign_keys":[],"primary_keys":["k.id"]})"));
  auto load = [&](const char* text) { return instance_from_json(json::parse(text), schema); };
  EXPECT_NO_THROW(load(R"({"tables":{"k":{"columns":["id","v"],"rows":[[1,"a"],[2,"b"]]}}})"));
  EXPECT_THROW(load(R"({"tables":{"k":{"columns":["id","v"],"rows":[[1,"a"],[1,"b"]]}}})"), InvalidInput);
  EXPECT_THROW(load(R"({"tables":{"k":{"columns":["id","v"],"rows":[[null,"a"]]}}})"), InvalidInput);
  EXPECT_THROW(load(R"({"tables":{"k":{"columns":["id","v"],"rows":[[1]]}}})"), InvalidInput);
  EXPECT_THROW(load(R"({"tables":{"zz":{"columns":["id"],"rows":[]}}})"), InvalidInput);
  EXPECT_THROW(load(R"({"tables":{"k":{"columns":["id","w"],"rows":[]}}})"), InvalidInput);
  EXPECT_THROW(load(R"({"tables":{"k":{"columns":["id","v"],"rows":[[1,[2]]]}}})"), InvalidInput);
  EXPECT_THROW(load(R"({"nope":1})"), InvalidInput);

  const DatabaseInstance db = load(R"({"tables":{"k":{"columns":["v","id"],"rows":[["a",1]]}}})");
  EXPECT_EQ(to_string(db.find("K")->rows[0][0]), "1");
  const DatabaseInstance again = instance_from_json(instance_to_json(db), schema);
  EXPECT_EQ(again.find("k")->rows, db.find("k")->rows);
  EXPECT_TRUE(load(R"({"tables":{}})").find("k")->rows.empty());
}

TEST(Values, TotalOrder) {
  const std::vector<Value> ordered = {Null{}, false, true, std::int64_t{-3}, 0.5, std::int64_t{1}, 2.0, std::string("a"),
                                      std::string("b")};
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    for (std::size_t k = 0; k < ordered.size(); ++k) {
      const int c = compare_values(ordered[i], ordered[k]);
      EXPECT_EQ(c, i < k ? -1 : (i > k ? 1 : 0)) << i << " " << k;
    }
  }
  EXPECT_EQ(compare_values(std::int64_t{2}, 2.0), 0);
}

TEST(Compare, Examples) {
  const std::vector<Row> ab = {{std::int64_t{1}}, {std::int64_t{2}}};
  const std::vector<Row> ba = {{std::int64_t{2}}, {std::int64_t{1}}};
  EXPECT_TRUE(compare_results(table(ab, false), table(ba, false)).identical);
  const Comparison both = compare_results(table(ab, true), table(ba, true));
  EXPECT_FALSE(both.identical);
  EXPECT_EQ(both.reason, "row order");
  const Comparison mixed = compare_results(table(ab, true), table(ba, false));
  EXPECT_TRUE(mixed.identical);
  EXPECT_FALSE(mixed.warning.empty());
  const Comparison arity = compare_results(table({}, false, 3), table({}, false, 4));
  EXPECT_FALSE(arity.identical);
  EXPECT_EQ(arity.reason, "arity");
}

TEST(Compare, BagsNullsAndTolerance) {
  const Row n = {Null{}};
  EXPECT_TRUE(compare_results(table({n, n}, false), table({n, n}, false)).identical);
  EXPECT_FALSE(compare_results(table({n, n}, false), table({n}, false)).identical);
  EXPECT_FALSE(compare_results(table({{std::int64_t{1}}, {std::int64_t{1}}, {std::int64_t{2}}}, false),
                               table({{std::int64_t{1}}, {std::int64_t{2}}, {std::int64_t{2}}}, false))
                   .identical);
  EXPECT_TRUE(compare_results(table({{0.1 + 0.2}}, false), table({{0.3}}, false)).identical);
  EXPECT_TRUE(compare_results(table({{std::int64_t{3}}}, false), table({{3.0}}, false)).identical);
  EXPECT_FALSE(compare_results(table({{1.0}}, false), table({{1.0001}}, false)).identical);
}

TEST(Compare, SymmetricAndNameBlind) {
  std::mt19937_64 rng(5);
  auto random_table = [&] {
    ResultTable r;
    const std::size_t arity = 1 + rng() % 2;
    r.columns.assign(arity, rng() % 2 ? "x" : "y");
    r.ordered = rng() % 2;
    const std::size_t n = rng() % 4;
    for (std::size_t i = 0; i < n; ++i) {
      Row row;
      for (std::size_t k = 0; k < arity; ++k) {
        const auto pick = rng() % 4;
        row.push_back(pick == 0 ? Value(Null{}) : Value(static_cast<std::int64_t>(rng() % 3)));
      }
      r.rows.push_back(row);
    }
    return r;
  };
  for (int i = 0; i < 3000; ++i) {
    const ResultTable a = random_table();
    const ResultTable b = random_table();
    const Comparison ab = compare_results(a, b);
    const Comparison ba = compare_results(b, a);
    EXPECT_EQ(ab.identical, ba.identical);
    EXPECT_EQ(ab.reason, ba.reason);
    ResultTable renamed = a;
    for (auto& c : renamed.columns) c += "_renamed";
    EXPECT_TRUE(compare_results(a, renamed).identical);
  }
}

TEST(OracleCheck, Figure1) {
  QueryPair p;
  p.id = "fig1";
  p.sql1 = td::kFig1Query1;
  p.sql2 = td::kFig1Query2;
  const OracleOutcome refuted = oracle_check(p, baseball(), {witness()});
  EXPECT_EQ(refuted.kind, OracleOutcome::Kind::Refuted);
  EXPECT_EQ(refuted.witness, 0u);
  const OracleOutcome consistent = oracle_check(p, baseball(), {one_row_each()});
  EXPECT_EQ(consistent.kind, OracleOutcome::Kind::Consistent) << outcome_to_json(consistent).dump();
  const OracleOutcome second = oracle_check(p, baseball(), {one_row_each(), witness()});
  EXPECT_EQ(second.witness, 1u);
}

TEST(OracleCheck, IdenticalTextsConsistent) {
  QueryPair p;
  p.sql1 = p.sql2 = "SELECT a, b FROM t ORDER BY b";
  EXPECT_EQ(oracle_check(p, small_schema(), {small_db()}).kind, OracleOutcome::Kind::Consistent);
}

TEST(OracleCheck, RecursiveIsInconclusive) {
  QueryPair p;
  p.sql1 = td::kQ5GroundTruth;
  p.sql2 = td::kQ5GroundTruth;
  const OracleOutcome o = oracle_check(p, baseball(), {witness()});
  EXPECT_EQ(o.kind, OracleOutcome::Kind::Inconclusive);
  ASSERT_FALSE(o.issues.empty());
  EXPECT_EQ(o.issues[0].kind, "UnsupportedFeature");
  EXPECT_EQ(outcome_to_json(o)["outcome"], "Inconclusive");
}

TEST(OracleCheck, ParseErrorsAndEmptyInstances) {
  QueryPair p;
  p.sql1 = "SELECT FROM";
  p.sql2 = "SELECT a FROM t";
  const OracleOutcome o = oracle_check(p, small_schema(), {small_db()});
  EXPECT_EQ(o.kind, OracleOutcome::Kind::Inconclusive);
  EXPECT_EQ(o.issues[0].kind, "SyntaxError");
  EXPECT_THROW(oracle_check(p, small_schema(), {}), InvalidInput);
}
