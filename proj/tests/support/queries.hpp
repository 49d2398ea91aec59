#pragma once

#include <string>
#include <vector>

// Query texts shared by unit and acceptance tests.

namespace sqleq::testdata {

inline constexpr const char* kFig1Query1 =
    "WITH result AS (SELECT playerid, SUM (COALESCE (cs ,0)) AS total_caught_stealing FROM batting "
    "GROUP BY batting.playerid ORDER BY total_caught_stealing DESC) SELECT result.playerid, "
    "COALESCE (people.namefirst, '') AS firstname, COALESCE (people.namelast, '') AS lastname, "
    "result.total_caught_stealing FROM result JOIN people ON result.playerid = people.playerid "
    "ORDER BY total_caught_stealing DESC, namefirst ASC, namelast ASC, playerid ASC LIMIT 10;";

inline constexpr const char* kFig1Query2 =
    "SELECT people.playerid, namefirst AS firstname, namelast AS lastname, cs AS "
    "total_caught_stealing FROM people JOIN batting ON people.playerid = batting.playerid ORDER BY "
    "COALESCE(cs, 0) DESC, COALESCE(namefirst, '') ASC, COALESCE(namelast, '') ASC, "
    "people.playerid ASC LIMIT 10;";

inline constexpr const char* kQ5GroundTruth =
    "with recursive sub as (select array[p1::text, p2::text] as path, p2, w as dist from graph1 "
    "where p1='webbbr01' union all select recur.path || graph1.p2::text, graph1.p2, (dist + w) as "
    "dist from sub as recur, graph1 where graph1.p1 = recur.p2 and not graph1.p2 = any "
    "(recur.path) and not recur.p2 = 'clemero02') select case when count(*) > 0 then True else "
    "False end as pathexists from sub where dist >= 3 and p2 = 'clemero02'";

inline constexpr const char* kQ2GroundTruth =
    "with result as (select sum(2*coalesce(h2b,0) + 3*coalesce(h3b,0) + 4*coalesce(hr,0)) as ru"
    "nscore, playerid from batting GROUP BY playerid ORDER BY runscore desc) select result.play"
    "erid, coalesce(people.namefirst,'') as firstname, result.runscore from result join people "
    "on result.playerid = people.playerid order by result.runscore desc, firstname desc, player"
    "id asc limit 10;";

inline constexpr const char* kQ3GroundTruth =
    "with result as (select playerid, sum(coalesce(pointsWon,0)) as total_points from awardssha"
    "replayers where yearid>=2000 group by playerid), player_name_table as (select playerid, na"
    "mefirst, namelast, coalesce(namefirst, '') || CASE WHEN (namefirst || namelast) is not NUL"
    "L THEN ' ' ELSE '' END || coalesce(namelast, '') as playername from people) select result."
    "playerid, PN.playername, result.total_points from result join player_name_table PN on resu"
    "lt.playerid = PN.playerid order by total_points desc, playerid asc;";

inline constexpr const char* kQ4GroundTruth =
    "with all_tables as (select playerid, yearid from batting group by playerid, yearid union s"
    "elect playerid, yearid from fielding group by playerid, yearid union select playerid, year"
    "id from pitching group by playerid, yearid), result as (select playerid, count(distinct(ye"
    "arid)) as num_seasons from all_tables group by playerid) select r.playerid, coalesce(p.nam"
    "efirst,'') as firstname, coalesce(p.namelast,'') as lastname, coalesce(birthyear || '-' ||"
    " lpad(birthmonth::text,2,'0') || '-' || lpad(birthday::text,2,'0'),'') as date_of_birth, r"
    ".num_seasons from result r join people p on r.playerid = p.playerid order by r.num_seasons"
    " desc, r.playerid asc;";

inline constexpr const char* kGraph1View =
    "select p1, p2, count(*) as w from (select table1.playerid as p1, table2.playerid as p2, ta"
    "ble1.teamid, table1.yearid from (select * from allstarfull where GP = 1) as table1, (selec"
    "t * from allstarfull where GP = 1) as table2 where table1.teamid = table2.teamid and table"
    "1.yearid = table2.yearid and not table1.playerid = table2.playerid union select table1.pla"
    "yerid as p1, table2.playerid as p2, table1.teamid, table1.yearid from pitching as table1, "
    "pitching as table2 where table1.teamid = table2.teamid and table1.yearid = table2.yearid a"
    "nd not table1.playerid = table2.playerid union select table1.playerid as p1, table2.player"
    "id as p2, table1.teamid, table1.yearid from pitching as table1, (select * from allstarfull"
    " where GP = 1) as table2 where table1.teamid = table2.teamid and table1.yearid = table2.ye"
    "arid and not table1.playerid = table2.playerid union select table1.playerid as p1, table2."
    "playerid as p2, table1.teamid, table1.yearid from (select * from allstarfull where GP = 1)"
    " as table1, pitching as table2 where table1.teamid = table2.teamid and table1.yearid = tab"
    "le2.yearid and not table1.playerid = table2.playerid) as temp group by p1, p2;";

// Schema used by the baseball queries, as JSON text.
inline constexpr const char* kBaseballSchemaJson = R"({
  "tables": [
    {"name": "people", "columns": ["playerid", "namefirst", "namelast", "birthyear", "birthmonth", "birthday"]},
    {"name": "batting", "columns": ["playerid", "yearid", "stint", "teamid", "cs"]},
    {"name": "graph1", "columns": ["p1", "p2", "w"]}
  ],
  "foreign_keys": [["batting.playerid", "people.playerid"]],
  "primary_keys": ["people.playerid", "batting.playerid", "batting.yearid", "batting.stint"]
})";

// Wider schema covering every table used by the query corpus.
inline constexpr const char* kCorpusSchemaJson = R"({
  "tables": [
    {"name": "t", "columns": ["a", "b", "c"]},
    {"name": "s", "columns": ["a", "b"]},
    {"name": "r", "columns": ["a", "b"]},
    {"name": "My Table", "columns": ["Weird Col", "a"]},
    {"name": "people", "columns": ["playerid", "namefirst", "namelast", "birthyear", "birthmonth", "birthday"]},
    {"name": "batting", "columns": ["playerid", "yearid", "stint", "teamid", "cs", "h2b", "h3b", "hr"]},
    {"name": "fielding", "columns": ["playerid", "yearid"]},
    {"name": "pitching", "columns": ["playerid", "yearid", "teamid"]},
    {"name": "allstarfull", "columns": ["playerid", "yearid", "teamid", "gp"]},
    {"name": "awardsshareplayers", "columns": ["playerid", "yearid", "pointswon"]},
    {"name": "graph1", "columns": ["p1", "p2", "w"]}
  ],
  "foreign_keys": [["batting.playerid", "people.playerid"]],
  "primary_keys": ["people.playerid"]
})";

// Queries exercising every construct of the dialect; all plan against
// kCorpusSchemaJson.
inline const std::vector<std::string>& corpus() {
  static const std::vector<std::string> queries = {
      "SELECT 1",
      "SELECT a FROM t",
      "SELECT a FROM t WHERE a > 1",
      "SELECT a FROM t UNION SELECT a FROM s",
      "SELECT a, b FROM t WHERE a IN (1, 2, 3) AND b NOT LIKE 'x%' OR b IS NULL",
      "SELECT DISTINCT u.a AS x FROM t AS u LEFT JOIN s ON u.a = s.a ORDER BY x DESC LIMIT 5 OFFSET 2",
      "SELECT count(*), sum(DISTINCT b) FROM t GROUP BY a HAVING count(*) > 1",
      "SELECT a FROM t WHERE EXISTS (SELECT 1 FROM s WHERE s.a = t.a)",
      "SELECT a FROM t WHERE a NOT IN (SELECT a FROM s) AND b BETWEEN 1 AND 2",
      "SELECT (SELECT max(a) FROM s) - 1 AS m, -a * (b + 2) FROM t",
      "SELECT CASE a WHEN 1 THEN 'one' ELSE 'many' END FROM t",
      "SELECT CAST(a AS text), a::integer FROM t",
      "SELECT a FROM t INTERSECT SELECT a FROM s EXCEPT SELECT a FROM r",
      "SELECT d.a, b FROM (SELECT a FROM t) AS d CROSS JOIN s FULL OUTER JOIN r USING (b)",
      "(SELECT a FROM t ORDER BY a LIMIT 1) UNION ALL SELECT b FROM s",
      "SELECT \"Weird Col\", 'it''s' FROM \"My Table\"",
      "SELECT a FROM t WHERE a > ALL (SELECT b FROM s) AND NOT (a = 3)",
      "SELECT a || b || 'c', a % 2, a / 2 FROM t ORDER BY 1 NULLS LAST",
      "SELECT row_number() OVER (PARTITION BY a ORDER BY b) FROM t",
      kFig1Query1,
      kFig1Query2,
      kQ2GroundTruth,
      kQ3GroundTruth,
      kQ4GroundTruth,
      kQ5GroundTruth,
      kGraph1View,
  };
  return queries;
}

}  // namespace sqleq::testdata
