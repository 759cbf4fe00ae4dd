// SPDX-License-Identifier: Apache-2.0
//
// Query language parser: grammar coverage, error reporting with positions,
// semantic validation (scoping, aggregate placement), and the print/reparse
// round-trip property.

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "sgg/query/parser.hpp"

using namespace sgg;
using namespace sgg::query;
using Catch::Matchers::ContainsSubstring;

namespace {

QueryAst must_parse(const std::string& text) {
  auto result = parse_query(text);
  if (!result.ok()) {
    CAPTURE(text);
    FAIL("parse failed: " << result.error().to_string());
  }
  return result.value();
}

QueryError must_fail(const std::string& text) {
  auto result = parse_query(text);
  if (result.ok()) {
    CAPTURE(text);
    FAIL("expected a parse failure, got: " << print_query(result.value()));
  }
  return result.error();
}

}  // namespace

TEST_CASE("parser accepts the supported clause shapes") {
  const std::vector<std::string> accepted = {
      "MATCH (o:Object) RETURN o",
      "MATCH (o:Object {class: 'tree'}) RETURN o.nodeSymbol",
      "MATCH (p:Place)-[:CONTAINS]->(o:Object) RETURN p, o",
      "MATCH (a)<-[:CONTAINS]-(b) RETURN a",
      "MATCH (a)-[:PLACE_CONNECTED]-(b) RETURN a, b",
      "MATCH (r:Room)-[:CONTAINS*]->(o:Object) RETURN o",
      "MATCH (r:Room)-[:CONTAINS*1..2]->(x) RETURN x",
      "MATCH (r:Room)-[:CONTAINS*2]->(x) RETURN x",
      "MATCH (a), (b) WHERE a.class = b.class RETURN a",
      "MATCH (o:Object) WHERE o.class = 'tree' AND NOT o.class = 'rock' RETURN o",
      "MATCH (o) WHERE o.center.x > 1.5 OR o.class <> 'pole' RETURN o",
      "MATCH (o:Object) RETURN DISTINCT o.class ORDER BY o.class DESC SKIP 2 LIMIT 5",
      "MATCH (o:Object) RETURN count(*) AS n",
      "MATCH (o:Object) RETURN o.class, count(*)",
      "MATCH (o:Object) RETURN count(DISTINCT o.class)",
      "MATCH (o:Object) WHERE o.class IN ['tree', 'rock'] RETURN o",
      "MATCH (o:Object) WHERE o.class CONTAINS 'ee' RETURN o",
      "MATCH (o:Object) WITH o.class AS c, count(*) AS n WHERE n > 1 RETURN c, n",
      "MATCH (a:Object), (b:Object) RETURN point.distance(a.center, b.center)",
      "MATCH (o:Object) RETURN tolower(o.class), abs(o.center.z - 1)",
      "MATCH (o:Object {class: 'tree'}) SET o.class = 'rock'",
      "MATCH (o:Object) SET o.flag = true, o.note = null RETURN o",
      "RETURN 1 + 2 * 3, 'text', [1, 2.5, 'a'], -4",
  };
  for (const auto& text : accepted) {
    CAPTURE(text);
    CHECK(parse_query(text).ok());
  }
}

TEST_CASE("keywords are case-insensitive") {
  auto a = must_parse("match (o:Object) where o.class = 'tree' return o order by o.class");
  auto b = must_parse("MATCH (o:Object) WHERE o.class = 'tree' RETURN o ORDER BY o.class");
  CHECK(ast_equal(a, b));
}

TEST_CASE("print_query then reparse yields an identical AST") {
  const std::vector<std::string> samples = {
      "MATCH (o:Object) RETURN count(*)",
      "MATCH (r:Room {class: 'parking_lot'})-[:CONTAINS*]->(o:Object) RETURN o.nodeSymbol",
      "MATCH (a)-[:CONTAINS*1..3]->(b) WHERE b.class = 'tree' RETURN DISTINCT b ORDER BY b.nodeSymbol DESC SKIP 1 LIMIT 4",
      "MATCH (o:Object) WITH o.class AS c, count(*) AS n WHERE n >= 2 RETURN c, n ORDER BY n",
      "MATCH (a:Object), (b:Object) WHERE NOT a = b RETURN point.distance(a.center, b.center) AS d",
      "MATCH (o:Object) SET o.center = o.center, o.class = tolower(o.class)",
      "RETURN [1, -2.5, 'x'], 8 / 4, 'abc' CONTAINS 'b', 1 IN [1, 2]",
  };
  for (const auto& text : samples) {
    CAPTURE(text);
    auto first = must_parse(text);
    const std::string printed = print_query(first);
    CAPTURE(printed);
    auto second = must_parse(printed);
    CHECK(ast_equal(first, second));
    // Printing is a fixpoint after one round.
    CHECK(print_query(second) == printed);
  }
}

TEST_CASE("unsupported features are reported as such, not as syntax noise") {
  struct Case {
    std::string text;
    std::string needle;
  };
  const std::vector<Case> cases = {
      {"MATCH (o) RETURN apoc.convert.toJson(o)", "apoc.convert.toJson"},
      {"CREATE (o:Object) RETURN o", "CREATE clause"},
      {"MERGE (o:Object) RETURN o", "MERGE clause"},
      {"MATCH (a) DELETE a", "DELETE clause"},
      {"MATCH (a)-[r:CONTAINS]->(b) RETURN r", "relationship variable 'r'"},
      {"MATCH (o) WHERE o.class STARTS WITH 'tr' RETURN o", "STARTS"},
      {"MATCH (o) RETURN size(o.class)", "function 'size'"},
      {"MATCH (o) RETURN point({x: 1, y: 2, z: 3})", "function 'point'"},
      {"MATCH (o) RETURN collect(DISTINCT o.class)", "DISTINCT inside collect()"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    auto err = must_fail(c.text);
    CHECK(err.kind == ErrorKind::UnsupportedFeature);
    CHECK_THAT(err.message, ContainsSubstring(c.needle));
  }
}

TEST_CASE("syntax errors carry one-based line and column positions") {
  SECTION("unclosed node pattern") {
    auto err = must_fail("MATCH (o:Object RETURN o");
    CHECK(err.kind == ErrorKind::Parse);
    CHECK(err.line == 1);
    CHECK(err.column == 17);
    CHECK_THAT(err.to_string(), ContainsSubstring("line 1, column 17"));
  }
  SECTION("error position tracks newlines") {
    auto err = must_fail("MATCH (o:Object)\nRETURN o.class,\n");
    CHECK(err.kind == ErrorKind::Parse);
    CHECK(err.line == 3);
    CHECK(err.column == 1);
  }
  SECTION("empty query") {
    auto err = must_fail("");
    CHECK(err.kind == ErrorKind::Parse);
  }
  SECTION("garbage after a complete query") {
    auto err = must_fail("MATCH (o) RETURN o extra");
    CHECK(err.kind == ErrorKind::Parse);
    CHECK_THAT(err.message, ContainsSubstring("end of query"));
  }
  SECTION("unterminated string literal") {
    auto err = must_fail("MATCH (o {class: 'tree}) RETURN o");
    CHECK(err.kind == ErrorKind::Parse);
  }
}

TEST_CASE("scoping validation") {
  SECTION("unknown variable in RETURN") {
    auto err = must_fail("MATCH (o:Object) RETURN x");
    CHECK(err.kind == ErrorKind::UnknownIdentifier);
    CHECK_THAT(err.message, ContainsSubstring("variable 'x'"));
  }
  SECTION("unknown variable in WHERE") {
    auto err = must_fail("MATCH (o:Object) WHERE q.class = 'tree' RETURN o");
    CHECK(err.kind == ErrorKind::UnknownIdentifier);
  }
  SECTION("WITH rebinds the scope") {
    auto err = must_fail("MATCH (o:Object) WITH o.class AS c RETURN o");
    CHECK(err.kind == ErrorKind::UnknownIdentifier);
    CHECK_THAT(err.message, ContainsSubstring("'o'"));
    CHECK(parse_query("MATCH (o:Object) WITH o.class AS c RETURN c").ok());
  }
  SECTION("SET target must be bound") {
    auto err = must_fail("MATCH (o:Object) SET q.class = 'x'");
    CHECK(err.kind == ErrorKind::UnknownIdentifier);
  }
  SECTION("later MATCH sees earlier bindings") {
    CHECK(parse_query("MATCH (a:Room) MATCH (a)-[:CONTAINS]->(b) RETURN b").ok());
  }
}

TEST_CASE("aggregate placement validation") {
  SECTION("aggregates may not appear in WHERE") {
    auto err = must_fail("MATCH (o) WHERE count(*) > 1 RETURN o");
    CHECK_THAT(err.message, ContainsSubstring("aggregate"));
  }
  SECTION("aggregates may not appear in SET") {
    auto err = must_fail("MATCH (o) SET o.n = count(*)");
    CHECK_THAT(err.message, ContainsSubstring("aggregate"));
  }
  SECTION("nested aggregates are rejected") {
    auto err = must_fail("MATCH (o) RETURN sum(count(*))");
    CHECK_THAT(err.message, ContainsSubstring("aggregate"));
  }
  SECTION("ORDER BY may reuse an aggregated projection item verbatim") {
    CHECK(parse_query("MATCH (o) RETURN o.class, count(*) ORDER BY count(*) DESC").ok());
    CHECK(parse_query("MATCH (o) RETURN o.class AS c, count(*) AS n ORDER BY n").ok());
  }
  SECTION("ORDER BY under DISTINCT sees only the projection") {
    CHECK(parse_query("MATCH (o) RETURN DISTINCT o.class ORDER BY o.class").ok());
    auto err = must_fail("MATCH (o) RETURN DISTINCT o.class ORDER BY o.nodeSymbol");
    CHECK(err.kind == ErrorKind::UnknownIdentifier);
  }
}

TEST_CASE("variable-length bounds and directions parse correctly") {
  auto ast = must_parse("MATCH (r:Room)-[:CONTAINS*1..3]->(o) RETURN o");
  const auto* match = std::get_if<MatchClause>(&ast.clauses.at(0));
  REQUIRE(match != nullptr);
  const auto& rel = match->patterns.at(0).rels.at(0);
  REQUIRE(rel.variable_length);
  CHECK(rel.min_hops == 1);
  CHECK(rel.max_hops == 3);
  CHECK(rel.direction == RelDirection::Out);

  auto unbounded = must_parse("MATCH (r)-[:CONTAINS*]->(o) RETURN o");
  const auto& rel2 = std::get<MatchClause>(unbounded.clauses.at(0)).patterns.at(0).rels.at(0);
  REQUIRE(rel2.variable_length);
  CHECK(rel2.min_hops == 1);
  CHECK(rel2.max_hops == -1);

  CHECK(must_fail("MATCH (a)-[:CONTAINS*3..1]->(b) RETURN b").kind == ErrorKind::Parse);
}

TEST_CASE("randomized print/reparse round-trip") {
  std::mt19937 rng(20260826);
  auto pick = [&](const std::vector<std::string>& xs) {
    return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
  };
  const std::vector<std::string> labels = {":Object", ":Place", ":Room", ":MeshPlace", ""};
  const std::vector<std::string> rels = {":CONTAINS", ":OBJECT_CONNECTED", ":ROOM_CONNECTED"};
  const std::vector<std::string> props = {"class", "nodeSymbol"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text = "MATCH (a" + pick(labels) + ")";
    const int shape = std::uniform_int_distribution<int>(0, 2)(rng);
    if (shape == 1) text += "-[" + pick(rels) + "]->(b" + pick(labels) + ")";
    if (shape == 2) text += "-[" + pick(rels) + "*1..2]->(b" + pick(labels) + ")";
    if (std::bernoulli_distribution(0.5)(rng))
      text += " WHERE a." + pick(props) + " <> 'x'";
    text += std::bernoulli_distribution(0.5)(rng) ? " RETURN a" : " RETURN a." + pick(props);
    if (std::bernoulli_distribution(0.3)(rng)) text += " ORDER BY a." + pick(props) + " DESC";
    if (std::bernoulli_distribution(0.3)(rng)) text += " LIMIT 3";
    CAPTURE(text);
    auto first = must_parse(text);
    auto second = must_parse(print_query(first));
    CHECK(ast_equal(first, second));
  }
}
