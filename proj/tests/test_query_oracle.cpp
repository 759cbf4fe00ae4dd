// SPDX-License-Identifier: Apache-2.0
//
// Randomized cross-check of the query engine against an independent
// brute-force evaluator over small random scene graphs. The full 500-graph
// run lives in the acceptance binary; this keeps a fast regression slice in
// the unit suite.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "query_oracle.hpp"

using namespace sgg;
using namespace sgg::test;

namespace {

bool rows_match(std::vector<std::vector<std::string>> a,
                std::vector<std::vector<std::string>> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

TEST_CASE("engine agrees with the brute-force oracle on random graphs") {
  std::mt19937 rng(7041);
  for (int g = 0; g < 120; ++g) {
    PropertyGraph graph = random_scene(rng);
    for (int i = 0; i < 10; ++i) {
      const OracleQuery q = random_query(rng);
      const std::string text = oracle_query_text(q);
      std::string error;
      auto engine = engine_rows(graph, q, &error);
      auto oracle = oracle_rows(graph, q);
      CAPTURE(g, i, text, error);
      REQUIRE(error.empty());
      if (!rows_match(engine, oracle)) {
        CAPTURE(engine.size(), oracle.size());
        FAIL("row sets differ");
      }
      SUCCEED();
    }
  }
}

TEST_CASE("oracle sanity on the reference fixture") {
  // Pin the oracle itself against hand-checked answers so a bug cannot hide
  // in both evaluators at once.
  PropertyGraph graph;
  auto add = [&](const std::string& id, Layer layer, const char* cls) {
    GraphNode n;
    n.symbol = *NodeSymbol::parse(id);
    n.layer = layer;
    if (cls) n.semantic_class = cls;
    graph.add_node(std::move(n));
  };
  add("R0", Layer::Room, "road");
  add("p0", Layer::Place, nullptr);
  add("p1", Layer::Place, nullptr);
  add("O0", Layer::Object, "tree");
  add("O1", Layer::Object, "rock");
  graph.add_edge(*NodeSymbol::parse("R0"), *NodeSymbol::parse("p0"), EdgeType::Contains);
  graph.add_edge(*NodeSymbol::parse("R0"), *NodeSymbol::parse("p1"), EdgeType::Contains);
  graph.add_edge(*NodeSymbol::parse("p0"), *NodeSymbol::parse("O0"), EdgeType::Contains);
  graph.add_edge(*NodeSymbol::parse("p1"), *NodeSymbol::parse("O1"), EdgeType::Contains);
  graph.add_edge(*NodeSymbol::parse("p0"), *NodeSymbol::parse("p1"), EdgeType::PlaceConnected);

  SECTION("transitive containment from the room") {
    OracleQuery q;
    q.nodes = {{"a", "Room", std::nullopt}, {"b", "Object", std::nullopt}};
    OracleRel rel;
    rel.var_len = true;
    rel.min_hops = 1;
    rel.max_hops = -1;
    q.rels = {rel};
    auto rows = oracle_rows(graph, q);
    REQUIRE(rows.size() == 2);
    CHECK(rows_match(rows, {{"R0", "O0"}, {"R0", "O1"}}));
    CHECK(rows_match(engine_rows(graph, q), rows));
  }
  SECTION("undirected connectivity matches either arrow") {
    OracleQuery q;
    q.nodes = {{"a", "Place", std::nullopt}, {"b", "Place", std::nullopt}};
    OracleRel rel;
    rel.type = EdgeType::PlaceConnected;
    rel.direction = 0;  // arrow is ignored for connectivity
    q.rels = {rel};
    auto rows = oracle_rows(graph, q);
    CHECK(rows_match(rows, {{"p0", "p1"}, {"p1", "p0"}}));
    CHECK(rows_match(engine_rows(graph, q), rows));
  }
  SECTION("class constraint filters") {
    OracleQuery q;
    q.nodes = {{"a", "Object", "tree"}};
    q.count_star = true;
    CHECK(oracle_rows(graph, q) == std::vector<std::vector<std::string>>{{"1"}});
    CHECK(engine_rows(graph, q) == oracle_rows(graph, q));
  }
}
