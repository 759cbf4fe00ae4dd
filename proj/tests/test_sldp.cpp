// SPDX-License-Identifier: Apache-2.0
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "sgg/sldp.hpp"

using namespace sgg::sldp;

namespace {

SldpValue random_value(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 2);
  switch (pick(rng)) {
    case 0: {
      std::uniform_real_distribution<double> num(-100, 100);
      return SldpValue::make_number(num(rng));
    }
    case 1: {
      std::uniform_int_distribution<int> id(0, 500);
      return SldpValue::make_string("O" + std::to_string(id(rng)));
    }
    case 2: {
      std::uniform_real_distribution<double> num(-50, 50);
      return SldpValue::make_point(num(rng), num(rng), num(rng));
    }
    case 3:
    case 4: {
      std::uniform_int_distribution<int> size(0, 4);
      std::vector<SldpValue> items;
      for (int i = size(rng); i > 0; --i) items.push_back(random_value(rng, depth - 1));
      return pick(rng) % 2 ? SldpValue::make_list(std::move(items))
                           : SldpValue::make_set(std::move(items));
    }
    default: {
      std::uniform_int_distribution<int> size(0, 4);
      std::vector<std::pair<std::string, SldpValue>> entries;
      const int n = size(rng);
      for (int i = 0; i < n; ++i)
        entries.emplace_back("k" + std::to_string(i), random_value(rng, depth - 1));
      return SldpValue::make_dict(std::move(entries));
    }
  }
}

}  // namespace

TEST_CASE("parse_sldp handles every kind from the grammar") {
  SldpValue set = parse_sldp("<O95, O99, O102, O381>");
  REQUIRE(set.kind == SldpValue::Kind::Set);
  REQUIRE(set.items.size() == 4);
  CHECK(set.items[0].string == "O95");

  SldpValue dict = parse_sldp("{seating: 22, sign: 8}");
  REQUIRE(dict.kind == SldpValue::Kind::Dict);
  REQUIRE(dict.entries.size() == 2);
  CHECK(dict.entries[0].first == "seating");
  CHECK(dict.entries[0].second.number == 22);

  SldpValue point = parse_sldp("POINT(-18.70 -4.21 0.12)");
  REQUIRE(point.kind == SldpValue::Kind::Point);
  CHECK(point.point.x == Catch::Approx(-18.70));
  CHECK(point.point.y == Catch::Approx(-4.21));
  CHECK(point.point.z == Catch::Approx(0.12));

  CHECK(parse_sldp("Point(0 0 0)").kind == SldpValue::Kind::Point);  // case-insensitive
  CHECK(parse_sldp("-5").number == -5);  // signed integer
  CHECK(parse_sldp("[1, 2]").kind == SldpValue::Kind::List);
  CHECK(parse_sldp("<>").items.empty());
  CHECK(parse_sldp("{}").entries.empty());
  CHECK(parse_sldp("  60.004  ").number == Catch::Approx(60.004));
  CHECK(parse_sldp("[<1>, {a: POINT(1 2 3)}]").kind == SldpValue::Kind::List);  // nesting
}

TEST_CASE("parse_sldp reports syntax and semantic errors") {
  CHECK_THROWS_AS(parse_sldp("<1, 2"), SldpParseError);
  CHECK_THROWS_AS(parse_sldp("1 2"), SldpParseError);          // trailing input
  CHECK_THROWS_AS(parse_sldp("{a: 1, a: 2}"), SldpParseError); // duplicate key
  CHECK_THROWS_AS(parse_sldp("{1: a}"), SldpParseError);       // numeric key
  CHECK_THROWS_AS(parse_sldp("POINT(1 2)"), SldpParseError);   // arity
  CHECK_THROWS_AS(parse_sldp(""), SldpParseError);
}

TEST_CASE("number tolerance boundary is inclusive at 0.01") {
  auto eq = [](double a, double b) {
    return sldp_equal(SldpValue::make_number(a), SldpValue::make_number(b));
  };
  CHECK(eq(1.0, 1.009));
  CHECK(eq(1.0, 1.010));
  CHECK_FALSE(eq(1.0, 1.011));
  CHECK(eq(60.004, 60.00));
}

TEST_CASE("point tolerance uses the l-infinity norm with delta 0.01") {
  auto point = [](double x, double y, double z) { return SldpValue::make_point(x, y, z); };
  CHECK(sldp_equal(point(0, 0, 0), point(0, 0, 0.010)));
  CHECK_FALSE(sldp_equal(point(0, 0, 0), point(0, 0, 0.011)));
  // l-inf, not l2: (0.008, 0.008, 0.008) has l2 > 0.01 but l-inf <= 0.01.
  CHECK(sldp_equal(point(0, 0, 0), point(0.008, 0.008, 0.008)));
}

TEST_CASE("tolerance equality is deliberately non-transitive") {
  SldpValue a = SldpValue::make_number(0.0);
  SldpValue b = SldpValue::make_number(0.01);
  SldpValue c = SldpValue::make_number(0.02);
  CHECK(sldp_equal(a, b));
  CHECK(sldp_equal(b, c));
  CHECK_FALSE(sldp_equal(a, c));
}

TEST_CASE("container semantics") {
  CHECK(sldp_equal(parse_sldp("<1,2,3>"), parse_sldp("<3,1,2>")));
  CHECK_FALSE(sldp_equal(parse_sldp("[1,2]"), parse_sldp("[2,1]")));
  CHECK_FALSE(sldp_equal(parse_sldp("[1,2]"), parse_sldp("[1,2,3]")));
  CHECK(sldp_equal(parse_sldp("{a: 1, b: 2}"), parse_sldp("{b: 2, a: 1}")));
  CHECK_FALSE(sldp_equal(parse_sldp("{a: 1}"), parse_sldp("{b: 1}")));  // keys exact
  CHECK_FALSE(sldp_equal(parse_sldp("{a: 1}"), parse_sldp("{a: 2}")));
  // Mixed kinds never compare equal.
  CHECK_FALSE(sldp_equal(parse_sldp("[1]"), parse_sldp("<1>")));
  CHECK_FALSE(sldp_equal(parse_sldp("1"), parse_sldp("one")));
}

TEST_CASE("set equality is double inclusion, checked against brute force") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> size(0, 8);
  std::uniform_int_distribution<int> value(0, 6);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<SldpValue> a, b;
    for (int i = size(rng); i > 0; --i)
      a.push_back(SldpValue::make_number(value(rng) * 0.015));
    for (int i = size(rng); i > 0; --i)
      b.push_back(SldpValue::make_number(value(rng) * 0.015));
    SldpValue sa = SldpValue::make_set(a), sb = SldpValue::make_set(b);

    auto included = [](const std::vector<SldpValue>& xs, const std::vector<SldpValue>& ys) {
      for (const auto& x : xs) {
        bool ok = false;
        for (const auto& y : ys) ok = ok || sldp_equal(x, y);
        if (!ok) return false;
      }
      return true;
    };
    CHECK(sldp_equal(sa, sb) == (included(a, b) && included(b, a)));
  }
}

TEST_CASE("round trip and reflexivity over random nested values") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    SldpValue v = random_value(rng, 3);
    CHECK(sldp_equal(v, v));
    SldpValue reparsed = parse_sldp(render_sldp(v));
    CHECK(sldp_equal(reparsed, v));
    CHECK(sldp_equal(v, reparsed));  // symmetry
  }
}

TEST_CASE("render_sldp canonical forms") {
  CHECK(render_sldp(parse_sldp("<3, 1, 2>")) == "<1, 2, 3>");
  CHECK(render_sldp(parse_sldp("POINT(1.0 2.0 3.0)")) == "POINT(1 2 3)");
  CHECK(render_sldp(parse_sldp("{}")) == "{}");
  CHECK(render_sldp(parse_sldp("{b: 2, a: 1}")) == "{a: 1, b: 2}");
}
