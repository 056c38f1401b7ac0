#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "dendra/core.hpp"

using namespace dendra;

TEST_CASE("rank_less orders by weight then by key") {
  Edge a(0, 1, Weight(1));
  Edge b(2, 3, Weight(2));
  CHECK(rank_less(a, b));
  CHECK_FALSE(rank_less(b, a));

  Edge c(0, 1, Weight(1));
  Edge d(0, 2, Weight(1));
  CHECK(rank_less(c, d));  // tie broken by key: hi 1 < hi 2
  CHECK_FALSE(rank_less(d, c));

  CHECK_FALSE(rank_less(a, a));  // irreflexive
}

TEST_CASE("rank_less is a strict total order on a small edge set") {
  std::vector<Edge> edges;
  for (VertexId u = 0; u < 4; ++u) {
    for (VertexId v = u + 1; v < 4; ++v) {
      edges.push_back(Edge(u, v, Weight(1)));
      edges.push_back(Edge(u, v, Weight(2)));
    }
  }
  for (const Edge& a : edges) {
    for (const Edge& b : edges) {
      // Antisymmetry + totality.
      bool ab = rank_less(a, b), ba = rank_less(b, a);
      CHECK_FALSE((ab && ba));
      if (!(a == b)) CHECK((ab || ba));
      for (const Edge& c : edges) {
        if (ab && rank_less(b, c)) CHECK(rank_less(a, c));
      }
    }
  }
}

TEST_CASE("weight rejects non-finite values and round-trips") {
  CHECK_THROWS_AS(Weight(std::numeric_limits<double>::infinity()), Error);
  CHECK_THROWS_AS(Weight(std::numeric_limits<double>::quiet_NaN()), Error);
  for (double v : {0.0, -1.5, 3.0, 1e-30, 123456.789, -0.0, 0.1}) {
    Weight w(v);
    Weight back = Weight::parse(w.str());
    CHECK(back.value == w.value);
  }
  CHECK_THROWS_AS(Weight::parse("nope"), Error);
  CHECK_THROWS_AS(Weight::parse("1.0x"), Error);
}

TEST_CASE("edge key canonicalizes and rejects loops") {
  EdgeKey k(5, 2);
  CHECK(k.lo == 2);
  CHECK(k.hi == 5);
  CHECK(k.str() == "2-5");
  CHECK_THROWS_AS(EdgeKey(3, 3), Error);
}

TEST_CASE("parent map serialization is rank ordered") {
  ParentMap pm;
  pm.add_node(EdgeKey(0, 1), Weight(5));
  pm.add_node(EdgeKey(1, 2), Weight(1));
  pm.add_node(EdgeKey(2, 3), Weight(3));
  pm.set_parent(EdgeKey(1, 2), EdgeKey(2, 3));
  pm.set_parent(EdgeKey(2, 3), EdgeKey(0, 1));
  CHECK(pm.serialize_canonical() ==
        "1-2 1 -> 2-3\n"
        "2-3 3 -> 0-1\n"
        "0-1 5 -> ROOT\n");
  CHECK_THROWS_AS(pm.add_node(EdgeKey(0, 1), Weight(9)), Error);
  pm.remove_node(EdgeKey(0, 1));
  CHECK_FALSE(pm.contains(EdgeKey(0, 1)));
  CHECK_THROWS_AS(pm.remove_node(EdgeKey(0, 1)), Error);
}

TEST_CASE("min incident edge follows rank order") {
  ForestState f(5);
  f.add_edge(Edge(0, 1, Weight(5)));
  f.add_edge(Edge(1, 2, Weight(1)));
  f.add_edge(Edge(2, 3, Weight(3)));

  auto m1 = f.min_incident_edge(1);
  REQUIRE(m1.has_value());
  CHECK(m1->key == EdgeKey(1, 2));

  auto m0 = f.min_incident_edge(0);
  REQUIRE(m0.has_value());
  CHECK(m0->key == EdgeKey(0, 1));

  CHECK_FALSE(f.min_incident_edge(4).has_value());
  CHECK_THROWS_AS(f.min_incident_edge(17), Error);
}

TEST_CASE("min incident edge agrees with a linear scan") {
  ForestState f(8);
  std::vector<Edge> edges = {
      Edge(0, 1, Weight(4)), Edge(0, 2, Weight(4)),  Edge(0, 3, Weight(1)),
      Edge(3, 4, Weight(9)), Edge(4, 5, Weight(0.5)), Edge(5, 6, Weight(4)),
  };
  for (const Edge& e : edges) f.add_edge(e);
  for (VertexId v = 0; v < 8; ++v) {
    std::optional<Edge> best;
    for (const Edge& e : edges) {
      if (e.key.lo != v && e.key.hi != v) continue;
      if (!best || rank_less(e, *best)) best = e;
    }
    auto got = f.min_incident_edge(v);
    CHECK(got.has_value() == best.has_value());
    if (got && best) CHECK(got->key == best->key);
  }
  f.remove_edge(EdgeKey(0, 3));
  auto m = f.min_incident_edge(0);
  REQUIRE(m.has_value());
  CHECK(m->key == EdgeKey(0, 1));
}
