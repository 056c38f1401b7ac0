#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "dendra/oracle.hpp"
#include "dendra/rc_forest.hpp"
#include "testsupport.hpp"

using namespace dendra;
namespace ora = dendra::oracle;
using testsupport::MirrorGraph;
using testsupport::NaiveUnionFind;

namespace {

RankKey ekey(VertexId u, VertexId v, double w) {
  return RankKey(w, std::min(u, v), std::max(u, v));
}

// Builds the same random tree in the RC forest and the mirror.
struct TreePair {
  RCForest rc;
  MirrorGraph mirror;

  explicit TreePair(std::size_t n) : rc(n), mirror(n) {}
};

TreePair random_tree(std::size_t n, std::uint64_t seed) {
  TreePair t(n);
  auto forest = ora::gen_random_forest(n, n - 1, seed);
  for (const Edge& e : forest.edges) {
    t.rc.link(e.key.lo, e.key.hi, RankKey(e));
    t.mirror.add_edge(e.key.lo, e.key.hi);
  }
  return t;
}

}  // namespace

TEST_CASE("link and cut basics") {
  RCForest rc(4);
  CHECK_FALSE(rc.connected(0, 1));
  rc.link(0, 1);
  CHECK(rc.connected(0, 1));
  CHECK(rc.component_size(0) == 2);
  CHECK_THROWS_AS(rc.link(0, 1), Error);  // already connected
  rc.link(1, 2);
  CHECK_THROWS_AS(rc.link(0, 2), Error);
  rc.cut(0, 1);
  CHECK_FALSE(rc.connected(0, 1));
  CHECK(rc.connected(1, 2));
  CHECK_THROWS_AS(rc.cut(0, 1), Error);  // no such edge
  CHECK_THROWS_AS(rc.cut(0, 3), Error);
  rc.audit();
}

TEST_CASE("link then cut restores connectivity") {
  RCForest rc(6);
  rc.link(0, 1);
  rc.link(2, 3);
  rc.link(1, 2);
  CHECK(rc.connected(0, 3));
  rc.cut(1, 2);
  CHECK(rc.connected(0, 1));
  CHECK(rc.connected(2, 3));
  CHECK_FALSE(rc.connected(0, 3));
  rc.audit();
}

TEST_CASE("representative is the minimum vertex of the component") {
  RCForest rc(5);
  rc.link(3, 4);
  rc.link(2, 3);
  CHECK(rc.representative(4) == 2);
  CHECK(rc.representative(0) == 0);
  CHECK(rc.representative(2) != rc.representative(1));
}

TEST_CASE("connectivity soak against union-find rebuilds") {
  const std::size_t n = 96;
  ora::Rng rng(1234);
  RCForest rc(n);
  std::set<std::pair<VertexId, VertexId>> edges;
  for (int step = 0; step < 400; ++step) {
    bool do_insert = edges.size() < 4 || (edges.size() + 1 < n && rng.next_below(5) < 3);
    if (do_insert) {
      // Random disconnected pair via fresh union-find.
      NaiveUnionFind uf(n);
      for (auto [u, v] : edges) uf.unite(u, v);
      VertexId u = static_cast<VertexId>(rng.next_below(n));
      VertexId v = static_cast<VertexId>(rng.next_below(n));
      if (u == v || uf.find(u) == uf.find(v)) continue;
      rc.link(u, v, ekey(u, v, static_cast<double>(step)));
      edges.insert({std::min(u, v), std::max(u, v)});
    } else {
      std::size_t pick = rng.next_below(edges.size());
      auto it = edges.begin();
      std::advance(it, pick);
      rc.cut(it->first, it->second);
      edges.erase(it);
    }
    if (step % 37 == 0) rc.audit();
    // Full pairwise connectivity equivalence on a sample of pairs.
    NaiveUnionFind uf(n);
    for (auto [u, v] : edges) uf.unite(u, v);
    for (int probe = 0; probe < 32; ++probe) {
      VertexId a = static_cast<VertexId>(rng.next_below(n));
      VertexId b = static_cast<VertexId>(rng.next_below(n));
      CHECK(rc.connected(a, b) == (uf.find(a) == uf.find(b)));
    }
  }
  rc.audit();
  CHECK(rc.hierarchy_height() <= RCForest::max_height(n));
}

TEST_CASE("batch link and cut match the sequential fold") {
  const std::size_t n = 64;
  auto forest = ora::gen_random_forest(n, 40, 99);
  RCForest batch_rc(n);
  RCForest seq_rc(n);
  std::vector<RCForest::LinkSpec> links;
  for (const Edge& e : forest.edges) {
    links.push_back({e.key.lo, e.key.hi, RankKey(e)});
    seq_rc.link(e.key.lo, e.key.hi, RankKey(e));
  }
  batch_rc.batch_link(links);
  batch_rc.audit();
  for (VertexId u = 0; u < n; ++u) {
    CHECK(batch_rc.representative(u) == seq_rc.representative(u));
  }

  // Batch cut half the edges.
  std::vector<std::pair<VertexId, VertexId>> cuts;
  for (std::size_t i = 0; i < forest.edges.size(); i += 2) {
    cuts.push_back({forest.edges[i].key.lo, forest.edges[i].key.hi});
    seq_rc.cut(forest.edges[i].key.lo, forest.edges[i].key.hi);
  }
  batch_rc.batch_cut(cuts);
  batch_rc.audit();
  for (VertexId u = 0; u < n; ++u) {
    CHECK(batch_rc.representative(u) == seq_rc.representative(u));
  }
}

TEST_CASE("batch link rejects internal cycles atomically") {
  RCForest rc(4);
  std::vector<RCForest::LinkSpec> bad = {
      {0, 1, ekey(0, 1, 1)}, {1, 2, ekey(1, 2, 2)}, {0, 2, ekey(0, 2, 3)}};
  CHECK_THROWS_AS(rc.batch_link(bad), Error);
  CHECK_FALSE(rc.connected(0, 1));  // nothing applied
  CHECK_NOTHROW(rc.batch_link({}));
  std::vector<std::pair<VertexId, VertexId>> dup = {{0, 1}, {0, 1}};
  rc.link(0, 1);
  CHECK_THROWS_AS(rc.batch_cut(dup), Error);
  CHECK(rc.connected(0, 1));
}

TEST_CASE("batch connected equals fresh union-find") {
  const std::size_t n = 100;
  auto forest = ora::gen_random_forest(n, 70, 5);
  RCForest rc(n);
  NaiveUnionFind uf(n);
  for (const Edge& e : forest.edges) {
    rc.link(e.key.lo, e.key.hi, RankKey(e));
    uf.unite(e.key.lo, e.key.hi);
  }
  ora::Rng rng(11);
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (int i = 0; i < 100; ++i) {
    pairs.push_back({static_cast<VertexId>(rng.next_below(n)),
                     static_cast<VertexId>(rng.next_below(n))});
  }
  auto got = rc.batch_connected(pairs);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(got[i] == (uf.find(pairs[i].first) == uf.find(pairs[i].second)));
  }
}

TEST_CASE("path decomposition covers the tree path exactly") {
  auto t = random_tree(64, 42);
  for (VertexId u = 0; u < 64; u += 3) {
    for (VertexId v = 1; v < 64; v += 5) {
      auto expect = t.mirror.bfs_path(u, v);
      auto got = t.rc.extract_path(u, v);
      REQUIRE(got == expect);
      auto pd = t.rc.path_decomposition(u, v);
      CHECK(pd.total_length == expect.size());
      CHECK(pd.joints.front() == u);
      CHECK(pd.joints.back() == v);
      CHECK(pd.clusters.size() + 1 == pd.joints.size());
      CHECK(pd.clusters.size() <= 2 * RCForest::max_height(64));
    }
  }
}

TEST_CASE("path decomposition trivial cases") {
  RCForest rc(3);
  rc.link(0, 1);
  auto pd = rc.path_decomposition(0, 0);
  CHECK(pd.clusters.empty());
  CHECK(pd.total_length == 1);

  auto adj = rc.path_decomposition(0, 1);
  CHECK(adj.total_length == 2);
  CHECK(adj.clusters.size() == 1);

  CHECK(rc.extract_path(0, 0) == std::vector<VertexId>{0});
  CHECK(rc.extract_path(0, 1) == std::vector<VertexId>{0, 1});
  CHECK_THROWS_AS(rc.path_decomposition(0, 2), Error);
}

TEST_CASE("path max edge matches a linear scan") {
  RCForest rc(4);
  rc.link(0, 1, ekey(0, 1, 5));
  rc.link(1, 2, ekey(1, 2, 1));
  rc.link(2, 3, ekey(2, 3, 3));
  RankKey m = rc.path_max_edge(0, 3);
  CHECK(m.w == 5);
  CHECK(m.lo == 0);
  CHECK(m.hi == 1);
  RankKey adj = rc.path_max_edge(2, 3);
  CHECK(adj.w == 3);
  CHECK_THROWS_AS(rc.path_max_edge(1, 1), Error);

  auto t = random_tree(64, 17);
  std::map<std::pair<VertexId, VertexId>, double> weights;
  auto forest = ora::gen_random_forest(64, 63, 17);
  for (const Edge& e : forest.edges) weights[{e.key.lo, e.key.hi}] = e.weight.value;
  for (VertexId u = 0; u < 64; u += 2) {
    for (VertexId v = 1; v < 64; v += 7) {
      if (u == v) continue;
      auto path = t.mirror.bfs_path(u, v);
      RankKey best(-1, 0, 0);
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        VertexId a = std::min(path[i], path[i + 1]);
        VertexId b = std::max(path[i], path[i + 1]);
        RankKey k(weights.at({a, b}), a, b);
        if (best < k) best = k;
      }
      RankKey got = t.rc.path_max_edge(u, v);
      CHECK(got == best);
    }
  }
}

TEST_CASE("path median matches indexing into the BFS path") {
  RCForest rc(5);
  for (VertexId i = 0; i + 1 < 5; ++i) rc.link(i, i + 1, ekey(i, i + 1, i + 1.0));
  CHECK(rc.path_median(0, 0) == 0);
  CHECK(rc.path_median(0, 4) == 2);
  CHECK(rc.path_median(4, 0) == 2);
  CHECK(rc.path_median(0, 1) == 1);  // length 2, index 1

  auto t = random_tree(64, 23);
  for (VertexId u = 0; u < 64; u += 3) {
    for (VertexId v = 0; v < 64; v += 4) {
      auto path = t.mirror.bfs_path(u, v);
      CHECK(t.rc.path_median(u, v) == path[path.size() / 2]);
    }
  }
}

TEST_CASE("subtree size matches the DFS count") {
  auto t = random_tree(64, 31);
  for (VertexId root : {0u, 7u, 33u, 63u}) {
    for (VertexId v = 0; v < 64; ++v) {
      CHECK(t.rc.subtree_size(root, v) == t.mirror.subtree_size(root, v));
    }
    CHECK(t.rc.subtree_size(root, root) == 64);
  }

  RCForest rc(3);
  rc.link(0, 1);
  CHECK_THROWS_AS(rc.subtree_size(0, 2), Error);
}

namespace {

// A vertex-weighted path embedded in a larger tree: vertices path[i] carry
// strictly increasing weights; extra branches hang off with arbitrary ids.
struct MonotonePath {
  RCForest rc;
  std::vector<VertexId> path;     // path vertices in order
  std::vector<RankKey> weights;   // weights along the path

  MonotonePath(std::size_t path_len, std::size_t extra, std::uint64_t seed)
      : rc(0) {
    ora::Rng rng(seed);
    double w = 1.0;
    for (std::size_t i = 0; i < path_len; ++i) {
      w += 1.0 + static_cast<double>(rng.next_below(5));
      RankKey key(w, static_cast<VertexId>(i), 0);
      path.push_back(rc.add_vertex(key));
      weights.push_back(key);
      if (i > 0) rc.link(path[i - 1], path[i], ekey(path[i - 1], path[i], 1.0));
    }
    for (std::size_t i = 0; i < extra; ++i) {
      // Hang a branch off a random path vertex; weights irrelevant.
      VertexId anchor = path[rng.next_below(path.size())];
      VertexId extra_v = rc.add_vertex(RankKey(1e9 + static_cast<double>(i), 0, 0));
      rc.link(anchor, extra_v, ekey(anchor, extra_v, 2.0));
    }
  }
};

}  // namespace

TEST_CASE("path weight search on a simple path") {
  MonotonePath mp(3, 0, 1);
  // Weights are increasing; pick a query between the 2nd and 3rd.
  RankKey mid = mp.weights[1];
  mid.hi = 1;  // just above the second vertex
  auto r = mp.rc.path_weight_search(mp.path.front(), mp.path.back(), mid);
  REQUIRE(r.pred.has_value());
  REQUIRE(r.succ.has_value());
  CHECK(*r.pred == mp.path[1]);
  CHECK(*r.succ == mp.path[2]);

  auto lo = mp.rc.path_weight_search(mp.path.front(), mp.path.back(), RankKey(0, 0, 0));
  CHECK_FALSE(lo.pred.has_value());
  CHECK(*lo.succ == mp.path[0]);

  auto hi = mp.rc.path_weight_search(mp.path.front(), mp.path.back(),
                                     RankKey(1e8, 0, 0));
  CHECK(*hi.pred == mp.path[2]);
  CHECK_FALSE(hi.succ.has_value());
}

TEST_CASE("path weight search equals the linear oracle") {
  for (std::uint64_t seed : {3u, 9u, 27u}) {
    MonotonePath mp(40, 25, seed);
    ora::Rng rng(seed * 7 + 1);
    for (int q = 0; q < 200; ++q) {
      RankKey w(1.0 + static_cast<double>(rng.next_below(300)) / 2.0,
                static_cast<VertexId>(rng.next_below(40)), 0);
      auto got = mp.rc.path_weight_search(mp.path.front(), mp.path.back(), w);
      auto expect = ora::linear_pws(mp.weights, w);
      CHECK(got.pred.has_value() == expect.pred.has_value());
      CHECK(got.succ.has_value() == expect.succ.has_value());
      if (got.pred && expect.pred) CHECK(*got.pred == mp.path[*expect.pred]);
      if (got.succ && expect.succ) CHECK(*got.succ == mp.path[*expect.succ]);
    }
    // Queries equal to vertex weights: strict on both sides.
    for (std::size_t i = 0; i < mp.path.size(); i += 5) {
      auto got = mp.rc.path_weight_search(mp.path.front(), mp.path.back(),
                                          mp.weights[i]);
      if (i == 0) {
        CHECK_FALSE(got.pred.has_value());
      } else {
        REQUIRE(got.pred.has_value());
        CHECK(*got.pred == mp.path[i - 1]);
      }
      if (i + 1 == mp.path.size()) {
        CHECK_FALSE(got.succ.has_value());
      } else {
        REQUIRE(got.succ.has_value());
        CHECK(*got.succ == mp.path[i + 1]);
      }
    }
  }
}

TEST_CASE("monotone batch equals independent queries and visits each node at most twice") {
  for (std::uint64_t seed : {5u, 15u}) {
    MonotonePath mp(512, 128, seed);
    ora::Rng rng(seed + 100);
    std::vector<RankKey> ws;
    double w = 0.5;
    for (int i = 0; i < 64; ++i) {
      w += 1.0 + static_cast<double>(rng.next_below(40));
      ws.push_back(RankKey(w, 0, 0));
    }
    auto batch = mp.rc.pws_monotone_batch(mp.path.front(), mp.path.back(), ws);
    REQUIRE(batch.results.size() == ws.size());
    CHECK(batch.max_node_visits <= 2);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      auto solo = mp.rc.path_weight_search(mp.path.front(), mp.path.back(), ws[i]);
      CHECK(batch.results[i].pred == solo.pred);
      CHECK(batch.results[i].succ == solo.succ);
    }
  }
}

TEST_CASE("singleton batch equals pws and decreasing queries are rejected") {
  MonotonePath mp(16, 4, 2);
  std::vector<RankKey> one = {RankKey(3.5, 0, 0)};
  auto batch = mp.rc.pws_monotone_batch(mp.path.front(), mp.path.back(), one);
  auto solo = mp.rc.path_weight_search(mp.path.front(), mp.path.back(), one[0]);
  CHECK(batch.results[0].pred == solo.pred);
  CHECK(batch.results[0].succ == solo.succ);

  std::vector<RankKey> bad = {RankKey(5, 0, 0), RankKey(4, 0, 0)};
  CHECK_THROWS_AS(mp.rc.pws_monotone_batch(mp.path.front(), mp.path.back(), bad),
                  Error);
}

TEST_CASE("pws on a single-vertex path") {
  RCForest rc(0);
  VertexId v = rc.add_vertex(RankKey(5, 0, 0));
  auto below = rc.path_weight_search(v, v, RankKey(1, 0, 0));
  CHECK_FALSE(below.pred.has_value());
  CHECK(*below.succ == v);
  auto above = rc.path_weight_search(v, v, RankKey(9, 0, 0));
  CHECK(*above.pred == v);
  CHECK_FALSE(above.succ.has_value());
}

TEST_CASE("dynamic vertices work with queries") {
  RCForest rc(0);
  VertexId a = rc.add_vertex(RankKey(1, 0, 0));
  VertexId b = rc.add_vertex(RankKey(2, 0, 0));
  VertexId c = rc.add_vertex(RankKey(3, 0, 0));
  rc.link(a, b);
  rc.link(b, c);
  CHECK(rc.component_size(a) == 3);
  CHECK(rc.component_weight_argmax(a) == c);
  rc.cut(a, b);
  CHECK_THROWS_AS(rc.remove_vertex(b), Error);  // still has an edge
  rc.cut(b, c);
  rc.remove_vertex(b);
  CHECK_FALSE(rc.vertex_alive(b));
  CHECK(rc.vertex_alive(a));
  rc.audit();
}

TEST_CASE("hierarchy height stays within the documented bound") {
  // Sorted path: adversarial for id-based rules.
  const std::size_t n = 512;
  RCForest rc(n);
  for (VertexId i = 0; i + 1 < n; ++i) rc.link(i, i + 1, ekey(i, i + 1, i + 1.0));
  CHECK(rc.hierarchy_height() <= RCForest::max_height(n));
  rc.audit();

  // Star: contracts in a couple of rounds.
  RCForest star(256);
  for (VertexId i = 1; i < 256; ++i) star.link(0, i, ekey(0, i, i + 0.0));
  CHECK(star.hierarchy_height() <= RCForest::max_height(256));
  star.audit();
}

TEST_CASE("debug dump is deterministic") {
  auto t1 = random_tree(32, 8);
  auto t2 = random_tree(32, 8);
  CHECK(t1.rc.debug_dump() == t2.rc.debug_dump());
  CHECK(!t1.rc.debug_dump().empty());
}
