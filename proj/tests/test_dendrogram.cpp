#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dendra/dendrogram.hpp"
#include "dendra/oracle.hpp"
#include "testsupport.hpp"

using namespace dendra;
namespace ora = dendra::oracle;

namespace {

const std::vector<Edge> kPathFixture = {
    Edge(0, 1, Weight(5)), Edge(1, 2, Weight(1)), Edge(2, 3, Weight(3))};

}  // namespace

TEST_CASE("build matches the Kruskal sweep") {
  DendrogramState empty(4, {});
  CHECK(empty.parents().empty());
  empty.validate();

  DendrogramState path(4, kPathFixture);
  CHECK(path.parents().serialize_canonical() ==
        "1-2 1 -> 2-3\n"
        "2-3 3 -> 0-1\n"
        "0-1 5 -> ROOT\n");
  path.validate();

  std::vector<Edge> star = {Edge(0, 1, Weight(1)), Edge(0, 2, Weight(2)),
                            Edge(0, 3, Weight(3))};
  DendrogramState s(4, star);
  CHECK(s.parents().parent(EdgeKey(0, 1)) == EdgeKey(0, 2));
  CHECK(s.parents().parent(EdgeKey(0, 2)) == EdgeKey(0, 3));
  CHECK(s.parents().parent(EdgeKey(0, 3)) == std::nullopt);
  s.validate();

  std::vector<Edge> cyc = {Edge(0, 1, Weight(1)), Edge(1, 2, Weight(2)),
                           Edge(0, 2, Weight(3))};
  CHECK_THROWS_AS(DendrogramState(3, cyc), Error);
}

TEST_CASE("extract spine equals the parent chase") {
  DendrogramState path(4, kPathFixture);
  Spine s = path.extract_spine(EdgeKey(1, 2));
  REQUIRE(s.size() == 3);
  CHECK(s.nodes[0].key == EdgeKey(1, 2));
  CHECK(s.nodes[1].key == EdgeKey(2, 3));
  CHECK(s.nodes[2].key == EdgeKey(0, 1));

  Spine root_only = path.extract_spine(EdgeKey(0, 1));
  REQUIRE(root_only.size() == 1);
  CHECK(root_only.nodes[0].key == EdgeKey(0, 1));

  CHECK_THROWS_AS(path.extract_spine(EdgeKey(0, 3)), Error);

  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto forest = ora::gen_random_forest(64, 50, seed);
    DendrogramState st(forest.num_vertices, forest.edges);
    for (const Edge& e : forest.edges) {
      Spine spine = st.extract_spine(e.key);
      // Naive parent chase.
      std::vector<EdgeKey> chase{e.key};
      while (auto p = st.parents().parent(chase.back())) chase.push_back(*p);
      REQUIRE(spine.size() == chase.size());
      for (std::size_t i = 0; i < chase.size(); ++i) {
        CHECK(spine.nodes[i].key == chase[i]);
      }
      // Strictly increasing rank along the spine.
      for (std::size_t i = 0; i + 1 < spine.size(); ++i) {
        CHECK(rank_less(spine.nodes[i], spine.nodes[i + 1]));
      }
    }
    st.validate();
  }
}

TEST_CASE("height counts the longest root chain") {
  DendrogramState single(2, {Edge(0, 1, Weight(1))});
  CHECK(single.height(EdgeKey(0, 1)) == 1);

  DendrogramState path(4, kPathFixture);
  CHECK(path.height(EdgeKey(1, 2)) == 3);

  // Balanced 7-edge dendrogram: two 3-edge stars joined by a heavy edge.
  std::vector<Edge> balanced = {
      Edge(0, 1, Weight(1)), Edge(1, 2, Weight(3)), Edge(3, 4, Weight(2)),
      Edge(4, 5, Weight(4)), Edge(2, 3, Weight(10)),
  };
  DendrogramState b(6, balanced);
  CHECK(b.height(EdgeKey(2, 3)) == 3);
}

TEST_CASE("apply parent changes keeps all maps consistent") {
  DendrogramState st(4, kPathFixture);
  st.begin_journal();
  CHECK_NOTHROW(st.apply_parent_changes({}, {}, {}));
  CHECK(st.journal_changes() == 0);

  // Re-pointing (1-2) directly at the root is heap-safe and reversible.
  st.apply_parent_changes({{EdgeKey(1, 2), EdgeKey(0, 1)}}, {}, {});
  CHECK(st.parents().parent(EdgeKey(1, 2)) == EdgeKey(0, 1));
  CHECK(st.journal_changes() == 1);
  st.apply_parent_changes({{EdgeKey(1, 2), EdgeKey(2, 3)}}, {}, {});
  CHECK(st.journal_changes() == 0);  // restored
  st.validate();

  // Heap violations are rejected before mutation.
  CHECK_THROWS_AS(
      st.apply_parent_changes({{EdgeKey(0, 1), EdgeKey(1, 2)}}, {}, {}), Error);
  st.validate();
}

TEST_CASE("component root is the rank maximum") {
  DendrogramState path(4, kPathFixture);
  CHECK(path.component_root(EdgeKey(1, 2)) == EdgeKey(0, 1));
  CHECK(path.component_root(EdgeKey(0, 1)) == EdgeKey(0, 1));
  CHECK(path.roots().size() == 1);

  std::vector<Edge> two = {Edge(0, 1, Weight(1)), Edge(2, 3, Weight(2))};
  DendrogramState t(4, two);
  CHECK(t.roots().size() == 2);
  CHECK(t.component_root(EdgeKey(0, 1)) == EdgeKey(0, 1));
  CHECK(t.component_root(EdgeKey(2, 3)) == EdgeKey(2, 3));
}

TEST_CASE("validate flags corruption") {
  DendrogramState st(4, kPathFixture);
  st.validate();
  // Heap-legal but wrong parent: the Kruskal cross-check must catch it.
  st.begin_journal();
  st.apply_parent_changes({{EdgeKey(1, 2), EdgeKey(0, 1)}}, {}, {});
  CHECK_THROWS_AS(st.validate(), Error);
}

TEST_CASE("journal counts net differences only") {
  DendrogramState st(4, kPathFixture);
  st.begin_journal();
  st.set_parent_immediate(EdgeKey(1, 2), EdgeKey(0, 1));
  st.set_parent_immediate(EdgeKey(1, 2), EdgeKey(2, 3));
  CHECK(st.journal_changes() == 0);
  st.set_parent_immediate(EdgeKey(1, 2), EdgeKey(0, 1));
  CHECK(st.journal_changes() == 1);
  st.set_parent_immediate(EdgeKey(1, 2), EdgeKey(2, 3));
  st.validate();
}
