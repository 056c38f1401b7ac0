// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails. Tolerances are pinned in code; every comparison is
// exact unless the criterion itself states a constant bound.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dendra/cartesian.hpp"
#include "dendra/oracle.hpp"
#include "dendra/parallel.hpp"
#include "dendra/queries.hpp"
#include "dendra/updates.hpp"

using namespace dendra;
namespace ora = dendra::oracle;
namespace upd = dendra::updates;
namespace qry = dendra::queries;
using upd::UpdateMode;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void note(const std::string& text) {
    if (pass && detail.empty()) detail = text;
  }
};

int g_failures = 0;

template <typename F>
void criterion(int id, const std::string& name, F&& body) {
  Outcome out;
  auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("criterion %2d: %s - %s (%.1fs)%s%s\n", id,
              out.pass ? "PASS" : "FAIL", name.c_str(), secs,
              out.detail.empty() ? "" : " :: ", out.detail.c_str());
  std::fflush(stdout);
  if (!out.pass) ++g_failures;
}

std::string oracle_serialization(const DendrogramState& st) {
  std::vector<Edge> edges;
  for (const auto& [key, w] : st.forest().edges()) edges.push_back(Edge(key, w));
  return ora::kruskal_sld(st.forest().num_vertices(), edges).serialize_canonical();
}

UpdateReport apply_update(DendrogramState& st, const ora::Update& u,
                          UpdateMode mode) {
  switch (u.kind) {
    case ora::Update::Kind::insert:
      return upd::insert(st, u.edges[0].key.lo, u.edges[0].key.hi,
                         u.edges[0].weight, mode);
    case ora::Update::Kind::erase:
      return upd::erase(st, u.edges[0].key.lo, u.edges[0].key.hi, mode);
    case ora::Update::Kind::batch_insert:
      return upd::batch_insert(st, u.edges);
    case ora::Update::Kind::batch_erase: {
      std::vector<EdgeKey> keys;
      for (const Edge& e : u.edges) keys.push_back(e.key);
      return upd::batch_erase(st, keys);
    }
  }
  return {};
}

constexpr std::size_t kSoakVertices = 256;
constexpr std::size_t kSoakEdges = 128;
constexpr std::size_t kSoakOps = 1000;

std::vector<ora::Update> soak_stream(std::uint64_t seed) {
  auto forest = ora::gen_random_forest(kSoakVertices, kSoakEdges, seed);
  return ora::gen_update_stream(forest, kSoakOps, seed + 1000,
                                ora::StreamProfile::mixed);
}

DendrogramState soak_state(std::uint64_t seed) {
  auto forest = ora::gen_random_forest(kSoakVertices, kSoakEdges, seed);
  return DendrogramState(forest.num_vertices, forest.edges);
}

void criterion1(Outcome& out) {
  for (UpdateMode mode : {UpdateMode::seq_h, UpdateMode::seq_os, UpdateMode::par_h,
                          UpdateMode::par_os}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      DendrogramState st = soak_state(seed);
      auto stream = soak_stream(seed);
      std::size_t op_index = 0;
      for (const auto& u : stream) {
        apply_update(st, u, mode);
        if (st.parents().serialize_canonical() != oracle_serialization(st)) {
          out.fail("mode " + std::string(upd::mode_name(mode)) + " seed " +
                   std::to_string(seed) + " diverged at update " +
                   std::to_string(op_index));
          return;
        }
        ++op_index;
      }
    }
  }
  out.note("4 modes x 10 seeds x 1000 updates, exact equality throughout");
}

void criterion2(Outcome& out) {
  for (std::uint32_t h : {2u, 8u, 64u}) {
    auto inst = ora::gen_theorem_instance(h, 2);
    DendrogramState st(inst.num_vertices, inst.edges);
    std::string original = st.parents().serialize_canonical();
    auto ins = upd::insert(st, inst.centers[0], inst.centers[1], Weight(0));
    auto del = upd::erase(st, inst.centers[0], inst.centers[1]);
    bool restored = st.parents().serialize_canonical() == original;
    if (!restored) {
      out.fail("h=" + std::to_string(h) + ": serialization not restored");
      return;
    }
    if (ins.pointer_changes != 2 * h + 1 || del.pointer_changes != 2 * h + 1) {
      out.fail("h=" + std::to_string(h) + ": expected 2h+1=" +
               std::to_string(2 * h + 1) + " pointer changes, observed insert=" +
               std::to_string(ins.pointer_changes) + " delete=" +
               std::to_string(del.pointer_changes) +
               " (diff of the edge-node map is 2h: 2h-1 reassignments plus one "
               "added/removed node; restoration was byte-exact)");
      return;
    }
  }
}

void criterion3(Outcome& out) {
  std::uint64_t insertions = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DendrogramState st = soak_state(seed);
    for (const auto& u : soak_stream(seed)) {
      auto report = apply_update(st, u, UpdateMode::seq_os);
      if (u.kind != ora::Update::Kind::insert) continue;
      ++insertions;
      if (report.merge_pws_queries.size() != report.merge_pointer_changes.size()) {
        out.fail("merge counter arity mismatch");
        return;
      }
      for (std::size_t m = 0; m < report.merge_pws_queries.size(); ++m) {
        if (report.merge_pws_queries[m] != report.merge_pointer_changes[m]) {
          out.fail("seed " + std::to_string(seed) + ": merge " + std::to_string(m) +
                   " issued " + std::to_string(report.merge_pws_queries[m]) +
                   " queries for " + std::to_string(report.merge_pointer_changes[m]) +
                   " changes");
          return;
        }
      }
    }
  }
  out.note(std::to_string(insertions) + " insertions, per-merge equality exact");
}

void criterion4(Outcome& out) {
  std::uint32_t worst = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DendrogramState st = soak_state(seed);
    for (const auto& u : soak_stream(seed)) {
      auto report = apply_update(st, u, UpdateMode::seq_os);
      worst = std::max(worst, report.max_pws_node_visits);
      if (report.max_pws_node_visits > 2) {
        out.fail("a monotone batch visited a hierarchy node " +
                 std::to_string(report.max_pws_node_visits) + " times");
        return;
      }
    }
  }
  out.note("max per-node visit count observed: " + std::to_string(worst));
}

void criterion5(Outcome& out) {
  const std::size_t n = 4096;
  auto forest = ora::gen_random_forest(n, 2048, 5);
  DendrogramState st(forest.num_vertices, forest.edges);
  auto stream =
      ora::gen_update_stream(forest, 10000, 55, ora::StreamProfile::insert_heavy);
  double constant = 0;
  std::uint64_t inserts = 0;
  for (const auto& u : stream) {
    auto report = apply_update(st, u, UpdateMode::seq_os);
    if (u.kind != ora::Update::Kind::insert) continue;
    ++inserts;
    double c = static_cast<double>(report.pointer_changes);
    double bound = c * std::log2(2.0 + static_cast<double>(n) / c);
    constant = std::max(constant, static_cast<double>(report.rc_nodes_visited) / bound);
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%llu inserts at n=4096, fitted C=%.2f (limit 64)",
                static_cast<unsigned long long>(inserts), constant);
  if (constant > 64.0) {
    out.fail(buf);
  } else {
    out.note(buf);
  }
}

void criterion6(Outcome& out) {
  std::uint32_t worst_depth = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DendrogramState reference = soak_state(seed);
    DendrogramState parallel_state = soak_state(seed);
    std::size_t op_index = 0;
    for (const auto& u : soak_stream(seed)) {
      apply_update(reference, u, UpdateMode::seq_h);
      auto report = apply_update(parallel_state, u, UpdateMode::par_os);
      if (reference.parents().serialize_canonical() !=
          parallel_state.parents().serialize_canonical()) {
        out.fail("seed " + std::to_string(seed) + ": par-os diverged at update " +
                 std::to_string(op_index));
        return;
      }
      std::uint32_t h = 0;
      for (std::uint32_t len : report.spine_lengths) h = std::max(h, len);
      std::uint32_t bound =
          2 * static_cast<std::uint32_t>(std::ceil(std::log2(h + 2.0))) + 2;
      worst_depth = std::max(worst_depth, report.dc_recursion_depth);
      if (report.dc_recursion_depth > bound) {
        out.fail("merge depth " + std::to_string(report.dc_recursion_depth) +
                 " above the bound " + std::to_string(bound) + " for spines of " +
                 std::to_string(h));
        return;
      }
      ++op_index;
    }
  }
  out.note("exact map equality; max recursion depth " + std::to_string(worst_depth));
}

void criterion7(Outcome& out) {
  ora::Rng rng(777);
  std::uint32_t worst_rounds = 0;
  for (std::size_t k : {2u, 8u, 32u}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto forest = ora::gen_random_forest(kSoakVertices, 100, seed * 31 + k);
      auto stream = ora::gen_update_stream(forest, 12, seed * 37 + k,
                                           ora::StreamProfile::batch, k);
      // The first insert batch and the first delete batch of the stream.
      std::vector<Edge> ins_batch, del_batch;
      {
        DendrogramState replay(forest.num_vertices, forest.edges);
        for (const auto& u : stream) {
          if (u.kind == ora::Update::Kind::batch_insert && ins_batch.empty()) {
            ins_batch = u.edges;
          } else if (u.kind == ora::Update::Kind::batch_erase && del_batch.empty()) {
            del_batch = u.edges;
          }
          if (!ins_batch.empty() && !del_batch.empty()) break;
          apply_update(replay, u, UpdateMode::seq_h);
        }
      }
      auto permute = [&rng](auto vec) {
        for (std::size_t i = vec.size(); i > 1; --i) {
          std::swap(vec[i - 1], vec[rng.next_below(i)]);
        }
        return vec;
      };
      if (!ins_batch.empty()) {
        DendrogramState batched(forest.num_vertices, forest.edges);
        auto report = upd::batch_insert(batched, ins_batch);
        worst_rounds = std::max(worst_rounds, report.contraction_rounds);
        std::uint32_t round_bound = static_cast<std::uint32_t>(
            std::ceil(4.0 * std::log2(static_cast<double>(ins_batch.size()) + 2.0)));
        if (report.contraction_rounds > round_bound) {
          out.fail("k=" + std::to_string(ins_batch.size()) + ": " +
                   std::to_string(report.contraction_rounds) +
                   " contraction rounds, bound " + std::to_string(round_bound));
          return;
        }
        for (int perm = 0; perm < 3; ++perm) {
          DendrogramState folded(forest.num_vertices, forest.edges);
          for (const Edge& e : permute(ins_batch)) {
            upd::insert(folded, e.key.lo, e.key.hi, e.weight);
          }
          if (batched.parents().serialize_canonical() !=
              folded.parents().serialize_canonical()) {
            out.fail("insert batch k=" + std::to_string(ins_batch.size()) +
                     " differs from a sequential fold");
            return;
          }
        }
      }
      if (!del_batch.empty()) {
        // Rebuild the pre-delete state by replaying up to the delete batch.
        DendrogramState replay(forest.num_vertices, forest.edges);
        std::vector<Edge> current = forest.edges;
        for (const auto& u : stream) {
          if (u.kind == ora::Update::Kind::batch_erase && u.edges == del_batch) break;
          apply_update(replay, u, UpdateMode::seq_h);
        }
        std::vector<Edge> base_edges;
        for (const auto& [key, w] : replay.forest().edges()) {
          base_edges.push_back(Edge(key, w));
        }
        std::vector<EdgeKey> keys;
        for (const Edge& e : del_batch) keys.push_back(e.key);
        DendrogramState batched(replay.forest().num_vertices(), base_edges);
        upd::batch_erase(batched, keys);
        for (int perm = 0; perm < 3; ++perm) {
          DendrogramState folded(replay.forest().num_vertices(), base_edges);
          std::vector<EdgeKey> shuffled = keys;
          for (std::size_t i = shuffled.size(); i > 1; --i) {
            std::swap(shuffled[i - 1], shuffled[rng.next_below(i)]);
          }
          for (EdgeKey key : shuffled) upd::erase(folded, key.lo, key.hi);
          if (batched.parents().serialize_canonical() !=
              folded.parents().serialize_canonical()) {
            out.fail("delete batch k=" + std::to_string(keys.size()) +
                     " differs from a sequential fold");
            return;
          }
        }
      }
    }
  }
  out.note("k in {2,8,32} x 3 seeds x 3 permutations; max rounds " +
           std::to_string(worst_rounds));
}

void criterion8(Outcome& out) {
  const std::size_t n = 128;
  auto forest = ora::gen_random_forest(n, 96, 8);
  DendrogramState st(forest.num_vertices, forest.edges);

  std::vector<double> grid{-1.0};
  for (const Edge& e : forest.edges) {
    grid.push_back(e.weight.value);
    grid.push_back(std::nextafter(e.weight.value, -1e300));
    grid.push_back(std::nextafter(e.weight.value, 1e300));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  for (double tau : grid) {
    qry::ThresholdParam param{Weight(tau), false};
    auto expect = ora::uf_threshold(n, forest.edges, Weight(tau), false);
    if (qry::flat_clustering(st, param) != expect) {
      out.fail("flat clustering differs at tau=" + Weight(tau).str());
      return;
    }
    std::vector<std::size_t> cluster_of(n);
    for (std::size_t c = 0; c < expect.size(); ++c) {
      for (VertexId v : expect[c]) cluster_of[v] = c;
    }
    for (VertexId v = 0; v < n; ++v) {
      if (qry::cluster_size(st, v, param) != expect[cluster_of[v]].size()) {
        out.fail("cluster size differs at tau=" + Weight(tau).str() + " vertex " +
                 std::to_string(v));
        return;
      }
      if (qry::cluster_report(st, v, param) != expect[cluster_of[v]]) {
        out.fail("cluster report differs at tau=" + Weight(tau).str());
        return;
      }
    }
    for (VertexId s = 0; s < n; ++s) {
      for (VertexId t = 0; t < n; ++t) {
        if (qry::threshold_query(st, s, t, param) !=
            (cluster_of[s] == cluster_of[t])) {
          out.fail("threshold query differs at tau=" + Weight(tau).str());
          return;
        }
      }
    }
  }
  out.note(std::to_string(grid.size()) + " thresholds, all vertices and pairs");
}

void criterion9(Outcome& out) {
  ora::Rng rng(9);
  for (auto order : {CartesianTree::Order::min_root, CartesianTree::Order::max_root}) {
    CartesianTree tree(order);
    std::vector<double> mirror;
    std::unordered_set<std::uint64_t> used;
    auto fresh_value = [&] {
      while (true) {
        std::uint64_t raw = rng.next_below(1 << 24);
        if (used.insert(raw).second) return static_cast<double>(raw) / 8.0;
      }
    };
    for (int step = 0; step < 500; ++step) {
      std::uint64_t pick = rng.next_below(10);
      UpdateReport report;
      bool end_op = false;
      if (mirror.size() < 2 || (pick < 4 && mirror.size() < 256)) {
        double v = fresh_value();
        if (pick % 2 == 0) {
          bool back = rng.next_below(2) == 0;
          report = tree.push(back ? CartesianEnd::back : CartesianEnd::front, v);
          end_op = true;
          mirror.insert(back ? mirror.end() : mirror.begin(), v);
        } else {
          std::size_t pos = rng.next_below(mirror.size() + 1);
          report = tree.insert_at(pos, v);
          end_op = pos == 0 || pos == mirror.size();
          mirror.insert(mirror.begin() + static_cast<std::ptrdiff_t>(pos), v);
        }
      } else if (pick < 7) {
        std::size_t pos = rng.next_below(mirror.size());
        report = tree.delete_at(pos);
        end_op = pos == 0 || pos + 1 == mirror.size();
        mirror.erase(mirror.begin() + static_cast<std::ptrdiff_t>(pos));
      } else {
        bool back = rng.next_below(2) == 0;
        report = tree.pop(back ? CartesianEnd::back : CartesianEnd::front);
        end_op = true;
        if (back) {
          mirror.pop_back();
        } else {
          mirror.erase(mirror.begin());
        }
      }
      if (end_op && report.pointer_changes > 2) {
        out.fail("end operation reported " + std::to_string(report.pointer_changes) +
                 " pointer changes at step " + std::to_string(step));
        return;
      }
      if (tree.in_order() != mirror) {
        out.fail("in-order sequence diverged at step " + std::to_string(step));
        return;
      }
      try {
        tree.verify();
      } catch (const Error& e) {
        out.fail("step " + std::to_string(step) + ": " + e.what());
        return;
      }
    }
  }
  out.note("2 orders x 500 ops, exact tree and sequence equality");
}

void criterion10(Outcome& out) {
  auto forest = ora::gen_random_forest(kSoakVertices, 128, 10);
  DendrogramState st(forest.num_vertices, forest.edges);
  ora::Rng rng(100);
  for (int trial = 0; trial < 1000; ++trial) {
    UpdateMode mode = static_cast<UpdateMode>(trial % 4);
    std::string before = st.parents().serialize_canonical();
    VertexId u = 0, v = 0;
    do {
      u = static_cast<VertexId>(rng.next_below(kSoakVertices));
      v = static_cast<VertexId>(rng.next_below(kSoakVertices));
    } while (u == v || st.forest_rc().connected(u, v));
    Weight w(static_cast<double>(rng.next_below(1 << 24)) / 16.0);
    upd::insert(st, u, v, w, mode);
    upd::erase(st, u, v, mode);
    if (st.parents().serialize_canonical() != before) {
      out.fail("insert;delete failed to restore at trial " + std::to_string(trial));
      return;
    }
  }
  for (int trial = 0; trial < 1000; ++trial) {
    UpdateMode mode = static_cast<UpdateMode>(trial % 4);
    std::string before = st.parents().serialize_canonical();
    std::vector<Edge> edges;
    for (const auto& [key, w] : st.forest().edges()) edges.push_back(Edge(key, w));
    Edge pick = edges[rng.next_below(edges.size())];
    upd::erase(st, pick.key.lo, pick.key.hi, mode);
    upd::insert(st, pick.key.lo, pick.key.hi, pick.weight, mode);
    if (st.parents().serialize_canonical() != before) {
      out.fail("delete;insert failed to restore at trial " + std::to_string(trial));
      return;
    }
  }
  out.note("1000 insert;delete and 1000 delete;insert pairs, byte-exact");
}

void criterion11(Outcome& out) {
  auto run_soak = [&](unsigned hint, UpdateMode mode) {
    parallel::set_parallelism_hint(hint);
    DendrogramState st = soak_state(1);
    std::string trace;
    for (const auto& u : soak_stream(1)) {
      auto report = apply_update(st, u, mode);
      trace += std::to_string(report.pointer_changes) + ";";
    }
    trace += st.parents().serialize_canonical();
    qry::ThresholdParam tau{Weight(1000.0), false};
    for (const auto& cluster : qry::flat_clustering(st, tau)) {
      trace += std::to_string(cluster.size()) + ",";
    }
    parallel::set_parallelism_hint(1);
    return trace;
  };
  for (UpdateMode mode : {UpdateMode::par_h, UpdateMode::par_os, UpdateMode::seq_os}) {
    std::string base = run_soak(1, mode);
    for (unsigned hint : {4u, 8u}) {
      if (run_soak(hint, mode) != base) {
        out.fail(std::string("outputs changed under parallelism hint ") +
                 std::to_string(hint) + " in mode " + upd::mode_name(mode));
        return;
      }
    }
  }
  out.note("hints {1,4,8} byte-identical across par-h, par-os, seq-os");
}

}  // namespace

int main() {
  std::printf("acceptance suite: exact structural checks for the dynamic "
              "dendrogram library\n");
  criterion(1, "oracle soak across all four modes", criterion1);
  criterion(2, "star-family exact update counts and restoration", criterion2);
  criterion(3, "output-sensitive insertions: queries equal changes", criterion3);
  criterion(4, "monotone weight-search visit bound", criterion4);
  criterion(5, "work scaling of output-sensitive insertions", criterion5);
  criterion(6, "divide-and-conquer merge equality and depth", criterion6);
  criterion(7, "batch equivalence and contraction rounds", criterion7);
  criterion(8, "clustering queries against union-find", criterion8);
  criterion(9, "dynamic Cartesian trees", criterion9);
  criterion(10, "inverse updates restore the serialization", criterion10);
  criterion(11, "determinism under parallelism hints", criterion11);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
