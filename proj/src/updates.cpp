// Copyright 2026 The Dendra Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dendra/updates.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_set>

#include "dendra/parallel.hpp"

namespace dendra::updates {

namespace {

using ParentChange = DendrogramState::ParentChange;
using Clock = std::chrono::steady_clock;

RankKey node_key(const DendrogramState& state, EdgeKey e) {
  return RankKey(Edge(e, state.parents().weight(e)));
}

// Prologue/epilogue shared by every update: journal, visit counter delta,
// wall time.
class OpScope {
 public:
  OpScope(DendrogramState& state, UpdateReport& report)
      : state_(state), report_(report), start_(Clock::now()) {
    state.begin_journal();
    visits0_ = state.forest_rc().nodes_visited() + state.sld_rc().nodes_visited();
  }

  void finish(std::uint32_t height) {
    report_.pointer_changes = state_.journal_changes();
    report_.rc_nodes_visited = state_.forest_rc().nodes_visited() +
                               state_.sld_rc().nodes_visited() - visits0_;
    report_.dendrogram_height = height;
    report_.elapsed_seconds =
        std::chrono::duration<double>(Clock::now() - start_).count();
  }

 private:
  DendrogramState& state_;
  UpdateReport& report_;
  Clock::time_point start_;
  std::uint64_t visits0_;
};

bool edge_rank_less(const Edge& a, const Edge& b) { return rank_less(a, b); }

// Consecutive relink of a rank-sorted chain; the top keeps its pointer
// unless an explicit target is given.
void plan_chain(const DendrogramState& state, const std::vector<Edge>& chain,
                bool set_top, std::optional<EdgeKey> top_target,
                std::vector<ParentChange>& out) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (state.parents().parent(chain[i].key) != chain[i + 1].key) {
      out.push_back({chain[i].key, chain[i + 1].key});
    }
  }
  if (set_top && !chain.empty()) {
    if (state.parents().parent(chain.back().key) != top_target) {
      out.push_back({chain.back().key, top_target});
    }
  }
}

struct MergeCounters {
  std::uint64_t queries = 0;
  std::uint64_t changes = 0;
};

// Plain spine merge: interleave the two rank-sorted sequences and rewire
// consecutive pairs. The rank-maximum node keeps its pointer.
MergeCounters merge_plain(DendrogramState& state, const Spine& a, const Spine& b,
                          bool parallel_merge) {
  std::vector<Edge> merged =
      parallel_merge
          ? parallel::merge_sorted(a.nodes, b.nodes, edge_rank_less)
          : [&] {
              std::vector<Edge> out(a.nodes.size() + b.nodes.size());
              std::merge(a.nodes.begin(), a.nodes.end(), b.nodes.begin(),
                         b.nodes.end(), out.begin(), edge_rank_less);
              return out;
            }();
  std::vector<ParentChange> changes;
  plan_chain(state, merged, /*set_top=*/false, std::nullopt, changes);
  state.apply_parent_changes(changes, {}, {});
  return {0, changes.size()};
}

// Output-sensitive spine merge: alternate between the spines, each weight
// search pinning exactly one parent change; changes land as one batch.
MergeCounters merge_os(DendrogramState& state, EdgeKey bottom_a, EdgeKey bottom_b,
                       UpdateReport& report) {
  const RCForest& rc = state.sld_rc();
  EdgeKey root_a = state.component_root(bottom_a);
  EdgeKey root_b = state.component_root(bottom_b);
  RCForest::PwsSession session_a(rc, state.node_of(bottom_a), state.node_of(root_a));
  RCForest::PwsSession session_b(rc, state.node_of(bottom_b), state.node_of(root_b));

  RankKey key_a = node_key(state, bottom_a);
  RankKey key_b = node_key(state, bottom_b);
  // cur = the node whose child in the opposite spine is still unknown.
  EdgeKey cur = key_a < key_b ? bottom_b : bottom_a;
  RCForest::PwsSession* other = key_a < key_b ? &session_a : &session_b;
  RCForest::PwsSession* mine = key_a < key_b ? &session_b : &session_a;

  std::vector<ParentChange> changes;
  MergeCounters counters;
  while (true) {
    auto res = other->query(node_key(state, cur));
    ++counters.queries;
    if (!res.pred) {
      throw Error(ErrorCode::invalid_argument, "weight search lost the spine");
    }
    EdgeKey x = state.key_of(*res.pred);
    std::optional<EdgeKey> old = state.parents().parent(x);
    changes.push_back({x, cur});
    ++counters.changes;
    if (!old) break;
    cur = *old;
    std::swap(mine, other);
  }
  state.apply_parent_changes(changes, {}, {});
  report.max_pws_node_visits =
      std::max({report.max_pws_node_visits, session_a.max_node_visits(),
                session_b.max_node_visits()});
  return counters;
}

// ---------------------------------------------------------------------------
// Divide-and-conquer spine merge.

struct Segment {
  bool present = false;
  EdgeKey bottom, top;
};

Segment seg(EdgeKey bottom, EdgeKey top) { return {true, bottom, top}; }

struct DcContext {
  DendrogramState& state;
  UpdateReport& report;
  std::uint32_t max_depth = 0;
};

RCForest::PwsResult dc_pws(DcContext& ctx, const Segment& s, const RankKey& w) {
  ++ctx.report.pws_queries;
  return ctx.state.sld_rc().path_weight_search(ctx.state.node_of(s.bottom),
                                               ctx.state.node_of(s.top), w);
}

// Merges two disjoint rank-monotone chains that live in the dendrogram's
// RC forest; every seam pointer is written immediately. The merged top
// keeps its pointer.
void merge_dc_rec(DcContext& ctx, Segment first, Segment second, bool designate_first,
                  std::uint32_t depth) {
  if (!first.present || !second.present) return;
  ctx.max_depth = std::max(ctx.max_depth, depth);

  DendrogramState& st = ctx.state;
  const Segment& x = designate_first ? first : second;
  const Segment& y = designate_first ? second : first;

  ++ctx.report.median_queries;
  VertexId median_node =
      st.sld_rc().path_median(st.node_of(x.bottom), st.node_of(x.top));
  RankKey wm = node_key(st, st.key_of(median_node));

  auto q1 = dc_pws(ctx, y, wm);
  std::optional<EdgeKey> xv =
      q1.pred ? std::optional(st.key_of(*q1.pred)) : std::nullopt;
  std::optional<EdgeKey> yv =
      q1.succ ? std::optional(st.key_of(*q1.succ)) : std::nullopt;

  std::optional<EdgeKey> xu, mid_bottom, mid_top, yu;
  if (xv) {
    auto q2 = dc_pws(ctx, x, node_key(st, *xv));
    xu = q2.pred ? std::optional(st.key_of(*q2.pred)) : std::nullopt;
    mid_bottom = q2.succ ? std::optional(st.key_of(*q2.succ)) : std::nullopt;
  } else {
    mid_bottom = x.bottom;
  }
  if (yv) {
    auto q3 = dc_pws(ctx, x, node_key(st, *yv));
    mid_top = q3.pred ? std::optional(st.key_of(*q3.pred)) : std::nullopt;
    yu = q3.succ ? std::optional(st.key_of(*q3.succ)) : std::nullopt;
  } else {
    mid_top = x.top;
  }
  bool has_mid = mid_bottom && mid_top &&
                 !(node_key(st, *mid_top) < node_key(st, *mid_bottom));

  // Seam pointers at this level.
  if (xv) {
    if (has_mid) {
      st.set_parent_immediate(*xv, *mid_bottom);
    } else if (yv) {
      st.set_parent_immediate(*xv, *yv);
    } else if (yu) {
      st.set_parent_immediate(*xv, *yu);
    }
    // Otherwise xv is the merged top and keeps its pointer.
  }
  if (has_mid && yv) st.set_parent_immediate(*mid_top, *yv);

  Segment x_low = xu ? seg(x.bottom, *xu) : Segment{};
  Segment y_low = xv ? seg(y.bottom, *xv) : Segment{};
  Segment x_up = yu ? seg(*yu, x.top) : Segment{};
  Segment y_up = yv ? seg(*yv, y.top) : Segment{};

  parallel::invoke(
      [&] {
        merge_dc_rec(ctx, designate_first ? x_low : y_low,
                     designate_first ? y_low : x_low, !designate_first, depth + 1);
      },
      [&] {
        merge_dc_rec(ctx, designate_first ? x_up : y_up,
                     designate_first ? y_up : x_up, !designate_first, depth + 1);
      });
}

MergeCounters merge_dc(DendrogramState& state, EdgeKey bottom_a, EdgeKey bottom_b,
                       UpdateReport& report) {
  DcContext ctx{state, report};
  Segment a = seg(bottom_a, state.component_root(bottom_a));
  Segment b = seg(bottom_b, state.component_root(bottom_b));
  std::uint64_t before = state.journal_changes();
  merge_dc_rec(ctx, a, b, /*designate_first=*/true, 1);
  report.dc_recursion_depth = std::max(report.dc_recursion_depth, ctx.max_depth);
  return {0, state.journal_changes() - before};
}

// Shared merge dispatch; bottoms identify the two spines.
MergeCounters run_merge(DendrogramState& state, UpdateReport& report,
                        EdgeKey bottom_a, EdgeKey bottom_b, UpdateMode mode) {
  auto spine_len = [&](EdgeKey bottom) {
    EdgeKey root = state.component_root(bottom);
    return static_cast<std::uint32_t>(
        state.sld_rc()
            .path_decomposition(state.node_of(bottom), state.node_of(root))
            .total_length);
  };
  MergeCounters counters;
  switch (mode) {
    case UpdateMode::seq_h:
    case UpdateMode::par_h: {
      Spine a = state.extract_spine(bottom_a);
      Spine b = state.extract_spine(bottom_b);
      report.spine_lengths.push_back(static_cast<std::uint32_t>(a.size()));
      report.spine_lengths.push_back(static_cast<std::uint32_t>(b.size()));
      counters = merge_plain(state, a, b, mode == UpdateMode::par_h);
      break;
    }
    case UpdateMode::seq_os: {
      report.spine_lengths.push_back(spine_len(bottom_a));
      report.spine_lengths.push_back(spine_len(bottom_b));
      counters = merge_os(state, bottom_a, bottom_b, report);
      report.pws_queries += counters.queries;
      break;
    }
    case UpdateMode::par_os: {
      report.spine_lengths.push_back(spine_len(bottom_a));
      report.spine_lengths.push_back(spine_len(bottom_b));
      counters = merge_dc(state, bottom_a, bottom_b, report);
      break;
    }
  }
  report.merge_pws_queries.push_back(counters.queries);
  report.merge_pointer_changes.push_back(counters.changes);
  return counters;
}

}  // namespace

const char* mode_name(UpdateMode mode) {
  switch (mode) {
    case UpdateMode::seq_h: return "seq-h";
    case UpdateMode::seq_os: return "seq-os";
    case UpdateMode::par_h: return "par-h";
    case UpdateMode::par_os: return "par-os";
  }
  return "?";
}

std::optional<UpdateMode> parse_mode(const std::string& name) {
  if (name == "seq-h") return UpdateMode::seq_h;
  if (name == "seq-os") return UpdateMode::seq_os;
  if (name == "par-h") return UpdateMode::par_h;
  if (name == "par-os") return UpdateMode::par_os;
  return std::nullopt;
}

UpdateReport insert(DendrogramState& state, VertexId u, VertexId v, Weight w,
                    UpdateMode mode) {
  state.forest().check_vertex(u);
  state.forest().check_vertex(v);
  EdgeKey key(u, v);
  if (state.forest().has_edge(key)) {
    throw Error(ErrorCode::duplicate_rank_key, "edge " + key.str() + " exists");
  }
  if (state.forest_rc().connected(u, v)) {
    throw Error(ErrorCode::would_create_cycle,
                "endpoints of " + key.str() + " are already connected");
  }
  UpdateReport report;
  OpScope scope(state, report);
  auto eu = state.forest().min_incident_edge(u);
  auto ev = state.forest().min_incident_edge(v);
  Edge e(key, w);
  state.forest_add_edge(e);
  state.apply_parent_changes({}, {e}, {});
  if (eu) run_merge(state, report, eu->key, key, mode);
  if (ev) run_merge(state, report, ev->key, key, mode);
  scope.finish(state.height(key));
  return report;
}

UpdateReport insert_output_sensitive(DendrogramState& state, VertexId u,
                                     VertexId v, Weight w) {
  return insert(state, u, v, w, UpdateMode::seq_os);
}

namespace {

// Spine unmerge for one deleted edge: filter each characteristic spine by
// the side of the cut and relink the survivors in order. Targets are
// accumulated so overlapping spines (batch deletions) stay consistent.
void plan_unmerge(DendrogramState& state, UpdateReport& report, VertexId anchor,
                  std::optional<Edge> min_edge,
                  const std::unordered_set<EdgeKey, EdgeKeyHash>& removed,
                  bool parallel_filter,
                  std::unordered_map<EdgeKey, std::optional<EdgeKey>, EdgeKeyHash>&
                      targets) {
  if (!min_edge) return;
  Spine spine = state.extract_spine(min_edge->key);
  report.spine_lengths.push_back(static_cast<std::uint32_t>(spine.size()));

  std::vector<std::pair<VertexId, VertexId>> pairs;
  pairs.reserve(spine.size());
  for (const Edge& x : spine.nodes) pairs.push_back({x.key.lo, anchor});
  std::vector<bool> same_side = state.forest_rc().batch_connected(pairs);

  std::vector<std::size_t> index(spine.size());
  for (std::size_t i = 0; i < spine.size(); ++i) index[i] = i;
  auto keep = [&](std::size_t i) {
    return same_side[i] && !removed.count(spine.nodes[i].key);
  };
  std::vector<std::size_t> kept =
      parallel_filter ? parallel::filter(index, keep) : [&] {
        std::vector<std::size_t> out;
        for (std::size_t i : index) {
          if (keep(i)) out.push_back(i);
        }
        return out;
      }();

  for (std::size_t i = 0; i < kept.size(); ++i) {
    EdgeKey child = spine.nodes[kept[i]].key;
    std::optional<EdgeKey> target =
        i + 1 < kept.size() ? std::optional(spine.nodes[kept[i + 1]].key)
                            : std::nullopt;
    if (state.parents().parent(child) == target) continue;
    auto [it, inserted] = targets.emplace(child, target);
    if (!inserted && it->second != target) {
      throw Error(ErrorCode::invalid_argument, "conflicting unmerge targets");
    }
  }
}

UpdateReport erase_batch_impl(DendrogramState& state,
                              const std::vector<EdgeKey>& keys, UpdateMode mode) {
  for (EdgeKey key : keys) {
    if (!state.forest().has_edge(key)) {
      throw Error(ErrorCode::no_such_edge, "edge " + key.str() + " not present");
    }
  }
  std::unordered_set<EdgeKey, EdgeKeyHash> removed(keys.begin(), keys.end());
  if (removed.size() != keys.size()) {
    throw Error(ErrorCode::no_such_edge, "batch repeats an edge");
  }
  UpdateReport report;
  OpScope scope(state, report);
  state.forest_batch_remove(keys);

  bool par = mode == UpdateMode::par_h || mode == UpdateMode::par_os;
  std::unordered_map<EdgeKey, std::optional<EdgeKey>, EdgeKeyHash> targets;
  std::vector<std::optional<Edge>> minima;
  for (EdgeKey key : keys) {
    // Characteristic spines of the minimum-rank edges on both sides of
    // the cut; run as independent subtasks over the post-cut forest.
    auto eu = state.forest().min_incident_edge(key.lo);
    auto ev = state.forest().min_incident_edge(key.hi);
    plan_unmerge(state, report, key.lo, eu, removed, par, targets);
    plan_unmerge(state, report, key.hi, ev, removed, par, targets);
    minima.push_back(eu);
    minima.push_back(ev);
  }
  std::vector<ParentChange> changes;
  changes.reserve(targets.size());
  for (const auto& [child, target] : targets) changes.push_back({child, target});
  std::sort(changes.begin(), changes.end(),
            [](const ParentChange& a, const ParentChange& b) {
              return a.child < b.child;
            });
  state.apply_parent_changes(changes, {}, keys);

  std::uint32_t height = 0;
  for (const auto& m : minima) {
    if (m) height = std::max(height, state.height(m->key));
  }
  scope.finish(height);
  return report;
}

}  // namespace

UpdateReport erase(DendrogramState& state, VertexId u, VertexId v,
                   UpdateMode mode) {
  state.forest().check_vertex(u);
  state.forest().check_vertex(v);
  return erase_batch_impl(state, {EdgeKey(u, v)}, mode);
}

UpdateReport batch_erase(DendrogramState& state, const std::vector<EdgeKey>& keys) {
  return erase_batch_impl(state, keys, UpdateMode::par_h);
}

UpdateReport merge_spines(DendrogramState& state, const Spine& a, const Spine& b,
                          UpdateMode mode) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::invalid_argument, "spines must be non-empty");
  }
  if (state.component_root(a.nodes[0].key) == state.component_root(b.nodes[0].key)) {
    throw Error(ErrorCode::same_component,
                "spines share a dendrogram component");
  }
  UpdateReport report;
  OpScope scope(state, report);
  run_merge(state, report, a.nodes[0].key, b.nodes[0].key, mode);
  scope.finish(state.height(a.nodes[0].key));
  return report;
}

UpdateReport merge_spines_dc(DendrogramState& state, const Spine& a,
                             const Spine& b) {
  return merge_spines(state, a, b, UpdateMode::par_os);
}

// ---------------------------------------------------------------------------
// Star merge and batch insertion.

StarMergePlan build_star_plan(DendrogramState& state, std::vector<Edge> star_edges,
                              UpdateReport& report) {
  if (star_edges.empty()) {
    throw Error(ErrorCode::not_a_star, "star without edges");
  }
  StarMergePlan plan;

  // The center component: the one shared by all batch edges.
  VertexId center_rep = kNoVertex;
  {
    auto rep = [&](VertexId x) { return state.forest_rc().representative(x); };
    if (star_edges.size() == 1) {
      center_rep = rep(star_edges[0].key.lo);
    } else {
      VertexId a0 = rep(star_edges[0].key.lo), b0 = rep(star_edges[0].key.hi);
      VertexId a1 = rep(star_edges[1].key.lo), b1 = rep(star_edges[1].key.hi);
      if (a0 == a1 || a0 == b1) {
        center_rep = a0;
      } else if (b0 == a1 || b0 == b1) {
        center_rep = b0;
      } else {
        throw Error(ErrorCode::not_a_star, "edges do not share a component");
      }
    }
    for (const Edge& e : star_edges) {
      if (rep(e.key.lo) != center_rep && rep(e.key.hi) != center_rep) {
        throw Error(ErrorCode::not_a_star, "edge outside the star");
      }
    }
  }

  for (const Edge& e : star_edges) {
    StarMergePlan::Leaf leaf;
    leaf.batch_edge = e;
    bool lo_center = state.forest_rc().representative(e.key.lo) == center_rep;
    leaf.center_vertex = lo_center ? e.key.lo : e.key.hi;
    leaf.leaf_vertex = lo_center ? e.key.hi : e.key.lo;
    plan.leaves.push_back(leaf);
  }

  // Center-side characteristic spines, before any mutation.
  for (auto& leaf : plan.leaves) {
    auto ec = state.forest().min_incident_edge(leaf.center_vertex);
    if (ec) leaf.center_spine = state.extract_spine(ec->key);
    report.spine_lengths.push_back(
        static_cast<std::uint32_t>(leaf.center_spine.size()));
  }

  // Merge each new edge node into its leaf dendrogram, then take the
  // leaf-side characteristic spine (which now contains the new node).
  for (auto& leaf : plan.leaves) {
    auto el = state.forest().min_incident_edge(leaf.leaf_vertex);
    state.apply_parent_changes({}, {leaf.batch_edge}, {});
    if (el) {
      Spine a = state.extract_spine(el->key);
      Spine b;
      b.nodes.push_back(leaf.batch_edge);
      merge_plain(state, a, b, /*parallel_merge=*/false);
    }
    leaf.spine = state.extract_spine(leaf.batch_edge.key);
    report.spine_lengths.push_back(static_cast<std::uint32_t>(leaf.spine.size()));
  }

  // The union of the center-side spines, its branching nodes, and the
  // segments obtained by splitting below every branching node.
  std::unordered_map<EdgeKey, std::unordered_set<EdgeKey, EdgeKeyHash>, EdgeKeyHash>
      union_children;
  std::unordered_set<EdgeKey, EdgeKeyHash> union_nodes;
  for (const auto& leaf : plan.leaves) {
    const auto& nodes = leaf.center_spine.nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      union_nodes.insert(nodes[i].key);
      if (i + 1 < nodes.size()) union_children[nodes[i + 1].key].insert(nodes[i].key);
    }
  }
  std::unordered_set<EdgeKey, EdgeKeyHash> branches;
  for (const auto& [node, kids] : union_children) {
    if (kids.size() == 2) branches.insert(node);
  }
  plan.branch_nodes.assign(branches.begin(), branches.end());
  std::sort(plan.branch_nodes.begin(), plan.branch_nodes.end());

  // Segment bottoms: union leaves (no union-children) and branch nodes.
  std::unordered_map<EdgeKey, std::size_t, EdgeKeyHash> segment_of;
  for (EdgeKey bottom : union_nodes) {
    bool is_leaf = union_children.find(bottom) == union_children.end();
    if (!is_leaf && !branches.count(bottom)) continue;
    StarMergePlan::Segment segment;
    EdgeKey cur = bottom;
    while (true) {
      segment.nodes.push_back(Edge(cur, state.parents().weight(cur)));
      auto up = state.parents().parent(cur);
      if (!up || branches.count(*up)) {
        if (up) segment.branch_above = *up;
        break;
      }
      cur = *up;
    }
    for (const Edge& n : segment.nodes) segment_of[n.key] = plan.segments.size();
    plan.segments.push_back(std::move(segment));
  }

  // Split every leaf spine at its branch nodes and group the subspines.
  plan.groups.resize(plan.segments.size() + 1);  // last: center has no edges
  for (const auto& leaf : plan.leaves) {
    std::vector<EdgeKey> splits;  // branch nodes on this center spine, ascending
    for (const Edge& n : leaf.center_spine.nodes) {
      if (branches.count(n.key)) splits.push_back(n.key);
    }
    std::size_t split_idx = 0;
    std::vector<Edge> run;
    // The segment receiving the current run: below the first branch it is
    // the segment of the center spine's bottom node.
    auto flush = [&](std::size_t seg_idx) {
      if (!run.empty()) {
        plan.groups[seg_idx].push_back(std::move(run));
        run.clear();
      }
    };
    auto seg_below = [&](std::size_t idx) {
      // Segment holding the stretch of the center spine just below split idx:
      // for the first split this is the spine's bottom segment, afterwards
      // the segment whose bottom is the previous branch node.
      if (leaf.center_spine.empty()) return plan.segments.size();
      if (idx == 0) return segment_of.at(leaf.center_spine.nodes[0].key);
      return segment_of.at(splits[idx - 1]);
    };
    for (const Edge& node : leaf.spine.nodes) {
      while (split_idx < splits.size() &&
             node_key(state, splits[split_idx]) < RankKey(node)) {
        flush(seg_below(split_idx));
        ++split_idx;
      }
      run.push_back(node);
    }
    flush(seg_below(split_idx));
  }
  return plan;
}

void star_merge(DendrogramState& state, const StarMergePlan& plan,
                UpdateReport& report) {
  std::vector<ParentChange> changes;
  for (std::size_t s = 0; s < plan.groups.size(); ++s) {
    const auto& group = plan.groups[s];
    bool has_segment = s < plan.segments.size();
    if (group.empty()) continue;  // untouched segment keeps its chain

    // Balanced reduction of pairwise rank-ordered merges.
    std::vector<std::vector<Edge>> seqs = group;
    if (has_segment) seqs.push_back(plan.segments[s].nodes);
    while (seqs.size() > 1) {
      std::vector<std::vector<Edge>> next;
      for (std::size_t i = 0; i + 1 < seqs.size(); i += 2) {
        next.push_back(parallel::merge_sorted(seqs[i], seqs[i + 1], edge_rank_less));
      }
      if (seqs.size() % 2 == 1) next.push_back(std::move(seqs.back()));
      seqs = std::move(next);
    }
    std::optional<EdgeKey> top_target =
        has_segment ? plan.segments[s].branch_above : std::nullopt;
    plan_chain(state, seqs[0], /*set_top=*/true, top_target, changes);
  }
  state.apply_parent_changes(changes, {}, {});
  std::vector<Edge> forest_edges;
  for (const auto& leaf : plan.leaves) forest_edges.push_back(leaf.batch_edge);
  state.forest_batch_add(forest_edges);
  (void)report;
}

UpdateReport batch_insert(DendrogramState& state, const std::vector<Edge>& edges) {
  // Atomic validation: keys unique and absent, endpoints valid, and the
  // whole batch keeps the forest acyclic.
  {
    std::unordered_set<EdgeKey, EdgeKeyHash> seen;
    std::unordered_map<VertexId, VertexId> comp;
    auto find = [&](VertexId x) {
      VertexId cur = state.forest_rc().representative(x);
      while (true) {
        auto it = comp.find(cur);
        if (it == comp.end() || it->second == cur) return cur;
        cur = it->second;
      }
    };
    std::string offenders;
    for (const Edge& e : edges) {
      state.forest().check_vertex(e.key.lo);
      state.forest().check_vertex(e.key.hi);
      if (state.forest().has_edge(e.key) || !seen.insert(e.key).second) {
        throw Error(ErrorCode::duplicate_rank_key, "edge " + e.key.str() + " repeats");
      }
      VertexId a = find(e.key.lo), b = find(e.key.hi);
      if (a == b) {
        offenders += " " + e.key.str();
        continue;
      }
      comp[a] = b;
    }
    if (!offenders.empty()) {
      throw Error(ErrorCode::would_create_cycle,
                  "batch closes a cycle:" + offenders);
    }
  }

  UpdateReport report;
  OpScope scope(state, report);

  // Incidence forest: one vertex per component, one edge per batch edge.
  // Each round contracts an independent set of low-degree components into
  // chosen neighbors; every contraction target hosts one star merge.
  std::vector<Edge> pending(edges.begin(), edges.end());
  std::uint32_t round = 0;
  while (!pending.empty()) {
    std::unordered_map<VertexId, std::vector<std::size_t>> incident;
    auto rep = [&](VertexId x) { return state.forest_rc().representative(x); };
    std::vector<std::pair<VertexId, VertexId>> ends(pending.size());
    for (std::size_t i = 0; i < pending.size(); ++i) {
      ends[i] = {rep(pending[i].key.lo), rep(pending[i].key.hi)};
      incident[ends[i].first].push_back(i);
      incident[ends[i].second].push_back(i);
    }
    auto prio = [&](VertexId comp) {
      std::uint64_t x = (static_cast<std::uint64_t>(round) << 32) ^ comp;
      x ^= x >> 33;
      x *= 0x9e3779b97f4a7c15ULL;
      x ^= x >> 29;
      return x;
    };
    auto eligible = [&](VertexId comp) { return incident.at(comp).size() <= 2; };
    // Stars keyed by center: contracting components attach through their
    // connecting edge.
    std::unordered_map<VertexId, std::vector<std::size_t>> stars;
    std::unordered_set<std::size_t> applied;
    std::vector<VertexId> comps;
    comps.reserve(incident.size());
    for (const auto& [comp, edge_list] : incident) comps.push_back(comp);
    std::sort(comps.begin(), comps.end());
    for (VertexId comp : comps) {
      if (!eligible(comp)) continue;
      bool is_min = true;
      VertexId target = kNoVertex;
      for (std::size_t ei : incident.at(comp)) {
        VertexId other = ends[ei].first == comp ? ends[ei].second : ends[ei].first;
        if (eligible(other)) {
          auto po = prio(other), pc = prio(comp);
          if (po < pc || (po == pc && other < comp)) is_min = false;
        }
        if (target == kNoVertex || other < target) target = other;
      }
      if (!is_min) continue;
      // Contract along the edge to the chosen neighbor.
      for (std::size_t ei : incident.at(comp)) {
        VertexId other = ends[ei].first == comp ? ends[ei].second : ends[ei].first;
        if (other == target && !applied.count(ei)) {
          stars[target].push_back(ei);
          applied.insert(ei);
          break;
        }
      }
    }
    if (applied.empty()) {
      throw Error(ErrorCode::invalid_argument, "contraction stalled");
    }
    std::vector<VertexId> centers;
    centers.reserve(stars.size());
    for (const auto& [center, edge_ids] : stars) centers.push_back(center);
    std::sort(centers.begin(), centers.end());
    for (VertexId center : centers) {
      std::vector<Edge> star_edges;
      for (std::size_t ei : stars.at(center)) star_edges.push_back(pending[ei]);
      StarMergePlan plan = build_star_plan(state, star_edges, report);
      star_merge(state, plan, report);
    }
    std::vector<Edge> rest;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (!applied.count(i)) rest.push_back(pending[i]);
    }
    pending = std::move(rest);
    ++round;
  }
  report.contraction_rounds = round;

  std::uint32_t height = 0;
  for (const Edge& e : edges) height = std::max(height, state.height(e.key));
  scope.finish(height);
  return report;
}

}  // namespace dendra::updates
