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

#include "dendra/queries.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace dendra::queries {

namespace {

// The dendrogram node bounding u's cluster: the highest node on the spine
// of u's minimum incident edge whose rank falls below the threshold.
std::optional<EdgeKey> cluster_boundary_node(const DendrogramState& state,
                                             VertexId u, ThresholdParam tau) {
  auto min_edge = state.forest().min_incident_edge(u);
  if (!min_edge) return std::nullopt;
  EdgeKey root = state.component_root(min_edge->key);
  auto res = state.sld_rc().path_weight_search(
      state.node_of(min_edge->key), state.node_of(root), tau.boundary());
  if (!res.pred) return std::nullopt;
  return state.key_of(*res.pred);
}

void collect_subtree_vertices(const DendrogramState& state, EdgeKey top,
                              std::unordered_set<VertexId>& out) {
  std::deque<EdgeKey> queue{top};
  while (!queue.empty()) {
    EdgeKey cur = queue.front();
    queue.pop_front();
    out.insert(cur.lo);
    out.insert(cur.hi);
    for (EdgeKey child : state.children(cur)) queue.push_back(child);
  }
}

}  // namespace

bool threshold_query(const DendrogramState& state, VertexId s, VertexId t,
                     ThresholdParam tau) {
  state.forest().check_vertex(s);
  state.forest().check_vertex(t);
  if (s == t) return true;
  if (!state.forest_rc().connected(s, t)) return false;
  RankKey max_edge = state.forest_rc().path_max_edge(s, t);
  return max_edge < tau.boundary();
}

std::uint32_t cluster_size(const DendrogramState& state, VertexId u,
                           ThresholdParam tau) {
  state.forest().check_vertex(u);
  auto boundary = cluster_boundary_node(state, u, tau);
  if (!boundary) return 1;
  // An edge-node subtree of m nodes spans m+1 vertices.
  EdgeKey root = state.component_root(*boundary);
  std::uint32_t m =
      state.sld_rc().subtree_size(state.node_of(root), state.node_of(*boundary));
  return m + 1;
}

std::vector<VertexId> cluster_report(const DendrogramState& state, VertexId u,
                                     ThresholdParam tau) {
  state.forest().check_vertex(u);
  auto boundary = cluster_boundary_node(state, u, tau);
  if (!boundary) return {u};
  std::unordered_set<VertexId> members;
  collect_subtree_vertices(state, *boundary, members);
  std::vector<VertexId> out(members.begin(), members.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<VertexId>> flat_clustering(const DendrogramState& state,
                                                   ThresholdParam tau) {
  RankKey bound = tau.boundary();
  std::vector<std::vector<VertexId>> clusters;
  std::unordered_set<VertexId> clustered;
  for (const auto& [key, entry] : state.parents().entries()) {
    if (!(RankKey(Edge(key, entry.weight)) < bound)) continue;
    bool topmost = true;
    if (entry.parent) {
      RankKey parent_key(Edge(*entry.parent, state.parents().weight(*entry.parent)));
      topmost = !(parent_key < bound);
    }
    if (!topmost) continue;
    std::unordered_set<VertexId> members;
    collect_subtree_vertices(state, key, members);
    std::vector<VertexId> cluster(members.begin(), members.end());
    std::sort(cluster.begin(), cluster.end());
    clustered.insert(cluster.begin(), cluster.end());
    clusters.push_back(std::move(cluster));
  }
  for (VertexId v = 0; v < state.forest().num_vertices(); ++v) {
    if (!clustered.count(v)) clusters.push_back({v});
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return clusters;
}

}  // namespace dendra::queries
