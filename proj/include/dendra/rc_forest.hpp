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
//
// A rake-compress forest over an arbitrary weighted tree. The structure
// records rounds of deterministic tree contraction: in every round each
// vertex of degree <= 2 contracts when its priority is a strict local
// minimum among its contraction-eligible neighbors. Updates re-run the
// contraction only where the previous run is invalidated, reusing every
// unaffected cluster.

#ifndef DENDRA_RC_FOREST_HPP
#define DENDRA_RC_FOREST_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dendra/core.hpp"

namespace dendra {

class RCForest {
 public:
  using Idx = std::int32_t;
  static constexpr Idx kNone = -1;

  enum class ClusterKind : std::uint8_t { vertex, edge, unary, binary, root };

  struct PathCluster {
    Idx cluster;
    VertexId near;  // boundary on the u end of the queried path
    VertexId far;   // boundary on the v end
  };

  // O(log n) binary clusters whose disjoint cluster paths, joined at the
  // joint vertices, form exactly the tree path from u to v.
  struct PathDecomposition {
    std::vector<PathCluster> clusters;
    std::vector<VertexId> joints;  // joints.size() == clusters.size() + 1
    std::uint64_t total_length = 0;  // number of vertices on the path
  };

  struct PwsResult {
    std::optional<VertexId> pred;  // max-weight vertex with weight < w
    std::optional<VertexId> succ;  // min-weight vertex with weight > w
  };

  explicit RCForest(std::size_t num_vertices = 0);

  VertexId add_vertex(RankKey vertex_weight);
  VertexId add_vertex();
  void remove_vertex(VertexId v);  // must be isolated
  bool vertex_alive(VertexId v) const;
  std::size_t num_vertex_slots() const { return vertices_.size(); }

  RankKey vertex_weight(VertexId v) const;

  void link(VertexId u, VertexId v, RankKey edge_weight);
  void link(VertexId u, VertexId v);
  void cut(VertexId u, VertexId v);
  bool has_edge(VertexId u, VertexId v) const;

  struct LinkSpec {
    VertexId u;
    VertexId v;
    RankKey weight;
  };
  // Atomic: the whole batch is validated before any mutation, and the
  // final state matches any sequential application order.
  void batch_link(const std::vector<LinkSpec>& links);
  void batch_cut(const std::vector<std::pair<VertexId, VertexId>>& cuts);

  bool connected(VertexId u, VertexId v) const;
  // Stable component id: the minimum vertex id in the component.
  VertexId representative(VertexId u) const;
  std::vector<bool> batch_connected(
      const std::vector<std::pair<VertexId, VertexId>>& pairs) const;

  std::uint32_t component_size(VertexId u) const;
  // The vertex carrying the maximum vertex weight in u's component.
  VertexId component_weight_argmax(VertexId u) const;

  PathDecomposition path_decomposition(VertexId u, VertexId v) const;
  std::vector<VertexId> extract_path(VertexId u, VertexId v) const;
  RankKey path_max_edge(VertexId u, VertexId v) const;
  VertexId path_median(VertexId u, VertexId v) const;
  // Vertices in the subtree hanging at v, away from the component root r.
  std::uint32_t subtree_size(VertexId root, VertexId v) const;

  PwsResult path_weight_search(VertexId u, VertexId v, const RankKey& w) const;

  // Resumable search session over a fixed weight-monotone path. Queries
  // must be issued in strictly increasing weight order; the traversal
  // resumes from where the previous query finished, so each hierarchy
  // node is stepped onto at most twice over the session's lifetime.
  class PwsSession {
   public:
    PwsSession(const RCForest& rc, VertexId u, VertexId v);
    PwsResult query(const RankKey& w);
    std::uint32_t max_node_visits() const { return max_visits_; }
    std::uint64_t queries_issued() const { return queries_; }

   private:
    struct Element {
      bool is_joint;
      VertexId joint = kNoVertex;
      RankKey joint_key;
      Idx cluster = kNone;
      VertexId near = kNoVertex;
      bool has_interior = false;
      RankKey vmin, vmax;
      VertexId argmin = kNoVertex, argmax = kNoVertex;
    };
    struct Frame {
      Idx cluster;
      VertexId near;                  // path-orientation near boundary
      std::optional<VertexId> pred_ctx;
      std::optional<VertexId> succ_ctx;
      RankKey hi_key;                 // weight of the first vertex above this region
      bool hi_open = false;           // true when nothing lies above the region
    };

    void visit(Idx c);
    PwsResult descend_loop(Idx cluster, VertexId near,
                           std::optional<VertexId> pred_ctx,
                           std::optional<VertexId> succ_ctx, const RankKey& w);
    PwsResult resume_frame(const Frame& frame, const RankKey& w);

    const RCForest* rc_;
    std::vector<Element> elements_;
    std::size_t top_pos_ = 0;
    std::optional<VertexId> top_pred_;
    std::vector<Frame> stack_;
    bool first_ = true;
    RankKey last_w_;
    std::uint64_t queries_ = 0;
    std::unordered_map<Idx, std::uint32_t> visit_counts_;
    std::uint32_t max_visits_ = 0;
  };

  struct BatchPwsResult {
    std::vector<PwsResult> results;
    std::uint32_t max_node_visits = 0;
  };
  BatchPwsResult pws_monotone_batch(VertexId u, VertexId v,
                                    const std::vector<RankKey>& ws) const;

  // Instrumentation: hierarchy nodes touched by queries and rebuilds.
  std::uint64_t nodes_visited() const { return visits_; }
  void reset_nodes_visited() { visits_ = 0; }

  // Number of contraction levels currently in use.
  std::uint32_t hierarchy_height() const;
  // Loose sanity bound asserted by tests; empirical, not theoretical.
  static std::uint32_t max_height(std::size_t n);

  // Full audit of hierarchy invariants and aggregates; test support.
  void audit() const;
  std::string debug_dump() const;

 private:
  struct Agg {
    bool has = false;
    RankKey min_key, max_key;
    VertexId argmin = kNoVertex, argmax = kNoVertex;

    void merge_value(const RankKey& k, VertexId v);
    void merge(const Agg& other);
  };

  struct Cluster {
    ClusterKind kind = ClusterKind::vertex;
    bool dead = true;
    std::int32_t round = -1;   // formation round; -1 for base clusters
    VertexId rep = kNoVertex;  // contracted vertex (vertex id for bases)
    Idx parent = kNone;
    VertexId bound[2] = {kNoVertex, kNoVertex};
    std::vector<Idx> children;

    std::uint32_t size = 0;      // base vertices contained (boundaries excluded)
    std::uint32_t path_len = 0;  // interior vertices of the cluster path
    Agg path_v;                  // vertex weights on the cluster path interior
    Agg all_v;                   // vertex weights over all contained vertices
    RankKey path_emax;           // max edge weight on the cluster path
    bool has_path_emax = false;
    VertexId min_vertex = kNoVertex;  // min contained base vertex id
  };

  struct Half {
    VertexId nbr;
    Idx edge;
    friend bool operator==(const Half& a, const Half& b) {
      return a.nbr == b.nbr && a.edge == b.edge;
    }
  };

  struct RoundVertex {
    std::vector<Half> nbrs;     // sorted by neighbor id
    std::vector<Idx> unaries;   // sorted by rep vertex id
    Idx built = kNone;          // cluster formed by this vertex at this round

    friend bool operator==(const RoundVertex& a, const RoundVertex& b) {
      return a.nbrs == b.nbrs && a.unaries == b.unaries;
    }
  };

  struct VertexSlot {
    bool alive = false;
    RankKey weight;
    Idx base = kNone;
  };

  using RoundMap = std::unordered_map<VertexId, RoundVertex>;
  using OldEntries = std::unordered_map<VertexId, std::optional<RoundVertex>>;

  static std::uint64_t priority(VertexId v, std::uint32_t round);
  static std::uint64_t pack_edge(VertexId u, VertexId v);

  Idx alloc_cluster();
  void retire_cluster(Idx c);
  void free_retired();

  const Cluster& cl(Idx i) const { return clusters_[i]; }
  Cluster& cl(Idx i) { return clusters_[i]; }

  bool eligible(const RoundMap& round, VertexId v) const;
  bool decide_contract(const RoundMap& round, VertexId v, std::uint32_t r) const;
  void compute_aggregates(Cluster& c) const;
  // Builds the contraction cluster spec for v at round r; children sorted
  // canonically (vertex base, binary children by far-boundary weight,
  // unaries by rep id).
  Cluster make_build(const RoundMap& round, VertexId v, std::uint32_t r) const;
  bool build_matches(Idx built, const Cluster& spec) const;

  void propagate(std::unordered_set<VertexId> dirty, OldEntries old_entries);

  Idx top_cluster(VertexId u) const;  // root cluster of u's component
  std::vector<Idx> parent_chain(Idx from) const;

  // Fragment bookkeeping for path decompositions.
  struct Fragments {
    std::optional<std::vector<PathCluster>> to[2];
    VertexId bound[2] = {kNoVertex, kNoVertex};
    std::optional<std::vector<PathCluster>> take(VertexId b) const;
  };
  Fragments climb_fragments(Idx child, Idx parent, Fragments frags) const;

  Idx near_side_child(Idx cluster, VertexId near) const;
  void unpack_path(Idx cluster, VertexId near, std::vector<VertexId>& out) const;
  Idx first_edge_towards(const PathDecomposition& pd) const;

  void mutate_link(VertexId u, VertexId v, RankKey w,
                   std::unordered_set<VertexId>& dirty, OldEntries& old_entries);
  void mutate_cut(VertexId u, VertexId v, std::unordered_set<VertexId>& dirty,
                  OldEntries& old_entries);

  std::vector<VertexSlot> vertices_;
  std::vector<Cluster> clusters_;
  std::vector<Idx> free_list_;
  std::vector<Idx> pending_free_;
  std::vector<RoundMap> rounds_;
  std::unordered_map<std::uint64_t, Idx> base_edges_;
  std::size_t alive_vertices_ = 0;
  mutable std::uint64_t visits_ = 0;
};

}  // namespace dendra

#endif  // DENDRA_RC_FOREST_HPP
