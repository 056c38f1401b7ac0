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

#ifndef DENDRA_CORE_HPP
#define DENDRA_CORE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "dendra/errors.hpp"

namespace dendra {

using VertexId = std::uint32_t;

constexpr VertexId kNoVertex = static_cast<VertexId>(-1);

// A finite 64-bit edge weight. Smaller weights merge earlier.
struct Weight {
  double value = 0.0;

  Weight() = default;
  explicit Weight(double v);  // rejects non-finite values

  friend bool operator==(Weight a, Weight b) { return a.value == b.value; }
  friend bool operator!=(Weight a, Weight b) { return a.value != b.value; }
  friend bool operator<(Weight a, Weight b) { return a.value < b.value; }
  friend bool operator<=(Weight a, Weight b) { return a.value <= b.value; }
  friend bool operator>(Weight a, Weight b) { return a.value > b.value; }
  friend bool operator>=(Weight a, Weight b) { return a.value >= b.value; }

  // Shortest decimal form that round-trips bit-exactly.
  std::string str() const;
  static Weight parse(const std::string& text);
};

// Canonical identity of an undirected edge: lo < hi.
struct EdgeKey {
  VertexId lo = 0;
  VertexId hi = 0;

  EdgeKey() = default;
  EdgeKey(VertexId u, VertexId v);

  friend bool operator==(EdgeKey a, EdgeKey b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
  friend bool operator!=(EdgeKey a, EdgeKey b) { return !(a == b); }
  friend bool operator<(EdgeKey a, EdgeKey b) {
    return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
  }

  std::string str() const;
};

struct EdgeKeyHash {
  std::size_t operator()(EdgeKey k) const {
    std::uint64_t x = (static_cast<std::uint64_t>(k.lo) << 32) | k.hi;
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return static_cast<std::size_t>(x);
  }
};

struct Edge {
  EdgeKey key;
  Weight weight;

  Edge() = default;
  Edge(VertexId u, VertexId v, Weight w) : key(u, v), weight(w) {}
  Edge(EdgeKey k, Weight w) : key(k), weight(w) {}

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.key == b.key && a.weight == b.weight;
  }
};

// The total order realizing edge ranks: (weight, lo, hi) lexicographic.
// Ranks are never materialized; every comparison goes through here.
bool rank_less(const Edge& a, const Edge& b);

// A totally ordered key equivalent to an edge's rank position. Synthetic
// keys (for threshold queries) may use sentinel lo/hi values.
struct RankKey {
  double w = 0.0;
  VertexId lo = 0;
  VertexId hi = 0;

  RankKey() = default;
  RankKey(double w_, VertexId lo_, VertexId hi_) : w(w_), lo(lo_), hi(hi_) {}
  explicit RankKey(const Edge& e) : w(e.weight.value), lo(e.key.lo), hi(e.key.hi) {}

  friend bool operator<(const RankKey& a, const RankKey& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.hi < b.hi;
  }
  friend bool operator==(const RankKey& a, const RankKey& b) {
    return a.w == b.w && a.lo == b.lo && a.hi == b.hi;
  }
  friend bool operator!=(const RankKey& a, const RankKey& b) { return !(a == b); }
  friend bool operator>(const RankKey& a, const RankKey& b) { return b < a; }
  friend bool operator<=(const RankKey& a, const RankKey& b) { return !(b < a); }
  friend bool operator>=(const RankKey& a, const RankKey& b) { return !(a < b); }

  // Just above every edge of weight <= w (used for inclusive thresholds).
  static RankKey above_weight(Weight w) { return RankKey(w.value, kNoVertex, kNoVertex); }
  // Just below every edge of weight >= w.
  static RankKey below_weight(Weight w) { return RankKey(w.value, 0, 0); }
};

// The explicit dendrogram: one node per forest edge, each mapping to its
// parent node (or ROOT). Weights are kept alongside so the map serializes
// on its own.
class ParentMap {
 public:
  struct Entry {
    Weight weight;
    std::optional<EdgeKey> parent;  // nullopt = ROOT
  };

  bool contains(EdgeKey e) const { return entries_.count(e) != 0; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Inserts a node with no parent. Throws duplicate_edge if present.
  void add_node(EdgeKey e, Weight w);
  void remove_node(EdgeKey e);

  void set_parent(EdgeKey e, std::optional<EdgeKey> parent);
  std::optional<EdgeKey> parent(EdgeKey e) const;
  Weight weight(EdgeKey e) const;
  const Entry& entry(EdgeKey e) const;

  const std::unordered_map<EdgeKey, Entry, EdgeKeyHash>& entries() const {
    return entries_;
  }

  // One line per node in rank order: "u-v w -> x-y" or "u-v w -> ROOT".
  std::string serialize_canonical() const;

  friend bool operator==(const ParentMap& a, const ParentMap& b);

 private:
  std::unordered_map<EdgeKey, Entry, EdgeKeyHash> entries_;
};

// A node-to-root path of dendrogram nodes, strictly increasing in rank.
struct Spine {
  std::vector<Edge> nodes;  // lowest rank first; last element is the root

  bool empty() const { return nodes.empty(); }
  std::size_t size() const { return nodes.size(); }
};

// Instrumentation for a single update.
struct UpdateReport {
  std::uint64_t pointer_changes = 0;  // size of the pre/post parent-map diff
  std::uint64_t pws_queries = 0;
  std::uint64_t median_queries = 0;
  std::uint64_t rc_nodes_visited = 0;
  std::vector<std::uint32_t> spine_lengths;
  std::uint32_t dendrogram_height = 0;  // affected component, post-update
  double elapsed_seconds = 0.0;

  // Per spine-merge counters for output-sensitive insertions.
  std::vector<std::uint64_t> merge_pws_queries;
  std::vector<std::uint64_t> merge_pointer_changes;
  // Divide-and-conquer merge instrumentation.
  std::uint32_t dc_recursion_depth = 0;
  // Batch insertion instrumentation.
  std::uint32_t contraction_rounds = 0;
  // Max per-hierarchy-node visit count over monotone query batches.
  std::uint32_t max_pws_node_visits = 0;
};

// The dynamic weighted forest: edge set plus per-vertex adjacency ordered
// by edge rank, so the minimum-rank incident edge is O(1) to read.
class ForestState {
 public:
  explicit ForestState(std::size_t num_vertices = 0);

  std::size_t num_vertices() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  VertexId add_vertex();

  bool has_edge(EdgeKey e) const { return edges_.count(e) != 0; }
  Weight edge_weight(EdgeKey e) const;
  Edge edge(EdgeKey e) const;

  void add_edge(const Edge& e);     // duplicate_edge if key present
  void remove_edge(EdgeKey e);      // no_such_edge if absent

  // The rank-minimum edge incident to v, or nullopt if v is isolated.
  std::optional<Edge> min_incident_edge(VertexId v) const;
  std::size_t degree(VertexId v) const;

  const std::unordered_map<EdgeKey, Weight, EdgeKeyHash>& edges() const {
    return edges_;
  }
  std::vector<Edge> sorted_edges() const;  // by rank order

  void check_vertex(VertexId v) const;

 private:
  struct AdjLess {
    bool operator()(const Edge& a, const Edge& b) const { return rank_less(a, b); }
  };

  std::unordered_map<EdgeKey, Weight, EdgeKeyHash> edges_;
  std::vector<std::set<Edge, AdjLess>> adjacency_;
};

}  // namespace dendra

#endif  // DENDRA_CORE_HPP
