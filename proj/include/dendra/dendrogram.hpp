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

#ifndef DENDRA_DENDROGRAM_HPP
#define DENDRA_DENDROGRAM_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dendra/core.hpp"
#include "dendra/rc_forest.hpp"

namespace dendra {

// The maintained state: the weighted forest, the explicit dendrogram
// (parent map plus children index), one rake-compress forest over the
// input tree (connectivity, path-max) and one over the dendrogram itself
// (spines, weight searches, medians, subtree sizes).
class DendrogramState {
 public:
  DendrogramState(std::size_t num_vertices, const std::vector<Edge>& edges);

  const ForestState& forest() const { return forest_; }
  const ParentMap& parents() const { return parents_; }
  const RCForest& forest_rc() const { return forest_rc_; }
  RCForest& forest_rc() { return forest_rc_; }
  const RCForest& sld_rc() const { return sld_rc_; }

  VertexId add_vertex();

  // Dendrogram node handles inside sld_rc.
  VertexId node_of(EdgeKey e) const;
  EdgeKey key_of(VertexId node) const;
  bool has_node(EdgeKey e) const { return node_ids_.count(e) != 0; }

  // The rank-maximum node of e's dendrogram component.
  EdgeKey component_root(EdgeKey e) const;
  const std::unordered_set<EdgeKey, EdgeKeyHash>& roots() const { return roots_; }
  const std::vector<EdgeKey>& children(EdgeKey e) const;

  // The node-to-root chain of e, strictly increasing in rank, extracted
  // through the dendrogram's rake-compress forest.
  Spine extract_spine(EdgeKey e) const;

  // Longest root-directed chain of the component containing e.
  std::uint32_t height(EdgeKey e) const;

  struct ParentChange {
    EdgeKey child;
    std::optional<EdgeKey> parent;
  };

  // Atomic batch: new nodes added, parents rewired (batch cut + batch link
  // in sld_rc), nodes removed. Heap order is checked per change up front.
  void apply_parent_changes(const std::vector<ParentChange>& changes,
                            const std::vector<Edge>& added,
                            const std::vector<EdgeKey>& removed);

  // Immediate single rewire used by merge strategies that interleave
  // structure queries with pointer updates.
  void set_parent_immediate(EdgeKey child, std::optional<EdgeKey> parent);

  // Forest-side bookkeeping (edge set, adjacency, input-tree RC forest).
  void forest_add_edge(const Edge& e);
  void forest_remove_edge(EdgeKey e);
  void forest_batch_add(const std::vector<Edge>& edges);
  void forest_batch_remove(const std::vector<EdgeKey>& keys);

  // Pointer-change journal: one update at a time.
  void begin_journal();
  std::uint64_t journal_changes() const;  // diff size vs. journal start

  // Structural checks plus exact equality with a fresh Kruskal sweep;
  // throws with a distinct code on the first violation.
  void validate() const;

 private:
  void journal_node(EdgeKey e);
  void unlink_children_entry(EdgeKey child, std::optional<EdgeKey> parent);
  void link_children_entry(EdgeKey child, std::optional<EdgeKey> parent);

  ForestState forest_;
  ParentMap parents_;
  RCForest forest_rc_;
  RCForest sld_rc_;
  std::unordered_map<EdgeKey, VertexId, EdgeKeyHash> node_ids_;
  std::unordered_map<VertexId, EdgeKey> node_keys_;
  std::unordered_map<EdgeKey, std::vector<EdgeKey>, EdgeKeyHash> children_;
  std::unordered_set<EdgeKey, EdgeKeyHash> roots_;

  struct JournalEntry {
    bool existed;
    std::optional<EdgeKey> old_parent;
  };
  std::unordered_map<EdgeKey, JournalEntry, EdgeKeyHash> journal_;
};

}  // namespace dendra

#endif  // DENDRA_DENDROGRAM_HPP
