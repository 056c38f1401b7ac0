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

#include "dendra/dendrogram.hpp"

#include <algorithm>
#include <deque>

#include "dendra/oracle.hpp"

namespace dendra {

DendrogramState::DendrogramState(std::size_t num_vertices,
                                 const std::vector<Edge>& edges)
    : forest_(num_vertices), forest_rc_(num_vertices), sld_rc_(0) {
  parents_ = oracle::kruskal_sld(num_vertices, edges);

  std::vector<RCForest::LinkSpec> forest_links;
  for (const Edge& e : edges) {
    forest_.add_edge(e);
    forest_links.push_back({e.key.lo, e.key.hi, RankKey(e)});
    VertexId node = sld_rc_.add_vertex(RankKey(e));
    node_ids_[e.key] = node;
    node_keys_[node] = e.key;
  }
  forest_rc_.batch_link(forest_links);

  std::vector<RCForest::LinkSpec> sld_links;
  for (const auto& [key, entry] : parents_.entries()) {
    if (entry.parent) {
      sld_links.push_back({node_ids_.at(key), node_ids_.at(*entry.parent),
                           RankKey(0.0, node_ids_.at(key), 0)});
      children_[*entry.parent].push_back(key);
    } else {
      roots_.insert(key);
    }
  }
  sld_rc_.batch_link(sld_links);
}

VertexId DendrogramState::add_vertex() {
  forest_.add_vertex();
  return forest_rc_.add_vertex();
}

VertexId DendrogramState::node_of(EdgeKey e) const {
  auto it = node_ids_.find(e);
  if (it == node_ids_.end()) {
    throw Error(ErrorCode::no_such_edge, "no dendrogram node for " + e.str());
  }
  return it->second;
}

EdgeKey DendrogramState::key_of(VertexId node) const {
  auto it = node_keys_.find(node);
  if (it == node_keys_.end()) {
    throw Error(ErrorCode::no_such_edge, "unknown dendrogram node");
  }
  return it->second;
}

EdgeKey DendrogramState::component_root(EdgeKey e) const {
  return key_of(sld_rc_.component_weight_argmax(node_of(e)));
}

const std::vector<EdgeKey>& DendrogramState::children(EdgeKey e) const {
  static const std::vector<EdgeKey> kEmpty;
  auto it = children_.find(e);
  return it == children_.end() ? kEmpty : it->second;
}

Spine DendrogramState::extract_spine(EdgeKey e) const {
  VertexId from = node_of(e);
  VertexId to = node_of(component_root(e));
  Spine spine;
  for (VertexId node : sld_rc_.extract_path(from, to)) {
    EdgeKey key = key_of(node);
    spine.nodes.push_back(Edge(key, parents_.weight(key)));
  }
  return spine;
}

std::uint32_t DendrogramState::height(EdgeKey e) const {
  EdgeKey root = component_root(e);
  std::uint32_t best = 0;
  std::deque<std::pair<EdgeKey, std::uint32_t>> queue{{root, 1}};
  while (!queue.empty()) {
    auto [key, depth] = queue.front();
    queue.pop_front();
    best = std::max(best, depth);
    for (EdgeKey child : children(key)) queue.push_back({child, depth + 1});
  }
  return best;
}

void DendrogramState::journal_node(EdgeKey e) {
  if (journal_.count(e)) return;
  if (parents_.contains(e)) {
    journal_[e] = {true, parents_.parent(e)};
  } else {
    journal_[e] = {false, std::nullopt};
  }
}

void DendrogramState::begin_journal() { journal_.clear(); }

std::uint64_t DendrogramState::journal_changes() const {
  std::uint64_t count = 0;
  for (const auto& [key, entry] : journal_) {
    bool exists = parents_.contains(key);
    if (exists != entry.existed) {
      ++count;
    } else if (exists && parents_.parent(key) != entry.old_parent) {
      ++count;
    }
  }
  return count;
}

void DendrogramState::unlink_children_entry(EdgeKey child,
                                            std::optional<EdgeKey> parent) {
  if (!parent) {
    roots_.erase(child);
    return;
  }
  auto& sibs = children_[*parent];
  sibs.erase(std::remove(sibs.begin(), sibs.end(), child), sibs.end());
  if (sibs.empty()) children_.erase(*parent);
}

void DendrogramState::link_children_entry(EdgeKey child,
                                          std::optional<EdgeKey> parent) {
  if (!parent) {
    roots_.insert(child);
    return;
  }
  children_[*parent].push_back(child);
}

void DendrogramState::apply_parent_changes(
    const std::vector<ParentChange>& changes, const std::vector<Edge>& added,
    const std::vector<EdgeKey>& removed) {
  // Validate before mutating. Heap order per change suffices: pointing
  // every node at a strictly higher rank rules out cycles globally.
  std::unordered_map<EdgeKey, Weight, EdgeKeyHash> added_weights;
  for (const Edge& e : added) added_weights.emplace(e.key, e.weight);
  auto weight_of = [&](EdgeKey key) {
    auto it = added_weights.find(key);
    return it != added_weights.end() ? it->second : parents_.weight(key);
  };
  std::unordered_set<EdgeKey, EdgeKeyHash> removed_set(removed.begin(),
                                                       removed.end());
  for (const ParentChange& ch : changes) {
    if (!ch.parent) continue;
    Edge c(ch.child, weight_of(ch.child));
    Edge p(*ch.parent, weight_of(*ch.parent));
    if (!rank_less(c, p)) {
      throw Error(ErrorCode::heap_violation,
                  "parent " + p.key.str() + " does not out-rank " + c.key.str());
    }
    if (removed_set.count(*ch.parent)) {
      throw Error(ErrorCode::cycle_detected,
                  "new parent " + ch.parent->str() + " is being removed");
    }
  }

  for (const Edge& e : added) {
    journal_node(e.key);
    parents_.add_node(e.key, e.weight);
    roots_.insert(e.key);
    VertexId node = sld_rc_.add_vertex(RankKey(e));
    node_ids_[e.key] = node;
    node_keys_[node] = e.key;
  }
  std::vector<std::pair<VertexId, VertexId>> cuts;
  std::vector<RCForest::LinkSpec> links;
  for (const ParentChange& ch : changes) {
    journal_node(ch.child);
    std::optional<EdgeKey> old = parents_.parent(ch.child);
    if (old == ch.parent) continue;
    if (old) cuts.push_back({node_of(ch.child), node_of(*old)});
    if (ch.parent) {
      links.push_back({node_of(ch.child), node_of(*ch.parent),
                       RankKey(0.0, node_of(ch.child), 0)});
    }
    unlink_children_entry(ch.child, old);
    link_children_entry(ch.child, ch.parent);
    parents_.set_parent(ch.child, ch.parent);
  }
  // Children first: a removed node may only retain children that are
  // themselves being removed.
  std::vector<EdgeKey> removal_order = removed;
  std::sort(removal_order.begin(), removal_order.end(),
            [&](EdgeKey a, EdgeKey b) {
              return rank_less(Edge(a, parents_.weight(a)),
                               Edge(b, parents_.weight(b)));
            });
  for (EdgeKey key : removal_order) {
    journal_node(key);
    if (!children(key).empty()) {
      throw Error(ErrorCode::cycle_detected,
                  "removed node " + key.str() + " still has children");
    }
    std::optional<EdgeKey> old = parents_.parent(key);
    if (old) cuts.push_back({node_of(key), node_of(*old)});
    unlink_children_entry(key, old);
    parents_.remove_node(key);
  }
  sld_rc_.batch_cut(cuts);
  sld_rc_.batch_link(links);
  for (EdgeKey key : removed) {
    VertexId node = node_of(key);
    sld_rc_.remove_vertex(node);
    node_ids_.erase(key);
    node_keys_.erase(node);
  }
}

void DendrogramState::set_parent_immediate(EdgeKey child,
                                           std::optional<EdgeKey> parent) {
  journal_node(child);
  std::optional<EdgeKey> old = parents_.parent(child);
  if (old == parent) return;
  if (parent) {
    Edge c(child, parents_.weight(child));
    Edge p(*parent, parents_.weight(*parent));
    if (!rank_less(c, p)) {
      throw Error(ErrorCode::heap_violation,
                  "parent " + parent->str() + " does not out-rank " + child.str());
    }
  }
  if (old) sld_rc_.cut(node_of(child), node_of(*old));
  if (parent) {
    sld_rc_.link(node_of(child), node_of(*parent),
                 RankKey(0.0, node_of(child), 0));
  }
  unlink_children_entry(child, old);
  link_children_entry(child, parent);
  parents_.set_parent(child, parent);
}

void DendrogramState::forest_add_edge(const Edge& e) {
  forest_.add_edge(e);
  forest_rc_.link(e.key.lo, e.key.hi, RankKey(e));
}

void DendrogramState::forest_remove_edge(EdgeKey e) {
  forest_.remove_edge(e);
  forest_rc_.cut(e.lo, e.hi);
}

void DendrogramState::forest_batch_add(const std::vector<Edge>& edges) {
  std::vector<RCForest::LinkSpec> links;
  for (const Edge& e : edges) {
    forest_.add_edge(e);
    links.push_back({e.key.lo, e.key.hi, RankKey(e)});
  }
  forest_rc_.batch_link(links);
}

void DendrogramState::forest_batch_remove(const std::vector<EdgeKey>& keys) {
  std::vector<std::pair<VertexId, VertexId>> cuts;
  for (EdgeKey key : keys) {
    forest_.remove_edge(key);
    cuts.push_back({key.lo, key.hi});
  }
  forest_rc_.batch_cut(cuts);
}

void DendrogramState::validate() const {
  // Node bookkeeping matches the forest edge set.
  if (parents_.size() != forest_.num_edges() ||
      node_ids_.size() != forest_.num_edges()) {
    throw Error(ErrorCode::oracle_mismatch, "node count mismatch");
  }
  for (const auto& [key, weight] : forest_.edges()) {
    if (!parents_.contains(key) || !node_ids_.count(key)) {
      throw Error(ErrorCode::no_such_edge, "edge " + key.str() + " lacks a node");
    }
    if (parents_.weight(key) != weight) {
      throw Error(ErrorCode::oracle_mismatch, "weight mismatch at " + key.str());
    }
  }
  // Heap order, children index, root set.
  for (const auto& [key, entry] : parents_.entries()) {
    if (entry.parent) {
      Edge child(key, entry.weight);
      Edge parent(*entry.parent, parents_.weight(*entry.parent));
      if (!rank_less(child, parent)) {
        throw Error(ErrorCode::heap_violation, "heap order violated at " + key.str());
      }
      const auto& sibs = children(*entry.parent);
      if (std::find(sibs.begin(), sibs.end(), key) == sibs.end()) {
        throw Error(ErrorCode::oracle_mismatch, "children index missing " + key.str());
      }
      if (sld_rc_.has_edge(node_of(key), node_of(*entry.parent)) == false) {
        throw Error(ErrorCode::oracle_mismatch, "sld edge missing " + key.str());
      }
    } else if (!roots_.count(key)) {
      throw Error(ErrorCode::oracle_mismatch, "root set missing " + key.str());
    }
  }
  for (const auto& [parent, kids] : children_) {
    for (EdgeKey kid : kids) {
      if (parents_.parent(kid) != parent) {
        throw Error(ErrorCode::oracle_mismatch, "stale children entry");
      }
    }
    if (kids.size() > 2) {
      throw Error(ErrorCode::oracle_mismatch, "dendrogram node with >2 children");
    }
  }
  for (EdgeKey root : roots_) {
    if (parents_.parent(root)) {
      throw Error(ErrorCode::oracle_mismatch, "stale root " + root.str());
    }
    if (component_root(root) != root) {
      throw Error(ErrorCode::oracle_mismatch,
                  "root is not the component's rank maximum");
    }
  }
  // The dendrogram's RC forest mirrors the parent map's components.
  for (const auto& [key, entry] : parents_.entries()) {
    EdgeKey root = component_root(key);
    if (!roots_.count(root)) {
      throw Error(ErrorCode::oracle_mismatch, "component root not in root set");
    }
  }
  // Exact equality with an independent Kruskal sweep.
  std::vector<Edge> edges;
  edges.reserve(forest_.num_edges());
  for (const auto& [key, weight] : forest_.edges()) edges.push_back(Edge(key, weight));
  ParentMap expect = oracle::kruskal_sld(forest_.num_vertices(), edges);
  if (!(expect == parents_)) {
    throw Error(ErrorCode::oracle_mismatch,
                "parent map differs from the Kruskal sweep");
  }
}

}  // namespace dendra
