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

#include "dendra/cartesian.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>

#include "dendra/updates.hpp"

namespace dendra {

namespace {

using Clock = std::chrono::steady_clock;

}  // namespace

CartesianTree::CartesianTree(Order order) : order_(order), state_(0, {}) {}

CartesianTree::CartesianTree(const std::vector<double>& values, Order order)
    : CartesianTree(order) {
  for (double v : values) push(CartesianEnd::back, v);
}

Weight CartesianTree::backing_weight(double value) const {
  // Min-root inverts the comparator: the dendrogram root is always the
  // rank maximum, so the minimum value must carry the largest weight.
  return Weight(order_ == Order::min_root ? -value : value);
}

EdgeKey CartesianTree::edge_at(std::size_t pos) const {
  return EdgeKey(elements_[pos].left_vertex, elements_[pos].right_vertex);
}

std::vector<double> CartesianTree::in_order() const {
  std::vector<double> out;
  out.reserve(elements_.size());
  for (const Element& e : elements_) out.push_back(e.value);
  return out;
}

std::vector<CartesianTree::TreeNode> CartesianTree::to_tree() const {
  std::unordered_map<EdgeKey, std::int32_t, EdgeKeyHash> pos_of;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    pos_of[edge_at(i)] = static_cast<std::int32_t>(i);
  }
  std::vector<TreeNode> nodes(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    auto parent = state_.parents().parent(edge_at(i));
    if (!parent) continue;
    std::int32_t p = pos_of.at(*parent);
    nodes[i].parent = p;
    if (static_cast<std::int32_t>(i) < p) {
      nodes[p].left = static_cast<std::int32_t>(i);
    } else {
      nodes[p].right = static_cast<std::int32_t>(i);
    }
  }
  return nodes;
}

UpdateReport CartesianTree::push(CartesianEnd end, double value) {
  auto fresh_vertex = [&] {
    if (!spare_vertices_.empty()) {
      VertexId v = spare_vertices_.back();
      spare_vertices_.pop_back();
      return v;
    }
    return state_.add_vertex();
  };
  if (elements_.empty()) {
    VertexId a = fresh_vertex();
    VertexId b = fresh_vertex();
    auto report =
        updates::insert_output_sensitive(state_, a, b, backing_weight(value));
    elements_.push_back({value, a, b});
    return report;
  }
  VertexId anchor = end == CartesianEnd::back ? elements_.back().right_vertex
                                              : elements_.front().left_vertex;
  VertexId outer = fresh_vertex();
  auto report =
      updates::insert_output_sensitive(state_, anchor, outer, backing_weight(value));
  if (end == CartesianEnd::back) {
    elements_.push_back({value, anchor, outer});
  } else {
    elements_.insert(elements_.begin(), {value, outer, anchor});
  }
  return report;
}

UpdateReport CartesianTree::pop(CartesianEnd end) {
  if (elements_.empty()) {
    throw Error(ErrorCode::out_of_range, "pop on an empty sequence");
  }
  std::size_t pos = end == CartesianEnd::back ? elements_.size() - 1 : 0;
  EdgeKey key = edge_at(pos);

  UpdateReport report;
  state_.begin_journal();
  std::uint64_t visits0 =
      state_.forest_rc().nodes_visited() + state_.sld_rc().nodes_visited();
  auto start = Clock::now();

  std::vector<DendrogramState::ParentChange> changes;
  if (elements_.size() > 1) {
    // The removed end node has at most one child: the highest node below
    // it on the neighbor element's spine.
    std::size_t neighbor = end == CartesianEnd::back ? pos - 1 : 1;
    EdgeKey nkey = edge_at(neighbor);
    EdgeKey root = state_.component_root(nkey);
    auto res = state_.sld_rc().path_weight_search(
        state_.node_of(nkey), state_.node_of(root),
        RankKey(Edge(key, state_.parents().weight(key))));
    ++report.pws_queries;
    if (res.pred) {
      EdgeKey child = state_.key_of(*res.pred);
      if (state_.parents().parent(child) == key) {
        changes.push_back({child, state_.parents().parent(key)});
      }
    }
  }
  state_.apply_parent_changes(changes, {}, {key});
  state_.forest_remove_edge(key);

  VertexId outer = end == CartesianEnd::back ? elements_[pos].right_vertex
                                             : elements_[pos].left_vertex;
  spare_vertices_.push_back(outer);
  if (elements_.size() == 1) {
    spare_vertices_.push_back(end == CartesianEnd::back
                                  ? elements_[pos].left_vertex
                                  : elements_[pos].right_vertex);
  }
  elements_.erase(elements_.begin() + static_cast<std::ptrdiff_t>(pos));

  report.pointer_changes = state_.journal_changes();
  report.rc_nodes_visited = state_.forest_rc().nodes_visited() +
                            state_.sld_rc().nodes_visited() - visits0;
  report.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

UpdateReport CartesianTree::insert_at(std::size_t pos, double value) {
  if (pos > elements_.size()) {
    throw Error(ErrorCode::out_of_range, "insert position out of range");
  }
  if (pos == 0) return push(CartesianEnd::front, value);
  if (pos == elements_.size()) return push(CartesianEnd::back, value);

  // Vertex split: detach the edge at pos, insert the new element, then
  // re-attach the old element from a fresh vertex with its old weight.
  Element old = elements_[pos];
  VertexId split = old.left_vertex;
  VertexId fresh;
  if (!spare_vertices_.empty()) {
    fresh = spare_vertices_.back();
    spare_vertices_.pop_back();
  } else {
    fresh = state_.add_vertex();
  }
  UpdateReport report = updates::erase(state_, split, old.right_vertex);
  auto r2 = updates::insert_output_sensitive(state_, split, fresh,
                                             backing_weight(value));
  auto r3 = updates::insert_output_sensitive(state_, fresh, old.right_vertex,
                                             backing_weight(old.value));
  report.pointer_changes += r2.pointer_changes + r3.pointer_changes;
  report.pws_queries += r2.pws_queries + r3.pws_queries;
  report.rc_nodes_visited += r2.rc_nodes_visited + r3.rc_nodes_visited;
  report.elapsed_seconds += r2.elapsed_seconds + r3.elapsed_seconds;

  elements_[pos] = {value, split, fresh};
  elements_.insert(elements_.begin() + static_cast<std::ptrdiff_t>(pos) + 1,
                   {old.value, fresh, old.right_vertex});
  return report;
}

UpdateReport CartesianTree::delete_at(std::size_t pos) {
  if (pos >= elements_.size()) {
    throw Error(ErrorCode::out_of_range, "delete position out of range");
  }
  if (pos == 0) return pop(CartesianEnd::front);
  if (pos + 1 == elements_.size()) return pop(CartesianEnd::back);

  // Edge contraction: remove the element's edge and its right neighbor,
  // then re-span the gap with the neighbor's weight.
  Element gone = elements_[pos];
  Element next = elements_[pos + 1];
  UpdateReport report = updates::erase(state_, gone.left_vertex, gone.right_vertex);
  auto r2 = updates::erase(state_, next.left_vertex, next.right_vertex);
  auto r3 = updates::insert_output_sensitive(state_, gone.left_vertex,
                                             next.right_vertex,
                                             backing_weight(next.value));
  report.pointer_changes += r2.pointer_changes + r3.pointer_changes;
  report.pws_queries += r2.pws_queries + r3.pws_queries;
  report.rc_nodes_visited += r2.rc_nodes_visited + r3.rc_nodes_visited;
  report.elapsed_seconds += r2.elapsed_seconds + r3.elapsed_seconds;

  spare_vertices_.push_back(gone.right_vertex);
  elements_[pos + 1] = {next.value, gone.left_vertex, next.right_vertex};
  elements_.erase(elements_.begin() + static_cast<std::ptrdiff_t>(pos));
  return report;
}

void CartesianTree::verify() const {
  std::vector<double> values = in_order();
  std::vector<EdgeKey> keys;
  keys.reserve(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) keys.push_back(edge_at(i));
  auto expect = oracle::cartesian_recursive_keyed(values, keys, order_);
  auto got = to_tree();
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].parent != expect[i].parent || got[i].left != expect[i].left ||
        got[i].right != expect[i].right) {
      throw Error(ErrorCode::oracle_mismatch,
                  "tree differs from the recursive construction at position " +
                      std::to_string(i));
    }
    // Heap order between parent and child.
    if (got[i].parent >= 0) {
      double pv = elements_[got[i].parent].value;
      double cv = elements_[i].value;
      bool ok = order_ == Order::min_root ? pv <= cv : pv >= cv;
      if (!ok) {
        throw Error(ErrorCode::heap_violation, "heap order broken in the tree");
      }
    }
  }
}

}  // namespace dendra
