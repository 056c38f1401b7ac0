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

#include "dendra/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace dendra {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "INVALID_ARGUMENT";
    case ErrorCode::out_of_range: return "OUT_OF_RANGE";
    case ErrorCode::non_finite_weight: return "NON_FINITE_WEIGHT";
    case ErrorCode::already_connected: return "ALREADY_CONNECTED";
    case ErrorCode::would_create_cycle: return "WOULD_CREATE_CYCLE";
    case ErrorCode::duplicate_edge: return "DUPLICATE_EDGE";
    case ErrorCode::duplicate_rank_key: return "DUPLICATE_RANK_KEY";
    case ErrorCode::no_such_edge: return "NO_SUCH_EDGE";
    case ErrorCode::no_such_component: return "NO_SUCH_COMPONENT";
    case ErrorCode::not_connected: return "NOT_CONNECTED";
    case ErrorCode::same_vertex: return "SAME_VERTEX";
    case ErrorCode::same_component: return "SAME_COMPONENT";
    case ErrorCode::non_monotone_path: return "NON_MONOTONE_PATH";
    case ErrorCode::non_increasing_queries: return "NON_INCREASING_QUERIES";
    case ErrorCode::cycle_detected: return "CYCLE_DETECTED";
    case ErrorCode::heap_violation: return "HEAP_VIOLATION";
    case ErrorCode::not_a_star: return "NOT_A_STAR";
    case ErrorCode::not_an_end: return "NOT_AN_END";
    case ErrorCode::oracle_mismatch: return "ORACLE_MISMATCH";
    case ErrorCode::parse_error: return "PARSE_ERROR";
    case ErrorCode::verify_mismatch: return "VERIFY_MISMATCH";
  }
  return "UNKNOWN";
}

Weight::Weight(double v) : value(v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::non_finite_weight, "weight must be finite");
  }
}

std::string Weight::str() const {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

Weight Weight::parse(const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::parse_error, "bad weight '" + text + "'");
  }
  return Weight(v);
}

EdgeKey::EdgeKey(VertexId u, VertexId v) {
  if (u == v) {
    throw Error(ErrorCode::same_vertex, "edge endpoints must differ");
  }
  lo = std::min(u, v);
  hi = std::max(u, v);
}

std::string EdgeKey::str() const {
  return std::to_string(lo) + "-" + std::to_string(hi);
}

bool rank_less(const Edge& a, const Edge& b) {
  if (a.weight != b.weight) return a.weight < b.weight;
  return a.key < b.key;
}

void ParentMap::add_node(EdgeKey e, Weight w) {
  auto [it, inserted] = entries_.emplace(e, Entry{w, std::nullopt});
  if (!inserted) {
    throw Error(ErrorCode::duplicate_edge, "node " + e.str() + " already present");
  }
}

void ParentMap::remove_node(EdgeKey e) {
  if (entries_.erase(e) == 0) {
    throw Error(ErrorCode::no_such_edge, "node " + e.str() + " not present");
  }
}

void ParentMap::set_parent(EdgeKey e, std::optional<EdgeKey> parent) {
  auto it = entries_.find(e);
  if (it == entries_.end()) {
    throw Error(ErrorCode::no_such_edge, "node " + e.str() + " not present");
  }
  it->second.parent = parent;
}

std::optional<EdgeKey> ParentMap::parent(EdgeKey e) const {
  return entry(e).parent;
}

Weight ParentMap::weight(EdgeKey e) const { return entry(e).weight; }

const ParentMap::Entry& ParentMap::entry(EdgeKey e) const {
  auto it = entries_.find(e);
  if (it == entries_.end()) {
    throw Error(ErrorCode::no_such_edge, "node " + e.str() + " not present");
  }
  return it->second;
}

std::string ParentMap::serialize_canonical() const {
  std::vector<std::pair<Edge, std::optional<EdgeKey>>> rows;
  rows.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) {
    rows.push_back({Edge(key, entry.weight), entry.parent});
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return rank_less(a.first, b.first); });
  std::string out;
  for (const auto& [edge, parent] : rows) {
    out += edge.key.str();
    out += ' ';
    out += edge.weight.str();
    out += " -> ";
    out += parent ? parent->str() : "ROOT";
    out += '\n';
  }
  return out;
}

bool operator==(const ParentMap& a, const ParentMap& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  for (const auto& [key, entry] : a.entries_) {
    auto it = b.entries_.find(key);
    if (it == b.entries_.end()) return false;
    if (it->second.parent != entry.parent) return false;
    if (it->second.weight != entry.weight) return false;
  }
  return true;
}

ForestState::ForestState(std::size_t num_vertices) : adjacency_(num_vertices) {}

VertexId ForestState::add_vertex() {
  adjacency_.emplace_back();
  return static_cast<VertexId>(adjacency_.size() - 1);
}

Weight ForestState::edge_weight(EdgeKey e) const {
  auto it = edges_.find(e);
  if (it == edges_.end()) {
    throw Error(ErrorCode::no_such_edge, "edge " + e.str() + " not present");
  }
  return it->second;
}

Edge ForestState::edge(EdgeKey e) const { return Edge(e, edge_weight(e)); }

void ForestState::add_edge(const Edge& e) {
  check_vertex(e.key.lo);
  check_vertex(e.key.hi);
  auto [it, inserted] = edges_.emplace(e.key, e.weight);
  if (!inserted) {
    throw Error(ErrorCode::duplicate_edge, "edge " + e.key.str() + " already present");
  }
  adjacency_[e.key.lo].insert(e);
  adjacency_[e.key.hi].insert(e);
}

void ForestState::remove_edge(EdgeKey e) {
  auto it = edges_.find(e);
  if (it == edges_.end()) {
    throw Error(ErrorCode::no_such_edge, "edge " + e.str() + " not present");
  }
  Edge full(e, it->second);
  adjacency_[e.lo].erase(full);
  adjacency_[e.hi].erase(full);
  edges_.erase(it);
}

std::optional<Edge> ForestState::min_incident_edge(VertexId v) const {
  check_vertex(v);
  const auto& adj = adjacency_[v];
  if (adj.empty()) return std::nullopt;
  return *adj.begin();
}

std::size_t ForestState::degree(VertexId v) const {
  check_vertex(v);
  return adjacency_[v].size();
}

std::vector<Edge> ForestState::sorted_edges() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& [key, w] : edges_) out.push_back(Edge(key, w));
  std::sort(out.begin(), out.end(), rank_less);
  return out;
}

void ForestState::check_vertex(VertexId v) const {
  if (v >= adjacency_.size()) {
    throw Error(ErrorCode::out_of_range,
                "vertex " + std::to_string(v) + " out of range");
  }
}

}  // namespace dendra
