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

#include "dendra/rc_forest.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace dendra {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

}  // namespace

std::uint64_t RCForest::priority(VertexId v, std::uint32_t round) {
  return mix64((static_cast<std::uint64_t>(round) << 32) ^ v ^ 0x5851f42d4c957f2dULL);
}

std::uint64_t RCForest::pack_edge(VertexId u, VertexId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

void RCForest::Agg::merge_value(const RankKey& k, VertexId v) {
  if (!has) {
    has = true;
    min_key = max_key = k;
    argmin = argmax = v;
    return;
  }
  if (k < min_key) {
    min_key = k;
    argmin = v;
  }
  if (max_key < k) {
    max_key = k;
    argmax = v;
  }
}

void RCForest::Agg::merge(const Agg& other) {
  if (!other.has) return;
  merge_value(other.min_key, other.argmin);
  merge_value(other.max_key, other.argmax);
}

RCForest::RCForest(std::size_t num_vertices) {
  rounds_.resize(1);
  for (std::size_t i = 0; i < num_vertices; ++i) add_vertex();
}

RCForest::Idx RCForest::alloc_cluster() {
  if (!free_list_.empty()) {
    Idx i = free_list_.back();
    free_list_.pop_back();
    clusters_[i] = Cluster{};
    return i;
  }
  clusters_.push_back(Cluster{});
  return static_cast<Idx>(clusters_.size() - 1);
}

void RCForest::retire_cluster(Idx c) {
  Cluster& node = clusters_[c];
  if (node.dead) return;
  ++visits_;
  node.dead = true;
  for (Idx child : node.children) {
    if (clusters_[child].parent == c) clusters_[child].parent = kNone;
  }
  pending_free_.push_back(c);
}

void RCForest::free_retired() {
  for (Idx c : pending_free_) free_list_.push_back(c);
  pending_free_.clear();
}

VertexId RCForest::add_vertex(RankKey vertex_weight) {
  VertexId v = static_cast<VertexId>(vertices_.size());
  Idx base = alloc_cluster();
  Cluster& c = clusters_[base];
  c.kind = ClusterKind::vertex;
  c.dead = false;
  c.rep = v;
  c.bound[0] = v;
  c.size = 1;
  c.all_v.merge_value(vertex_weight, v);
  c.min_vertex = v;
  vertices_.push_back({true, vertex_weight, base});
  ++alive_vertices_;
  rounds_[0][v] = RoundVertex{};
  OldEntries old;
  old[v] = std::nullopt;
  propagate({v}, std::move(old));
  return v;
}

VertexId RCForest::add_vertex() {
  VertexId v = static_cast<VertexId>(vertices_.size());
  return add_vertex(RankKey(0.0, v, 0));
}

void RCForest::remove_vertex(VertexId v) {
  if (!vertex_alive(v)) {
    throw Error(ErrorCode::out_of_range, "vertex " + std::to_string(v) + " not alive");
  }
  auto it = rounds_[0].find(v);
  if (!it->second.nbrs.empty()) {
    throw Error(ErrorCode::invalid_argument,
                "vertex " + std::to_string(v) + " is not isolated");
  }
  OldEntries old;
  old[v] = it->second;
  rounds_[0].erase(it);
  propagate({v}, std::move(old));
  retire_cluster(vertices_[v].base);
  free_retired();
  vertices_[v].alive = false;
  vertices_[v].base = kNone;
  --alive_vertices_;
}

bool RCForest::vertex_alive(VertexId v) const {
  return v < vertices_.size() && vertices_[v].alive;
}

RankKey RCForest::vertex_weight(VertexId v) const {
  if (!vertex_alive(v)) {
    throw Error(ErrorCode::out_of_range, "vertex " + std::to_string(v) + " not alive");
  }
  return vertices_[v].weight;
}

bool RCForest::eligible(const RoundMap& round, VertexId v) const {
  auto it = round.find(v);
  return it != round.end() && it->second.nbrs.size() <= 2;
}

bool RCForest::decide_contract(const RoundMap& round, VertexId v,
                               std::uint32_t r) const {
  const RoundVertex& rv = round.at(v);
  if (rv.nbrs.size() > 2) return false;
  std::uint64_t mine = priority(v, r);
  for (const Half& h : rv.nbrs) {
    if (!eligible(round, h.nbr)) continue;
    std::uint64_t theirs = priority(h.nbr, r);
    if (theirs < mine || (theirs == mine && h.nbr < v)) return false;
  }
  return true;
}

RCForest::Cluster RCForest::make_build(const RoundMap& round, VertexId v,
                                       std::uint32_t r) const {
  const RoundVertex& rv = round.at(v);
  Cluster spec;
  spec.dead = false;
  spec.round = static_cast<std::int32_t>(r);
  spec.rep = v;
  spec.children.push_back(vertices_[v].base);
  if (rv.nbrs.empty()) {
    spec.kind = ClusterKind::root;
  } else if (rv.nbrs.size() == 1) {
    spec.kind = ClusterKind::unary;
    spec.bound[0] = rv.nbrs[0].nbr;
    spec.children.push_back(rv.nbrs[0].edge);
  } else {
    spec.kind = ClusterKind::binary;
    // Lower-weight side stored first.
    Half a = rv.nbrs[0], b = rv.nbrs[1];
    if (vertices_[b.nbr].weight < vertices_[a.nbr].weight) std::swap(a, b);
    spec.bound[0] = a.nbr;
    spec.bound[1] = b.nbr;
    spec.children.push_back(a.edge);
    spec.children.push_back(b.edge);
  }
  for (Idx un : rv.unaries) spec.children.push_back(un);
  return spec;
}

bool RCForest::build_matches(Idx built, const Cluster& spec) const {
  const Cluster& c = clusters_[built];
  return !c.dead && c.kind == spec.kind && c.rep == spec.rep &&
         c.round == spec.round && c.bound[0] == spec.bound[0] &&
         c.bound[1] == spec.bound[1] && c.children == spec.children;
}

void RCForest::compute_aggregates(Cluster& c) const {
  c.size = 0;
  c.path_len = 0;
  c.path_v = Agg{};
  c.all_v = Agg{};
  c.has_path_emax = false;
  c.min_vertex = kNoVertex;
  for (Idx child : c.children) {
    const Cluster& ch = clusters_[child];
    c.size += ch.size;
    c.all_v.merge(ch.all_v);
    if (ch.min_vertex != kNoVertex &&
        (c.min_vertex == kNoVertex || ch.min_vertex < c.min_vertex)) {
      c.min_vertex = ch.min_vertex;
    }
  }
  if (c.kind == ClusterKind::binary) {
    const Cluster& e1 = clusters_[c.children[1]];
    const Cluster& e2 = clusters_[c.children[2]];
    c.path_len = e1.path_len + 1 + e2.path_len;
    c.path_v.merge(e1.path_v);
    c.path_v.merge_value(vertices_[c.rep].weight, c.rep);
    c.path_v.merge(e2.path_v);
    for (const Cluster* e : {&e1, &e2}) {
      if (e->has_path_emax &&
          (!c.has_path_emax || c.path_emax < e->path_emax)) {
        c.path_emax = e->path_emax;
        c.has_path_emax = true;
      }
    }
  }
}

void RCForest::propagate(std::unordered_set<VertexId> dirty, OldEntries old_entries) {
  for (std::uint32_t r = 0; !dirty.empty(); ++r) {
    if (r + 1 >= rounds_.size()) rounds_.resize(r + 2);
    RoundMap& cur = rounds_[r];
    RoundMap& next = rounds_[r + 1];

    // Vertices whose contraction decision must be re-evaluated: the dirty
    // set plus its neighborhood under both the old and new adjacency.
    std::unordered_set<VertexId> rset;
    for (VertexId v : dirty) {
      rset.insert(v);
      auto oit = old_entries.find(v);
      if (oit != old_entries.end() && oit->second) {
        for (const Half& h : oit->second->nbrs) rset.insert(h.nbr);
      }
      auto it = cur.find(v);
      if (it != cur.end()) {
        for (const Half& h : it->second.nbrs) rset.insert(h.nbr);
      }
    }
    std::vector<VertexId> recompute(rset.begin(), rset.end());
    std::sort(recompute.begin(), recompute.end());

    std::unordered_set<VertexId> build_changed;
    for (VertexId v : recompute) {
      ++visits_;
      auto it = cur.find(v);
      Idx old_built = kNone;
      if (it != cur.end()) {
        old_built = it->second.built;
      } else {
        auto oit = old_entries.find(v);
        if (oit != old_entries.end() && oit->second) old_built = oit->second->built;
      }
      if (it == cur.end()) {
        if (old_built != kNone) {
          retire_cluster(old_built);
          build_changed.insert(v);
        }
        continue;
      }
      if (!decide_contract(cur, v, r)) {
        if (old_built != kNone) {
          retire_cluster(old_built);
          it->second.built = kNone;
          build_changed.insert(v);
        }
        continue;
      }
      Cluster spec = make_build(cur, v, r);
      if (old_built != kNone && build_matches(old_built, spec)) {
        it->second.built = old_built;
        continue;
      }
      if (old_built != kNone) retire_cluster(old_built);
      Idx idx = alloc_cluster();
      ++visits_;
      clusters_[idx] = std::move(spec);
      for (Idx child : clusters_[idx].children) clusters_[child].parent = idx;
      compute_aggregates(clusters_[idx]);
      it->second.built = idx;
      build_changed.insert(v);
    }

    // Vertices whose next-round entry may have changed.
    std::unordered_set<VertexId> recv = rset;
    for (VertexId v : build_changed) {
      auto it = cur.find(v);
      if (it != cur.end()) {
        for (const Half& h : it->second.nbrs) recv.insert(h.nbr);
      }
      auto oit = old_entries.find(v);
      if (oit != old_entries.end() && oit->second) {
        for (const Half& h : oit->second->nbrs) recv.insert(h.nbr);
      }
    }
    std::vector<VertexId> receivers(recv.begin(), recv.end());
    std::sort(receivers.begin(), receivers.end());

    std::unordered_set<VertexId> next_dirty;
    OldEntries next_old;
    for (VertexId v : receivers) {
      ++visits_;
      auto it = cur.find(v);
      std::optional<RoundVertex> fresh;
      if (it != cur.end() && it->second.built == kNone) {
        RoundVertex e;
        for (const Half& h : it->second.nbrs) {
          const RoundVertex& nb = cur.at(h.nbr);
          if (nb.built != kNone) {
            const Cluster& c = clusters_[nb.built];
            if (c.kind == ClusterKind::unary) {
              e.unaries.push_back(nb.built);
              continue;
            }
            VertexId other = c.bound[0] == v ? c.bound[1] : c.bound[0];
            e.nbrs.push_back({other, nb.built});
          } else {
            e.nbrs.push_back(h);
          }
        }
        for (Idx un : it->second.unaries) e.unaries.push_back(un);
        std::sort(e.nbrs.begin(), e.nbrs.end(),
                  [](const Half& a, const Half& b) { return a.nbr < b.nbr; });
        std::sort(e.unaries.begin(), e.unaries.end(), [this](Idx a, Idx b) {
          return clusters_[a].rep < clusters_[b].rep;
        });
        fresh = std::move(e);
      }
      auto nit = next.find(v);
      std::optional<RoundVertex> existing =
          nit != next.end() ? std::optional<RoundVertex>(nit->second) : std::nullopt;
      bool same = existing.has_value() == fresh.has_value() &&
                  (!existing || *existing == *fresh);
      if (same) continue;
      next_old[v] = existing;
      if (fresh) {
        fresh->built = existing ? existing->built : kNone;
        next[v] = std::move(*fresh);
      } else {
        next.erase(v);
      }
      next_dirty.insert(v);
    }
    dirty = std::move(next_dirty);
    old_entries = std::move(next_old);
  }
  free_retired();
  while (rounds_.size() > 2 && rounds_[rounds_.size() - 1].empty() &&
         rounds_[rounds_.size() - 2].empty()) {
    rounds_.pop_back();
  }
}

void RCForest::mutate_link(VertexId u, VertexId v, RankKey w,
                           std::unordered_set<VertexId>& dirty,
                           OldEntries& old_entries) {
  auto save = [&](VertexId x) {
    if (!old_entries.count(x)) old_entries[x] = rounds_[0].at(x);
  };
  save(u);
  save(v);
  Idx e = alloc_cluster();
  Cluster& c = clusters_[e];
  c.kind = ClusterKind::edge;
  c.dead = false;
  c.rep = kNoVertex;
  c.bound[0] = std::min(u, v);
  c.bound[1] = std::max(u, v);
  c.path_emax = w;
  c.has_path_emax = true;
  base_edges_[pack_edge(u, v)] = e;
  auto insert_half = [&](VertexId a, VertexId b) {
    auto& nbrs = rounds_[0][a].nbrs;
    Half h{b, e};
    nbrs.insert(std::upper_bound(nbrs.begin(), nbrs.end(), h,
                                 [](const Half& x, const Half& y) {
                                   return x.nbr < y.nbr;
                                 }),
                h);
  };
  insert_half(u, v);
  insert_half(v, u);
  dirty.insert(u);
  dirty.insert(v);
}

void RCForest::mutate_cut(VertexId u, VertexId v,
                          std::unordered_set<VertexId>& dirty,
                          OldEntries& old_entries) {
  auto save = [&](VertexId x) {
    if (!old_entries.count(x)) old_entries[x] = rounds_[0].at(x);
  };
  save(u);
  save(v);
  auto it = base_edges_.find(pack_edge(u, v));
  Idx e = it->second;
  base_edges_.erase(it);
  auto remove_half = [&](VertexId a, VertexId b) {
    auto& nbrs = rounds_[0][a].nbrs;
    nbrs.erase(std::remove_if(nbrs.begin(), nbrs.end(),
                              [&](const Half& h) { return h.nbr == b; }),
               nbrs.end());
  };
  remove_half(u, v);
  remove_half(v, u);
  retire_cluster(e);
  dirty.insert(u);
  dirty.insert(v);
}

void RCForest::link(VertexId u, VertexId v, RankKey edge_weight) {
  batch_link({LinkSpec{u, v, edge_weight}});
}

void RCForest::link(VertexId u, VertexId v) {
  link(u, v, RankKey(0.0, std::min(u, v), std::max(u, v)));
}

void RCForest::cut(VertexId u, VertexId v) { batch_cut({{u, v}}); }

bool RCForest::has_edge(VertexId u, VertexId v) const {
  return base_edges_.count(pack_edge(u, v)) != 0;
}

void RCForest::batch_link(const std::vector<LinkSpec>& links) {
  // Validate atomically: all endpoints alive, batch keeps the forest acyclic.
  std::unordered_map<VertexId, VertexId> comp;
  auto comp_of = [&](VertexId x) {
    VertexId cur = representative(x);
    while (true) {
      auto it = comp.find(cur);
      if (it == comp.end() || it->second == cur) return cur;
      cur = it->second;
    }
  };
  std::string offenders;
  for (const LinkSpec& l : links) {
    if (!vertex_alive(l.u) || !vertex_alive(l.v)) {
      throw Error(ErrorCode::out_of_range, "link endpoint out of range");
    }
    if (l.u == l.v) {
      throw Error(ErrorCode::same_vertex, "self-loop link");
    }
    VertexId a = comp_of(l.u), b = comp_of(l.v);
    if (a == b) {
      offenders += " " + std::to_string(l.u) + "-" + std::to_string(l.v);
      continue;
    }
    comp[a] = b;
  }
  if (!offenders.empty()) {
    throw Error(ErrorCode::already_connected, "links close a cycle:" + offenders);
  }
  std::unordered_set<VertexId> dirty;
  OldEntries old;
  for (const LinkSpec& l : links) mutate_link(l.u, l.v, l.weight, dirty, old);
  propagate(std::move(dirty), std::move(old));
}

void RCForest::batch_cut(const std::vector<std::pair<VertexId, VertexId>>& cuts) {
  std::unordered_set<std::uint64_t> seen;
  std::string offenders;
  for (const auto& [u, v] : cuts) {
    if (!vertex_alive(u) || !vertex_alive(v)) {
      throw Error(ErrorCode::out_of_range, "cut endpoint out of range");
    }
    if (!has_edge(u, v) || !seen.insert(pack_edge(u, v)).second) {
      offenders += " " + std::to_string(u) + "-" + std::to_string(v);
    }
  }
  if (!offenders.empty()) {
    throw Error(ErrorCode::no_such_edge, "cuts missing or repeated:" + offenders);
  }
  std::unordered_set<VertexId> dirty;
  OldEntries old;
  for (const auto& [u, v] : cuts) mutate_cut(u, v, dirty, old);
  propagate(std::move(dirty), std::move(old));
}

RCForest::Idx RCForest::top_cluster(VertexId u) const {
  if (!vertex_alive(u)) {
    throw Error(ErrorCode::out_of_range, "vertex " + std::to_string(u) + " not alive");
  }
  Idx cur = vertices_[u].base;
  while (clusters_[cur].parent != kNone) {
    ++visits_;
    cur = clusters_[cur].parent;
  }
  return cur;
}

std::vector<RCForest::Idx> RCForest::parent_chain(Idx from) const {
  std::vector<Idx> chain{from};
  while (clusters_[chain.back()].parent != kNone) {
    ++visits_;
    chain.push_back(clusters_[chain.back()].parent);
  }
  return chain;
}

bool RCForest::connected(VertexId u, VertexId v) const {
  if (u == v) {
    return vertex_alive(u) ? true : throw Error(ErrorCode::out_of_range, "bad vertex");
  }
  return top_cluster(u) == top_cluster(v);
}

VertexId RCForest::representative(VertexId u) const {
  return clusters_[top_cluster(u)].min_vertex;
}

std::vector<bool> RCForest::batch_connected(
    const std::vector<std::pair<VertexId, VertexId>>& pairs) const {
  std::vector<bool> out;
  out.reserve(pairs.size());
  for (const auto& [u, v] : pairs) out.push_back(connected(u, v));
  return out;
}

std::uint32_t RCForest::component_size(VertexId u) const {
  return clusters_[top_cluster(u)].size;
}

VertexId RCForest::component_weight_argmax(VertexId u) const {
  const Cluster& top = clusters_[top_cluster(u)];
  return top.all_v.argmax;
}

std::optional<std::vector<RCForest::PathCluster>> RCForest::Fragments::take(
    VertexId b) const {
  for (int i = 0; i < 2; ++i) {
    if (bound[i] == b && to[i]) return to[i];
  }
  return std::nullopt;
}

RCForest::Fragments RCForest::climb_fragments(Idx child, Idx parent,
                                              Fragments f) const {
  ++visits_;
  const Cluster& p = clusters_[parent];
  VertexId x = p.rep;
  auto must = [](std::optional<std::vector<PathCluster>> frag) {
    if (!frag) throw Error(ErrorCode::invalid_argument, "corrupt path fragments");
    return std::move(*frag);
  };
  Fragments out;
  switch (p.kind) {
    case ClusterKind::unary: {
      Idx consumed = p.children[1];
      VertexId y = p.bound[0];
      if (child == consumed) {
        out.bound[0] = y;
        out.to[0] = f.take(y);
      } else {
        auto frag = must(f.take(x));
        frag.push_back({consumed, x, y});
        out.bound[0] = y;
        out.to[0] = std::move(frag);
      }
      break;
    }
    case ClusterKind::binary: {
      Idx e1 = p.children[1], e2 = p.children[2];
      VertexId a = p.bound[0], b = p.bound[1];
      if (child == e1) {
        out.bound[0] = a;
        out.to[0] = f.take(a);
        auto frag = must(f.take(x));
        frag.push_back({e2, x, b});
        out.bound[1] = b;
        out.to[1] = std::move(frag);
      } else if (child == e2) {
        out.bound[0] = b;
        out.to[0] = f.take(b);
        auto frag = must(f.take(x));
        frag.push_back({e1, x, a});
        out.bound[1] = a;
        out.to[1] = std::move(frag);
      } else {
        auto frag = must(f.take(x));
        auto f1 = frag;
        f1.push_back({e1, x, a});
        out.bound[0] = a;
        out.to[0] = std::move(f1);
        frag.push_back({e2, x, b});
        out.bound[1] = b;
        out.to[1] = std::move(frag);
      }
      break;
    }
    case ClusterKind::root: {
      out.bound[0] = x;
      out.to[0] = f.take(x);
      break;
    }
    default:
      throw Error(ErrorCode::invalid_argument, "corrupt hierarchy");
  }
  return out;
}

RCForest::PathDecomposition RCForest::path_decomposition(VertexId u,
                                                         VertexId v) const {
  if (!vertex_alive(u) || !vertex_alive(v)) {
    throw Error(ErrorCode::out_of_range, "path endpoint out of range");
  }
  PathDecomposition pd;
  if (u == v) {
    pd.joints = {u};
    pd.total_length = 1;
    return pd;
  }
  std::vector<Idx> chain_u = parent_chain(vertices_[u].base);
  std::vector<Idx> chain_v = parent_chain(vertices_[v].base);
  if (chain_u.back() != chain_v.back()) {
    throw Error(ErrorCode::not_connected,
                std::to_string(u) + " and " + std::to_string(v) + " are disconnected");
  }
  std::unordered_set<Idx> in_u(chain_u.begin(), chain_u.end());
  Idx meet = kNone;
  for (Idx c : chain_v) {
    if (in_u.count(c)) {
      meet = c;
      break;
    }
  }
  auto climb = [&](const std::vector<Idx>& chain) {
    // Stop at the direct child of the meet cluster; fragments there still
    // carry the path to the meet's contracted vertex.
    Fragments f;
    f.bound[0] = clusters_[chain[0]].rep;
    f.to[0] = std::vector<PathCluster>{};
    for (std::size_t i = 0; chain[i + 1] != meet; ++i) {
      f = climb_fragments(chain[i], chain[i + 1], std::move(f));
    }
    return f;
  };
  Fragments fu = climb(chain_u);
  Fragments fv = climb(chain_v);
  VertexId x = clusters_[meet].rep;
  auto pu = fu.take(x);
  auto pv = fv.take(x);
  if (!pu || !pv) {
    throw Error(ErrorCode::invalid_argument, "corrupt path fragments");
  }
  pd.clusters = std::move(*pu);
  for (auto it = pv->rbegin(); it != pv->rend(); ++it) {
    pd.clusters.push_back({it->cluster, it->far, it->near});
  }
  pd.joints.push_back(u);
  pd.total_length = 1;
  for (const PathCluster& pc : pd.clusters) {
    pd.joints.push_back(pc.far);
    pd.total_length += clusters_[pc.cluster].path_len + 1;
  }
  return pd;
}

RCForest::Idx RCForest::near_side_child(Idx cluster, VertexId near) const {
  const Cluster& c = clusters_[cluster];
  Idx e1 = c.children[1], e2 = c.children[2];
  const Cluster& c1 = clusters_[e1];
  if (c1.bound[0] == near || c1.bound[1] == near) return e1;
  return e2;
}

void RCForest::unpack_path(Idx cluster, VertexId near,
                           std::vector<VertexId>& out) const {
  ++visits_;
  const Cluster& c = clusters_[cluster];
  if (c.kind == ClusterKind::edge) return;
  Idx a = near_side_child(cluster, near);
  Idx b = c.children[1] == a ? c.children[2] : c.children[1];
  unpack_path(a, near, out);
  out.push_back(c.rep);
  unpack_path(b, c.rep, out);
}

std::vector<VertexId> RCForest::extract_path(VertexId u, VertexId v) const {
  PathDecomposition pd = path_decomposition(u, v);
  std::vector<VertexId> out{u};
  for (const PathCluster& pc : pd.clusters) {
    unpack_path(pc.cluster, pc.near, out);
    out.push_back(pc.far);
  }
  return out;
}

RankKey RCForest::path_max_edge(VertexId u, VertexId v) const {
  if (u == v) {
    throw Error(ErrorCode::same_vertex, "path endpoints coincide");
  }
  PathDecomposition pd = path_decomposition(u, v);
  bool has = false;
  RankKey best;
  for (const PathCluster& pc : pd.clusters) {
    const Cluster& c = clusters_[pc.cluster];
    if (c.has_path_emax && (!has || best < c.path_emax)) {
      best = c.path_emax;
      has = true;
    }
  }
  if (!has) {
    throw Error(ErrorCode::invalid_argument, "path carries no edges");
  }
  return best;
}

VertexId RCForest::path_median(VertexId u, VertexId v) const {
  PathDecomposition pd = path_decomposition(u, v);
  std::uint64_t target = pd.total_length / 2;
  std::uint64_t pos = 0;  // index of joints[i]
  if (target == 0) return pd.joints[0];
  for (std::size_t i = 0; i < pd.clusters.size(); ++i) {
    const PathCluster& pc = pd.clusters[i];
    std::uint32_t len = clusters_[pc.cluster].path_len;
    if (target <= pos + len) {
      // Descend for interior index target - pos - 1 (0-based from near).
      Idx cur = pc.cluster;
      VertexId near = pc.near;
      std::uint64_t q = target - pos - 1;
      while (true) {
        ++visits_;
        const Cluster& c = clusters_[cur];
        Idx a = near_side_child(cur, near);
        Idx b = c.children[1] == a ? c.children[2] : c.children[1];
        std::uint32_t la = clusters_[a].path_len;
        if (q < la) {
          cur = a;
        } else if (q == la) {
          return c.rep;
        } else {
          q -= la + 1;
          near = c.rep;
          cur = b;
        }
      }
    }
    pos += len + 1;
    if (target == pos) return pd.joints[i + 1];
  }
  throw Error(ErrorCode::invalid_argument, "median index out of path");
}

RCForest::Idx RCForest::first_edge_towards(const PathDecomposition& pd) const {
  Idx cur = pd.clusters[0].cluster;
  VertexId near = pd.clusters[0].near;
  while (clusters_[cur].kind != ClusterKind::edge) {
    ++visits_;
    cur = near_side_child(cur, near);
  }
  return cur;
}

std::uint32_t RCForest::subtree_size(VertexId root, VertexId v) const {
  if (!connected(root, v)) {
    throw Error(ErrorCode::not_connected, "vertex not in the rooted component");
  }
  if (root == v) return component_size(v);
  PathDecomposition pd = path_decomposition(v, root);
  Idx cur = first_edge_towards(pd);

  // Climb from the first path edge, tracking which side of that edge each
  // boundary vertex lies on, and counting base vertices on v's side.
  const Cluster& e0 = clusters_[cur];
  bool v_side[2];
  v_side[0] = e0.bound[0] == v;
  v_side[1] = e0.bound[1] == v;
  std::uint32_t count = 0;
  while (clusters_[cur].parent != kNone) {
    ++visits_;
    Idx pidx = clusters_[cur].parent;
    const Cluster& p = clusters_[pidx];
    const Cluster& c = clusters_[cur];
    VertexId x = p.rep;
    bool side_x = (c.bound[0] == x) ? v_side[0] : v_side[1];
    VertexId other_bound = (c.bound[0] == x) ? c.bound[1] : c.bound[0];
    bool side_other = (c.bound[0] == x) ? v_side[1] : v_side[0];
    if (side_x) ++count;  // x's own base vertex
    for (Idx child : p.children) {
      if (child == cur || child == p.children[0]) continue;
      if (side_x) count += clusters_[child].size;
    }
    // New boundary sides. A surviving boundary of cur keeps its side;
    // boundaries reached through x take x's side.
    if (p.kind == ClusterKind::binary) {
      VertexId a = p.bound[0], b = p.bound[1];
      v_side[0] = (a == other_bound) ? side_other : side_x;
      v_side[1] = (b == other_bound) ? side_other : side_x;
    } else if (p.kind == ClusterKind::unary) {
      v_side[0] = (p.bound[0] == other_bound) ? side_other : side_x;
      v_side[1] = false;
    }
    cur = pidx;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Path weight search.

void RCForest::PwsSession::visit(Idx c) {
  ++rc_->visits_;
  std::uint32_t& n = visit_counts_[c];
  ++n;
  if (n > max_visits_) max_visits_ = n;
}

RCForest::PwsSession::PwsSession(const RCForest& rc, VertexId u, VertexId v)
    : rc_(&rc) {
  PathDecomposition pd = rc.path_decomposition(u, v);
  elements_.reserve(pd.joints.size() + pd.clusters.size());
  for (std::size_t i = 0; i < pd.joints.size(); ++i) {
    Element j;
    j.is_joint = true;
    j.joint = pd.joints[i];
    j.joint_key = rc.vertices_[pd.joints[i]].weight;
    elements_.push_back(j);
    if (i < pd.clusters.size()) {
      const Cluster& c = rc.clusters_[pd.clusters[i].cluster];
      Element e;
      e.is_joint = false;
      e.cluster = pd.clusters[i].cluster;
      e.near = pd.clusters[i].near;
      e.has_interior = c.path_v.has;
      if (e.has_interior) {
        e.vmin = c.path_v.min_key;
        e.vmax = c.path_v.max_key;
        e.argmin = c.path_v.argmin;
        e.argmax = c.path_v.argmax;
      }
      elements_.push_back(e);
    }
  }
  // Monotonicity spot-check over the cached ranges (best effort).
  const RankKey* prev = nullptr;
  for (const Element& e : elements_) {
    const RankKey& lo = e.is_joint ? e.joint_key : e.vmin;
    const RankKey& hi = e.is_joint ? e.joint_key : e.vmax;
    if (!e.is_joint && !e.has_interior) continue;
    if (prev != nullptr && !(*prev < lo)) {
      throw Error(ErrorCode::non_monotone_path, "path weights are not increasing");
    }
    prev = &hi;
  }
}

RCForest::PwsResult RCForest::PwsSession::descend_loop(
    Idx cluster, VertexId near, std::optional<VertexId> pred_ctx,
    std::optional<VertexId> succ_ctx, const RankKey& w) {
  Idx cur = cluster;
  VertexId cur_near = near;
  while (true) {
    const Cluster& c = rc_->clusters_[cur];
    VertexId x = c.rep;
    const RankKey& key_x = rc_->vertices_[x].weight;
    Idx a = rc_->near_side_child(cur, cur_near);
    Idx b = c.children[1] == a ? c.children[2] : c.children[1];
    const Cluster& ca = rc_->clusters_[a];
    const Cluster& cb = rc_->clusters_[b];
    if (w == key_x) {
      return {ca.path_v.has ? std::optional(ca.path_v.argmax) : pred_ctx,
              cb.path_v.has ? std::optional(cb.path_v.argmin) : succ_ctx};
    }
    if (w < key_x) {
      if (!ca.path_v.has) return {pred_ctx, x};
      if (w < ca.path_v.min_key) return {pred_ctx, ca.path_v.argmin};
      if (ca.path_v.max_key < w) return {ca.path_v.argmax, x};
      stack_.push_back({a, cur_near, pred_ctx, x, key_x, false});
      visit(a);
      succ_ctx = x;
      cur = a;
    } else {
      if (!cb.path_v.has) return {x, succ_ctx};
      if (cb.path_v.max_key < w) return {cb.path_v.argmax, succ_ctx};
      if (w < cb.path_v.min_key) return {x, cb.path_v.argmin};
      // The first vertex above b's region is the current successor context.
      bool hi_open = !succ_ctx.has_value();
      RankKey hi_key = hi_open ? RankKey{} : rc_->vertices_[*succ_ctx].weight;
      stack_.push_back({b, x, x, succ_ctx, hi_key, hi_open});
      visit(b);
      pred_ctx = x;
      cur_near = x;
      cur = b;
    }
  }
}

RCForest::PwsResult RCForest::PwsSession::resume_frame(const Frame& frame,
                                                       const RankKey& w) {
  return descend_loop(frame.cluster, frame.near, frame.pred_ctx, frame.succ_ctx, w);
}

RCForest::PwsResult RCForest::PwsSession::query(const RankKey& w) {
  if (!first_ && !(last_w_ < w)) {
    throw Error(ErrorCode::non_increasing_queries,
                "session queries must be strictly increasing");
  }
  first_ = false;
  last_w_ = w;
  ++queries_;

  while (!stack_.empty()) {
    const Frame& f = stack_.back();
    if (f.hi_open || w < f.hi_key) break;
    visit(f.cluster);
    stack_.pop_back();
  }
  if (!stack_.empty()) {
    Frame f = stack_.back();
    return resume_frame(f, w);
  }

  while (top_pos_ < elements_.size()) {
    const Element& el = elements_[top_pos_];
    if (el.is_joint) {
      if (el.joint_key < w) {
        top_pred_ = el.joint;
        ++top_pos_;
        continue;
      }
      if (el.joint_key == w) {
        // Successor is the first weight past this joint.
        for (std::size_t p = top_pos_ + 1; p < elements_.size(); ++p) {
          if (elements_[p].is_joint) return {top_pred_, elements_[p].joint};
          if (elements_[p].has_interior) return {top_pred_, elements_[p].argmin};
        }
        return {top_pred_, std::nullopt};
      }
      return {top_pred_, el.joint};
    }
    if (!el.has_interior || el.vmax < w) {
      if (el.has_interior) top_pred_ = el.argmax;
      ++top_pos_;
      continue;
    }
    if (w < el.vmin) return {top_pred_, el.argmin};
    // Descend. The next element is always a joint.
    const Element& above = elements_[top_pos_ + 1];
    stack_.push_back(
        {el.cluster, el.near, top_pred_, above.joint, above.joint_key, false});
    visit(el.cluster);
    return descend_loop(el.cluster, el.near, top_pred_, above.joint, w);
  }
  return {top_pred_, std::nullopt};
}

RCForest::PwsResult RCForest::path_weight_search(VertexId u, VertexId v,
                                                 const RankKey& w) const {
  PwsSession session(*this, u, v);
  return session.query(w);
}

RCForest::BatchPwsResult RCForest::pws_monotone_batch(
    VertexId u, VertexId v, const std::vector<RankKey>& ws) const {
  PwsSession session(*this, u, v);
  BatchPwsResult out;
  out.results.reserve(ws.size());
  for (const RankKey& w : ws) out.results.push_back(session.query(w));
  out.max_node_visits = session.max_node_visits();
  return out;
}

// ---------------------------------------------------------------------------
// Introspection.

std::uint32_t RCForest::hierarchy_height() const {
  std::int32_t max_round = -1;
  for (const Cluster& c : clusters_) {
    if (!c.dead && c.round > max_round) max_round = c.round;
  }
  return static_cast<std::uint32_t>(max_round + 2);
}

std::uint32_t RCForest::max_height(std::size_t n) {
  return static_cast<std::uint32_t>(8.0 * std::log2(static_cast<double>(n) + 2.0)) + 8;
}

void RCForest::audit() const {
  // Round-by-round replay: entries must be the exact function of the
  // previous round, decisions must match, and contracted sets must be
  // independent among eligible neighbors.
  for (std::size_t r = 0; r < rounds_.size(); ++r) {
    const RoundMap& cur = rounds_[r];
    for (const auto& [v, rv] : cur) {
      bool contract = decide_contract(cur, v, static_cast<std::uint32_t>(r));
      if (contract != (rv.built != kNone)) {
        throw Error(ErrorCode::invalid_argument,
                    "audit: decision mismatch at round " + std::to_string(r) +
                        " vertex " + std::to_string(v));
      }
      for (const Half& h : rv.nbrs) {
        const auto it = cur.find(h.nbr);
        if (it == cur.end()) {
          throw Error(ErrorCode::invalid_argument, "audit: dangling neighbor");
        }
        bool mutual = false;
        for (const Half& back : it->second.nbrs) {
          if (back.nbr == v && back.edge == h.edge) mutual = true;
        }
        if (!mutual) {
          throw Error(ErrorCode::invalid_argument, "audit: asymmetric adjacency");
        }
        if (rv.built != kNone && it->second.built != kNone) {
          throw Error(ErrorCode::invalid_argument,
                      "audit: adjacent contractions in one round");
        }
      }
      if (rv.built != kNone) {
        Cluster spec = make_build(cur, v, static_cast<std::uint32_t>(r));
        if (!build_matches(rv.built, spec)) {
          throw Error(ErrorCode::invalid_argument, "audit: stale build");
        }
      }
      // Replay the next-round entry.
      if (r + 1 < rounds_.size()) {
        const RoundMap& next = rounds_[r + 1];
        auto nit = next.find(v);
        if (rv.built != kNone) {
          if (nit != next.end()) {
            throw Error(ErrorCode::invalid_argument,
                        "audit: contracted vertex still live");
          }
        } else {
          RoundVertex expect;
          for (const Half& h : rv.nbrs) {
            const RoundVertex& nb = cur.at(h.nbr);
            if (nb.built != kNone) {
              const Cluster& c = clusters_[nb.built];
              if (c.kind == ClusterKind::unary) {
                expect.unaries.push_back(nb.built);
                continue;
              }
              VertexId other = c.bound[0] == v ? c.bound[1] : c.bound[0];
              expect.nbrs.push_back({other, nb.built});
            } else {
              expect.nbrs.push_back(h);
            }
          }
          for (Idx un : rv.unaries) expect.unaries.push_back(un);
          std::sort(expect.nbrs.begin(), expect.nbrs.end(),
                    [](const Half& a, const Half& b) { return a.nbr < b.nbr; });
          std::sort(expect.unaries.begin(), expect.unaries.end(),
                    [this](Idx a, Idx b) {
                      return clusters_[a].rep < clusters_[b].rep;
                    });
          if (nit == next.end() || !(nit->second == expect)) {
            throw Error(ErrorCode::invalid_argument,
                        "audit: next-round entry mismatch");
          }
        }
      } else if (rv.built == kNone) {
        throw Error(ErrorCode::invalid_argument, "audit: uncontracted frontier");
      }
    }
  }
  // Aggregates bottom-up.
  for (const Cluster& c : clusters_) {
    if (c.dead || c.kind == ClusterKind::vertex || c.kind == ClusterKind::edge) {
      continue;
    }
    Cluster copy = c;
    compute_aggregates(copy);
    bool ok = copy.size == c.size && copy.path_len == c.path_len &&
              copy.min_vertex == c.min_vertex &&
              copy.path_v.has == c.path_v.has && copy.all_v.has == c.all_v.has &&
              copy.has_path_emax == c.has_path_emax;
    if (ok && c.path_v.has) {
      ok = copy.path_v.min_key == c.path_v.min_key &&
           copy.path_v.max_key == c.path_v.max_key &&
           copy.path_v.argmin == c.path_v.argmin &&
           copy.path_v.argmax == c.path_v.argmax;
    }
    if (ok && c.all_v.has) {
      ok = copy.all_v.min_key == c.all_v.min_key &&
           copy.all_v.max_key == c.all_v.max_key;
    }
    if (ok && c.has_path_emax) ok = copy.path_emax == c.path_emax;
    if (!ok) {
      throw Error(ErrorCode::invalid_argument, "audit: aggregate mismatch");
    }
    Idx self = static_cast<Idx>(&c - clusters_.data());
    for (Idx child : c.children) {
      if (clusters_[child].dead) {
        throw Error(ErrorCode::invalid_argument, "audit: dead child");
      }
      if (clusters_[child].parent != self) {
        throw Error(ErrorCode::invalid_argument, "audit: parent mismatch");
      }
    }
  }
  std::size_t n = alive_vertices_;
  if (hierarchy_height() > max_height(n)) {
    throw Error(ErrorCode::invalid_argument, "audit: hierarchy too tall");
  }
}

std::string RCForest::debug_dump() const {
  struct Row {
    std::int32_t level;
    VertexId min_v;
    const Cluster* c;
  };
  std::vector<Row> rows;
  for (const Cluster& c : clusters_) {
    if (c.dead) continue;
    VertexId mv = c.min_vertex;
    for (VertexId b : c.bound) {
      if (b != kNoVertex && (mv == kNoVertex || b < mv)) mv = b;
    }
    rows.push_back({c.round + 1, mv, &c});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.level != b.level) return a.level < b.level;
    if (a.min_v != b.min_v) return a.min_v < b.min_v;
    return static_cast<int>(a.c->kind) < static_cast<int>(b.c->kind);
  });
  const char* kind_names = "VEUBR";
  std::ostringstream os;
  for (const Row& r : rows) {
    os << r.level << ' ' << kind_names[static_cast<int>(r.c->kind)];
    os << " rep=" << static_cast<std::int64_t>(r.c->rep == kNoVertex ? -1 : r.c->rep);
    os << " bound=" << static_cast<std::int64_t>(r.c->bound[0] == kNoVertex ? -1 : r.c->bound[0])
       << ',' << static_cast<std::int64_t>(r.c->bound[1] == kNoVertex ? -1 : r.c->bound[1]);
    os << " size=" << r.c->size << " plen=" << r.c->path_len;
    os << " nchildren=" << r.c->children.size();
    os << '\n';
  }
  return os.str();
}

}  // namespace dendra
