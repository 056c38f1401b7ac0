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

#include "dendra/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace dendra::oracle {

namespace {

// Plain union-find, local to the oracle on purpose.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace

ParentMap kruskal_sld(std::size_t num_vertices, const std::vector<Edge>& edges) {
  std::vector<Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end(), rank_less);

  UnionFind uf(num_vertices);
  // Top dendrogram node of each cluster, keyed by union-find root.
  std::vector<std::optional<EdgeKey>> top(num_vertices);

  ParentMap out;
  for (const Edge& e : sorted) {
    std::size_t ra = uf.find(e.key.lo);
    std::size_t rb = uf.find(e.key.hi);
    if (ra == rb) {
      throw Error(ErrorCode::cycle_detected, "edge " + e.key.str() + " closes a cycle");
    }
    out.add_node(e.key, e.weight);
    if (top[ra]) out.set_parent(*top[ra], e.key);
    if (top[rb]) out.set_parent(*top[rb], e.key);
    uf.unite(ra, rb);
    std::size_t r = uf.find(e.key.lo);
    top[r] = e.key;
  }
  return out;
}

ChangeSet diff(const ParentMap& before, const ParentMap& after) {
  ChangeSet out;
  for (const auto& [key, entry] : before.entries()) {
    if (!after.contains(key)) {
      out.removed.push_back(key);
    } else if (after.parent(key) != entry.parent) {
      out.changed.push_back({key, entry.parent, after.parent(key)});
    }
  }
  for (const auto& [key, entry] : after.entries()) {
    if (!before.contains(key)) out.added.push_back(key);
  }
  auto by_key = [](EdgeKey a, EdgeKey b) { return a < b; };
  std::sort(out.added.begin(), out.added.end(), by_key);
  std::sort(out.removed.begin(), out.removed.end(), by_key);
  std::sort(out.changed.begin(), out.changed.end(),
            [](const auto& a, const auto& b) { return a.key < b.key; });
  return out;
}

TheoremInstance gen_theorem_instance(std::uint32_t height, std::uint32_t num_stars) {
  if (height < 1 || num_stars < 2) {
    throw Error(ErrorCode::invalid_argument,
                "theorem instance needs height >= 1 and num_stars >= 2");
  }
  TheoremInstance inst;
  inst.num_vertices = static_cast<std::size_t>(num_stars) * (height + 1);
  for (std::uint32_t i = 1; i <= num_stars; ++i) {
    VertexId center = i - 1;
    inst.centers.push_back(center);
    for (std::uint32_t j = 0; j < height; ++j) {
      VertexId leaf = num_stars + (i - 1) * height + j;
      double w = static_cast<double>(num_stars) * j + i;
      inst.edges.push_back(Edge(center, leaf, Weight(w)));
    }
  }
  return inst;
}

std::uint64_t Rng::next() {
  // SplitMix64.
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::next_below(std::uint64_t bound) {
  if (bound == 0) return 0;
  return next() % bound;
}

double Rng::next_weight() {
  // Coarse grid keeps values exactly representable and leaves room for
  // occasional ties, which exercise the key tie-break.
  return static_cast<double>(next_below(1u << 24)) / 16.0;
}

RandomForest gen_random_forest(std::size_t n, std::size_t num_edges,
                               std::uint64_t seed) {
  if (n == 0 || num_edges + 1 > n) {
    throw Error(ErrorCode::invalid_argument, "infeasible forest parameters");
  }
  Rng rng(seed);
  UnionFind uf(n);
  RandomForest out{n, {}};
  std::unordered_map<EdgeKey, Weight, EdgeKeyHash> used;
  while (out.edges.size() < num_edges) {
    VertexId u = static_cast<VertexId>(rng.next_below(n));
    VertexId v = static_cast<VertexId>(rng.next_below(n));
    if (u == v) continue;
    if (uf.find(u) == uf.find(v)) continue;
    Edge e(u, v, Weight(rng.next_weight()));
    if (!used.emplace(e.key, e.weight).second) continue;
    uf.unite(u, v);
    out.edges.push_back(e);
  }
  return out;
}

namespace {

// Working copy of a forest used while generating valid update streams.
class StreamForest {
 public:
  StreamForest(std::size_t n, const std::vector<Edge>& edges) : n_(n) {
    for (const Edge& e : edges) edges_.push_back(e);
  }

  std::size_t n() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  bool spanning() const { return edges_.size() + 1 >= n_; }

  // Components recomputed from scratch; the generator favors simplicity.
  std::vector<std::vector<VertexId>> components() const {
    UnionFind uf(n_);
    for (const Edge& e : edges_) uf.unite(e.key.lo, e.key.hi);
    std::vector<std::vector<VertexId>> by_root(n_);
    for (VertexId v = 0; v < n_; ++v) by_root[uf.find(v)].push_back(v);
    std::vector<std::vector<VertexId>> out;
    for (auto& c : by_root) {
      if (!c.empty()) out.push_back(std::move(c));
    }
    return out;
  }

  bool has_key(EdgeKey k) const {
    for (const Edge& e : edges_) {
      if (e.key == k) return true;
    }
    return false;
  }

  void insert(const Edge& e) { edges_.push_back(e); }
  void erase(EdgeKey k) {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (edges_[i].key == k) {
        edges_[i] = edges_.back();
        edges_.pop_back();
        return;
      }
    }
  }
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
};

Edge pick_insertable(StreamForest& f, Rng& rng) {
  auto comps = f.components();
  // Choose two distinct components, then a vertex from each.
  std::size_t a = rng.next_below(comps.size());
  std::size_t b = rng.next_below(comps.size() - 1);
  if (b >= a) ++b;
  VertexId u = comps[a][rng.next_below(comps[a].size())];
  VertexId v = comps[b][rng.next_below(comps[b].size())];
  return Edge(u, v, Weight(rng.next_weight()));
}

Edge pick_erasable(StreamForest& f, Rng& rng) {
  return f.edges()[rng.next_below(f.num_edges())];
}

}  // namespace

std::vector<Update> gen_update_stream(const RandomForest& forest, std::size_t ops,
                                      std::uint64_t seed, StreamProfile profile,
                                      std::size_t batch_size) {
  Rng rng(seed);
  StreamForest f(forest.num_vertices, forest.edges);
  std::vector<Update> out;

  if (profile == StreamProfile::batch) {
    if (batch_size == 0) {
      throw Error(ErrorCode::invalid_argument, "batch size must be positive");
    }
    while (out.size() < ops) {
      bool can_insert = f.num_edges() + batch_size + 1 <= f.n();
      bool can_erase = f.num_edges() >= batch_size;
      bool do_insert = can_insert && (!can_erase || rng.next_below(2) == 0);
      if (!can_insert && !can_erase) break;
      Update u;
      if (do_insert) {
        u.kind = Update::Kind::batch_insert;
        for (std::size_t i = 0; i < batch_size; ++i) {
          Edge e = pick_insertable(f, rng);
          f.insert(e);
          u.edges.push_back(e);
        }
      } else {
        u.kind = Update::Kind::batch_erase;
        for (std::size_t i = 0; i < batch_size; ++i) {
          Edge e = pick_erasable(f, rng);
          f.erase(e.key);
          u.edges.push_back(e);
        }
      }
      out.push_back(std::move(u));
    }
    return out;
  }

  std::uint64_t insert_weight = profile == StreamProfile::insert_heavy ? 9
                                : profile == StreamProfile::delete_heavy ? 1
                                                                        : 5;
  for (std::size_t i = 0; i < ops; ++i) {
    bool can_insert = !f.spanning();
    bool can_erase = f.num_edges() > 0;
    if (!can_insert && !can_erase) break;
    bool do_insert =
        can_insert && (!can_erase || rng.next_below(10) < insert_weight);
    Update u;
    if (do_insert) {
      Edge e = pick_insertable(f, rng);
      f.insert(e);
      u.kind = Update::Kind::insert;
      u.edges.push_back(e);
    } else {
      Edge e = pick_erasable(f, rng);
      f.erase(e.key);
      u.kind = Update::Kind::erase;
      u.edges.push_back(e);
    }
    out.push_back(std::move(u));
  }
  return out;
}

namespace {

std::int32_t build_cartesian(const std::vector<double>& values,
                             const std::vector<EdgeKey>* tiebreak,
                             CartesianOrder order, std::int32_t lo, std::int32_t hi,
                             std::vector<CartesianNode>& nodes) {
  if (lo > hi) return -1;
  std::int32_t pick = lo;
  for (std::int32_t i = lo + 1; i <= hi; ++i) {
    bool better;
    if (values[i] != values[pick]) {
      better = order == CartesianOrder::min_root ? values[i] < values[pick]
                                                 : values[i] > values[pick];
    } else if (tiebreak != nullptr) {
      // The root is the rank maximum in the backing order, so on equal
      // values the larger key wins regardless of orientation.
      better = (*tiebreak)[pick] < (*tiebreak)[i];
    } else {
      better = true;  // positional tie-break: the later element wins
    }
    if (better) pick = i;
  }
  std::int32_t l = build_cartesian(values, tiebreak, order, lo, pick - 1, nodes);
  std::int32_t r = build_cartesian(values, tiebreak, order, pick + 1, hi, nodes);
  nodes[pick].left = l;
  nodes[pick].right = r;
  if (l >= 0) nodes[l].parent = pick;
  if (r >= 0) nodes[r].parent = pick;
  return pick;
}

}  // namespace

std::vector<CartesianNode> cartesian_recursive(const std::vector<double>& values,
                                               CartesianOrder order) {
  std::vector<CartesianNode> nodes(values.size());
  if (!values.empty()) {
    build_cartesian(values, nullptr, order, 0,
                    static_cast<std::int32_t>(values.size()) - 1, nodes);
  }
  return nodes;
}

std::vector<CartesianNode> cartesian_recursive_keyed(
    const std::vector<double>& values, const std::vector<EdgeKey>& tiebreak,
    CartesianOrder order) {
  std::vector<CartesianNode> nodes(values.size());
  if (!values.empty()) {
    build_cartesian(values, &tiebreak, order, 0,
                    static_cast<std::int32_t>(values.size()) - 1, nodes);
  }
  return nodes;
}

std::vector<std::vector<VertexId>> uf_threshold(std::size_t num_vertices,
                                                const std::vector<Edge>& edges,
                                                Weight tau, bool strict) {
  UnionFind uf(num_vertices);
  for (const Edge& e : edges) {
    bool merge = strict ? e.weight < tau : e.weight <= tau;
    if (merge) uf.unite(e.key.lo, e.key.hi);
  }
  std::vector<std::vector<VertexId>> by_root(num_vertices);
  for (VertexId v = 0; v < num_vertices; ++v) {
    by_root[uf.find(v)].push_back(v);
  }
  std::vector<std::vector<VertexId>> out;
  for (auto& c : by_root) {
    if (!c.empty()) {
      std::sort(c.begin(), c.end());
      out.push_back(std::move(c));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return out;
}

LinearPwsResult linear_pws(const std::vector<RankKey>& seq, const RankKey& w) {
  LinearPwsResult out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i] < w) {
      if (!out.pred || seq[*out.pred] < seq[i]) out.pred = i;
    } else if (w < seq[i]) {
      if (!out.succ || seq[i] < seq[*out.succ]) out.succ = i;
    }
  }
  return out;
}

std::size_t linear_median(std::size_t length) { return length / 2; }

}  // namespace dendra::oracle
