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
// Brute-force references and instance generators. Everything here is an
// independent code path: separate union-find, separate sorting, no shared
// machinery with the maintained structures it checks.

#ifndef DENDRA_ORACLE_HPP
#define DENDRA_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dendra/core.hpp"

namespace dendra::oracle {

struct ChangeSet {
  struct Change {
    EdgeKey key;
    std::optional<EdgeKey> old_parent;
    std::optional<EdgeKey> new_parent;
  };
  std::vector<Change> changed;
  std::vector<EdgeKey> added;
  std::vector<EdgeKey> removed;

  std::size_t size() const { return changed.size() + added.size() + removed.size(); }
};

// Kruskal sweep: edges in rank order, union-find with per-cluster top node.
// Throws cycle_detected on non-forest input.
ParentMap kruskal_sld(std::size_t num_vertices, const std::vector<Edge>& edges);

ChangeSet diff(const ParentMap& before, const ParentMap& after);

// The star family whose center-center insertion changes exactly 2h+1
// pointers: star i (1-based) has h leaf edges with weights
// i, num_stars + i, 2*num_stars + i, ...
struct TheoremInstance {
  std::size_t num_vertices;
  std::vector<Edge> edges;
  std::vector<VertexId> centers;
};
TheoremInstance gen_theorem_instance(std::uint32_t height, std::uint32_t num_stars);

// Deterministic generator (SplitMix64) so fixtures are identical across
// platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  std::uint64_t next_below(std::uint64_t bound);  // uniform-ish in [0, bound)
  double next_weight();                           // finite, coarse grid

 private:
  std::uint64_t state_;
};

struct RandomForest {
  std::size_t num_vertices;
  std::vector<Edge> edges;
};
RandomForest gen_random_forest(std::size_t n, std::size_t num_edges,
                               std::uint64_t seed);

enum class StreamProfile { insert_heavy, delete_heavy, mixed, batch };

struct Update {
  enum class Kind { insert, erase, batch_insert, batch_erase } kind;
  std::vector<Edge> edges;  // single ops use edges[0]; weight unused for erase
};

// A stream that is valid when applied in order: the generator tracks
// connectivity so inserts never close cycles and deletes always exist.
std::vector<Update> gen_update_stream(const RandomForest& forest, std::size_t ops,
                                      std::uint64_t seed, StreamProfile profile,
                                      std::size_t batch_size = 8);

// Recursive Cartesian tree; nodes indexed by sequence position.
struct CartesianNode {
  std::int32_t parent = -1;
  std::int32_t left = -1;
  std::int32_t right = -1;
};
enum class CartesianOrder { min_root, max_root };

// Ties broken toward the earlier position for min_root (later for
// max_root), matching a (value, position) lexicographic key.
std::vector<CartesianNode> cartesian_recursive(const std::vector<double>& values,
                                               CartesianOrder order);
// Same, with explicit per-element tie-break keys.
std::vector<CartesianNode> cartesian_recursive_keyed(
    const std::vector<double>& values, const std::vector<EdgeKey>& tiebreak,
    CartesianOrder order);

// Partition of [0, n) after merging all edges with weight <= tau
// (or < tau when strict). Clusters ordered by minimum member.
std::vector<std::vector<VertexId>> uf_threshold(std::size_t num_vertices,
                                                const std::vector<Edge>& edges,
                                                Weight tau, bool strict = false);

// Linear scans over a weight-monotone sequence.
struct LinearPwsResult {
  std::optional<std::size_t> pred;  // index of max element < w
  std::optional<std::size_t> succ;  // index of min element > w
};
LinearPwsResult linear_pws(const std::vector<RankKey>& seq, const RankKey& w);
std::size_t linear_median(std::size_t length);  // index floor(len/2)

}  // namespace dendra::oracle

#endif  // DENDRA_ORACLE_HPP
