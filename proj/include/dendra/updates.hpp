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
// The update algorithms over a DendrogramState: spine-merge insertion,
// spine-unmerge deletion, output-sensitive insertion driven by path weight
// searches, a divide-and-conquer spine merge, and homogeneous batch
// insertion (star merges over incidence-graph contraction) and deletion.

#ifndef DENDRA_UPDATES_HPP
#define DENDRA_UPDATES_HPP

#include <optional>
#include <unordered_map>
#include <vector>

#include "dendra/core.hpp"
#include "dendra/dendrogram.hpp"

namespace dendra::updates {

// All modes produce identical parent maps; they differ in how merges and
// filters are carried out.
enum class UpdateMode { seq_h, seq_os, par_h, par_os };

const char* mode_name(UpdateMode mode);
std::optional<UpdateMode> parse_mode(const std::string& name);

UpdateReport insert(DendrogramState& state, VertexId u, VertexId v, Weight w,
                    UpdateMode mode = UpdateMode::seq_h);
UpdateReport insert_output_sensitive(DendrogramState& state, VertexId u,
                                     VertexId v, Weight w);
UpdateReport erase(DendrogramState& state, VertexId u, VertexId v,
                   UpdateMode mode = UpdateMode::seq_h);

UpdateReport batch_insert(DendrogramState& state, const std::vector<Edge>& edges);
UpdateReport batch_erase(DendrogramState& state, const std::vector<EdgeKey>& keys);

// Merges two spines from distinct components into one rank-ordered chain,
// rewiring only the spine nodes. Exposed for direct testing.
UpdateReport merge_spines(DendrogramState& state, const Spine& a, const Spine& b,
                          UpdateMode mode = UpdateMode::seq_h);

// Divide-and-conquer merge: median plus weight searches locate the split
// points, halves merge recursively, links and cuts land immediately.
UpdateReport merge_spines_dc(DendrogramState& state, const Spine& a,
                             const Spine& b);

// One star of a batch insertion: leaf components hanging off one center
// component, each by a single new edge.
struct StarMergePlan {
  struct Leaf {
    Edge batch_edge;        // (center_vertex, leaf_vertex, w)
    VertexId center_vertex; // endpoint inside the center component
    VertexId leaf_vertex;   // endpoint inside the leaf component
    Spine spine;            // leaf-side characteristic spine, new node included
    Spine center_spine;     // center-side characteristic spine (may be empty)
  };
  struct Segment {
    std::vector<Edge> nodes;            // bottom to top, consecutive in rank
    std::optional<EdgeKey> branch_above; // branch node the top points at
  };
  std::vector<Leaf> leaves;
  std::vector<EdgeKey> branch_nodes;            // two children inside the union
  std::vector<Segment> segments;
  // Subspines grouped per segment (index aligned with segments; the last
  // group holds spines when the center component has no edges at all).
  std::vector<std::vector<std::vector<Edge>>> groups;
};

// Builds the plan for one star: runs the leaf-side pre-merges, extracts
// both characteristic spines per leaf, splits the center union at its
// branching nodes, and assigns subspines to segments.
StarMergePlan build_star_plan(DendrogramState& state, std::vector<Edge> star_edges,
                              UpdateReport& report);

// Applies a star plan: multiway-merges every group with its segment and
// rewires the chain tops to the branch points above.
void star_merge(DendrogramState& state, const StarMergePlan& plan,
                UpdateReport& report);

}  // namespace dendra::updates

#endif  // DENDRA_UPDATES_HPP
