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
// Read-only clustering queries over the maintained state. The threshold
// is inclusive by default (edges with weight <= tau merge); the strict
// variant (< tau) sits behind a flag.

#ifndef DENDRA_QUERIES_HPP
#define DENDRA_QUERIES_HPP

#include <vector>

#include "dendra/dendrogram.hpp"

namespace dendra::queries {

struct ThresholdParam {
  Weight tau;
  bool strict = false;  // merge weights < tau instead of <= tau

  // The first rank key past every merging edge.
  RankKey boundary() const {
    return strict ? RankKey::below_weight(tau) : RankKey::above_weight(tau);
  }
};

// True iff s and t fall in one cluster once every edge at or below the
// threshold has merged (path maximum against tau).
bool threshold_query(const DendrogramState& state, VertexId s, VertexId t,
                     ThresholdParam tau);

// Number of vertices in u's cluster at the threshold.
std::uint32_t cluster_size(const DendrogramState& state, VertexId u,
                           ThresholdParam tau);

// The vertex set of u's cluster, ascending.
std::vector<VertexId> cluster_report(const DendrogramState& state, VertexId u,
                                     ThresholdParam tau);

// All clusters at the threshold: ordered by minimum member, members
// ascending.
std::vector<std::vector<VertexId>> flat_clustering(const DendrogramState& state,
                                                   ThresholdParam tau);

}  // namespace dendra::queries

#endif  // DENDRA_QUERIES_HPP
