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
// Dynamic Cartesian trees as an adapter over the dendrogram of a path
// graph: array positions are path vertices, element values are edge
// weights. End insertions and deletions touch at most two pointers;
// arbitrary positions reduce to a vertex split or an edge contraction.

#ifndef DENDRA_CARTESIAN_HPP
#define DENDRA_CARTESIAN_HPP

#include <cstdint>
#include <vector>

#include "dendra/dendrogram.hpp"
#include "dendra/oracle.hpp"

namespace dendra {

enum class CartesianEnd { front, back };

class CartesianTree {
 public:
  using Order = oracle::CartesianOrder;

  struct TreeNode {
    std::int32_t parent = -1;  // element positions; -1 at the root
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  explicit CartesianTree(Order order = Order::min_root);
  CartesianTree(const std::vector<double>& values, Order order);

  std::size_t size() const { return elements_.size(); }
  Order order() const { return order_; }
  std::vector<double> in_order() const;
  std::vector<TreeNode> to_tree() const;

  UpdateReport push(CartesianEnd end, double value);
  UpdateReport pop(CartesianEnd end);
  UpdateReport insert_at(std::size_t pos, double value);
  UpdateReport delete_at(std::size_t pos);

  // Exact structural comparison against the recursive construction.
  void verify() const;

  const DendrogramState& backing() const { return state_; }

 private:
  struct Element {
    double value;
    VertexId left_vertex;
    VertexId right_vertex;
  };

  Weight backing_weight(double value) const;
  EdgeKey edge_at(std::size_t pos) const;

  Order order_;
  DendrogramState state_;
  std::vector<Element> elements_;
  std::vector<VertexId> spare_vertices_;  // detached path vertices, reusable
};

}  // namespace dendra

#endif  // DENDRA_CARTESIAN_HPP
