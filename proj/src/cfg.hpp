// Copyright 2026 The TAH Authors. All Rights Reserved.
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

#ifndef TAH_CFG_HPP
#define TAH_CFG_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tah {

enum class CfgFormat { kJson, kEdgeList };

struct DegreePair {
  uint32_t indegree = 0;
  uint32_t outdegree = 0;

  bool operator==(const DegreePair&) const = default;
};

// Immutable, validated directed graph.  Node ids are arbitrary
// non-negative integers; everything downstream works on dense indices so
// results cannot depend on the labelling.
class Cfg {
 public:
  using Edge = std::pair<uint32_t, uint32_t>;

  // Validates and canonicalizes (sorts nodes and edges).  Throws Error
  // with TAH_ERR_SEMANTIC on duplicate nodes/edges or dangling edges.
  static Cfg from_parts(std::string name, std::vector<uint32_t> nodes,
                        std::vector<Edge> edges);

  static Cfg parse(std::string_view text, CfgFormat format);
  std::string serialize(CfgFormat format) const;

  const std::string& name() const { return name_; }
  const std::vector<uint32_t>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  size_t node_count() const { return nodes_.size(); }
  size_t edge_count() const { return edges_.size(); }

  // Throws TAH_ERR_UNKNOWN_NODE when the id is not in the graph.
  DegreePair degrees(uint32_t node) const;

  // Dense-index views used by the algorithms.  Indices follow the
  // ascending order of node ids.
  size_t index_of(uint32_t node) const;  // throws when absent
  DegreePair degrees_at(size_t index) const {
    return {indegree_[index], outdegree_[index]};
  }
  std::span<const uint32_t> successors_at(size_t index) const {
    return {adjacency_.data() + offsets_[index],
            offsets_[index + 1] - offsets_[index]};
  }

  bool operator==(const Cfg& other) const {
    return name_ == other.name_ && nodes_ == other.nodes_ &&
           edges_ == other.edges_;
  }

 private:
  Cfg() = default;
  void build_index();

  std::string name_;
  std::vector<uint32_t> nodes_;  // ascending, unique
  std::vector<Edge> edges_;      // ascending lexicographic, unique

  // CSR over dense indices.
  std::vector<uint32_t> offsets_;
  std::vector<uint32_t> adjacency_;
  std::vector<uint32_t> indegree_;
  std::vector<uint32_t> outdegree_;
};

}  // namespace tah

#endif  // TAH_CFG_HPP
