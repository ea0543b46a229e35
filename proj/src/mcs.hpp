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

#ifndef TAH_MCS_HPP
#define TAH_MCS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "cfg.hpp"
#include "features.hpp"

namespace tah {

inline constexpr uint32_t kDefaultMcsBudget = 24;

struct McsResult {
  uint32_t size = 0;
  // Injective (node id in a, node id in b) correspondence achieving the
  // size; adjacency and non-adjacency are preserved in both directions.
  std::vector<std::pair<uint32_t, uint32_t>> mapping;
};

// Backtracking search for the largest common induced subgraph.  The
// common subgraph need not be connected.  Deterministic: nodes are tried
// in ascending id order.  Throws TAH_ERR_BUDGET_EXCEEDED when either
// graph has more than node_budget nodes.
McsResult mcs_size(const Cfg& a, const Cfg& b,
                   uint32_t node_budget = kDefaultMcsBudget);

// mcs size / max(|a|, |b|); both graphs must be nonempty.
double mcs_similarity(const Cfg& a, const Cfg& b,
                      uint32_t node_budget = kDefaultMcsBudget);

// Reference extractor for validating extract_features: literal
// depth-first enumeration collecting each walk of 1..n nodes as a node
// list, then abstracting every node independently.  Guarded to graphs of
// at most 12 nodes.
GraphSignature enumerate_walks_oracle(const Cfg& g, uint32_t n);

}  // namespace tah

#endif  // TAH_MCS_HPP
