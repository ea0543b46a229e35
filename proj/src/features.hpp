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

#ifndef TAH_FEATURES_HPP
#define TAH_FEATURES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfg.hpp"

namespace tah {

// One of the 16 degree-based block types: both counts clamped to [0,3].
struct NodeType {
  uint8_t in_bucket = 0;
  uint8_t out_bucket = 0;

  bool operator==(const NodeType&) const = default;
};

NodeType abstract_node(DegreePair degrees);

// A feature is a sequence of 1..n types in walk order.
using NGramFeature = std::vector<NodeType>;

// "02|12|21" style key: two-digit type codes joined by '|'.  Injective;
// decode_key is the exact inverse.
std::string canonical_key(std::span<const NodeType> feature);
NGramFeature decode_key(std::string_view key);

// A k-gram (k >= 2) may contain a zero-indegree type only at the front
// and a zero-outdegree type only at the back.
bool is_valid_feature(std::span<const NodeType> feature);

// Count of valid features of length <= n; saturates at UINT64_MAX.
uint64_t feature_space_size(uint32_t n);

// Sparse count vector over feature keys plus the total count.
class GraphSignature {
 public:
  using Entry = std::pair<std::string, uint32_t>;

  GraphSignature(uint32_t gram_size, std::vector<Entry> entries);

  uint32_t gram_size() const { return gram_size_; }
  uint32_t total() const { return total_; }
  const std::vector<Entry>& entries() const { return entries_; }

  // "key<TAB>count" lines sorted by key, then "TOTAL<TAB><total>".
  std::string export_text() const;

  bool operator==(const GraphSignature& other) const {
    return gram_size_ == other.gram_size_ && entries_ == other.entries_;
  }

 private:
  uint32_t gram_size_;
  uint32_t total_;
  std::vector<Entry> entries_;  // sorted by key, counts > 0
};

// Counts the type sequence of every directed walk of 1..n nodes starting
// at each node.  Walks may revisit nodes; the depth bound keeps the
// enumeration finite on cyclic graphs.  Throws TAH_ERR_COUNT_OVERFLOW
// when a count or the total leaves 32-bit range.
GraphSignature extract_features(const Cfg& g, uint32_t n);

}  // namespace tah

#endif  // TAH_FEATURES_HPP
