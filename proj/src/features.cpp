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

#include "features.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <unordered_map>

#include "error.hpp"

namespace tah {

namespace {

constexpr uint8_t kMaxBucket = 3;

uint8_t clamp_bucket(uint32_t degree) {
  return static_cast<uint8_t>(std::min<uint32_t>(degree, kMaxBucket));
}

}  // namespace

NodeType abstract_node(DegreePair degrees) {
  return {clamp_bucket(degrees.indegree), clamp_bucket(degrees.outdegree)};
}

std::string canonical_key(std::span<const NodeType> feature) {
  std::string key;
  key.reserve(feature.size() * 3);
  for (const NodeType& type : feature) {
    if (!key.empty()) key.push_back('|');
    key.push_back(static_cast<char>('0' + type.in_bucket));
    key.push_back(static_cast<char>('0' + type.out_bucket));
  }
  return key;
}

NGramFeature decode_key(std::string_view key) {
  if (key.empty() || key.size() % 3 != 2) {
    fail(TAH_ERR_INVALID_ARG, "malformed feature key '" + std::string(key) +
                                  "'");
  }
  NGramFeature feature;
  feature.reserve((key.size() + 1) / 3);
  for (size_t i = 0; i < key.size(); i += 3) {
    char in = key[i];
    char out = key[i + 1];
    bool ok = in >= '0' && in <= '3' && out >= '0' && out <= '3' &&
              (i + 2 == key.size() || key[i + 2] == '|');
    if (!ok) {
      fail(TAH_ERR_INVALID_ARG, "malformed feature key '" + std::string(key) +
                                    "'");
    }
    feature.push_back({static_cast<uint8_t>(in - '0'),
                       static_cast<uint8_t>(out - '0')});
  }
  return feature;
}

bool is_valid_feature(std::span<const NodeType> feature) {
  if (feature.empty()) return false;
  if (feature.size() == 1) return true;
  for (size_t i = 0; i < feature.size(); ++i) {
    if (feature[i].in_bucket == 0 && i != 0) return false;
    if (feature[i].out_bucket == 0 && i + 1 != feature.size()) return false;
  }
  return true;
}

uint64_t feature_space_size(uint32_t n) {
  if (n == 0) return 0;
  // 16 single types; longer grams choose 12 openers (out bucket > 0),
  // 9 interior types (both buckets > 0) and 12 closers (in bucket > 0).
  uint64_t total = 16;
  uint64_t interior = 1;
  for (uint32_t k = 2; k <= n; ++k) {
    uint64_t term = 12ull * 12ull;
    if (interior > UINT64_MAX / term) return UINT64_MAX;
    term *= interior;
    if (total > UINT64_MAX - term) return UINT64_MAX;
    total += term;
    if (interior > UINT64_MAX / 9) return UINT64_MAX;
    interior *= 9;
  }
  return total;
}

GraphSignature::GraphSignature(uint32_t gram_size, std::vector<Entry> entries)
    : gram_size_(gram_size), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  uint64_t total = 0;
  for (const auto& [key, count] : entries_) {
    total += count;
  }
  if (total > UINT32_MAX) {
    fail(TAH_ERR_COUNT_OVERFLOW, "signature total exceeds 32-bit range");
  }
  total_ = static_cast<uint32_t>(total);
}

std::string GraphSignature::export_text() const {
  std::ostringstream out;
  for (const auto& [key, count] : entries_) {
    out << key << '\t' << count << '\n';
  }
  out << "TOTAL\t" << total_ << '\n';
  return out.str();
}

GraphSignature extract_features(const Cfg& g, uint32_t n) {
  if (n < 1) {
    fail(TAH_ERR_INVALID_ARG, "gram size must be at least 1");
  }

  const size_t node_count = g.node_count();
  std::vector<std::array<char, 2>> code(node_count);
  for (size_t i = 0; i < node_count; ++i) {
    NodeType type = abstract_node(g.degrees_at(i));
    code[i] = {static_cast<char>('0' + type.in_bucket),
               static_cast<char>('0' + type.out_bucket)};
  }

  std::unordered_map<std::string, uint32_t> counts;
  uint64_t total = 0;
  std::string key;
  key.reserve(static_cast<size_t>(n) * 3);

  // Depth-first walk enumeration; the shared key buffer grows and
  // shrinks with the walk so no per-walk allocation happens.
  auto visit = [&](auto&& self, size_t index, uint32_t depth) -> void {
    if (depth > 0) key.push_back('|');
    key.push_back(code[index][0]);
    key.push_back(code[index][1]);

    uint32_t& count = counts[key];
    if (count == UINT32_MAX || total == UINT32_MAX) {
      fail(TAH_ERR_COUNT_OVERFLOW,
           "feature count overflow at key '" + key + "'");
    }
    ++count;
    ++total;

    if (depth + 1 < n) {
      for (uint32_t successor : g.successors_at(index)) {
        self(self, successor, depth + 1);
      }
    }
    key.resize(key.size() - (depth > 0 ? 3 : 2));
  };

  for (size_t start = 0; start < node_count; ++start) {
    visit(visit, start, 0);
  }

  std::vector<GraphSignature::Entry> entries(counts.begin(), counts.end());
  return GraphSignature(n, std::move(entries));
}

}  // namespace tah
