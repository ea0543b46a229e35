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

#include "mcs.hpp"

#include <algorithm>
#include <map>

#include "error.hpp"

namespace tah {

namespace {

constexpr size_t kOracleNodeLimit = 12;

// Dense directed adjacency over node indices, small enough for the
// budget-guarded search.
struct DenseGraph {
  explicit DenseGraph(const Cfg& g) : size(g.node_count()) {
    matrix.assign(size * size, false);
    for (size_t u = 0; u < size; ++u) {
      for (uint32_t v : g.successors_at(u)) {
        matrix[u * size + v] = true;
      }
    }
  }

  bool edge(size_t u, size_t v) const { return matrix[u * size + v]; }

  size_t size;
  std::vector<bool> matrix;
};

class McsSearch {
 public:
  McsSearch(const DenseGraph& a, const DenseGraph& b) : a_(a), b_(b) {
    used_b_.assign(b.size, false);
    limit_ = static_cast<uint32_t>(std::min(a.size, b.size));
  }

  McsResult run() {
    extend(0);
    return result_;
  }

 private:
  bool compatible(size_t v, size_t w) const {
    if (a_.edge(v, v) != b_.edge(w, w)) return false;
    for (const auto& [u, x] : mapping_) {
      if (a_.edge(u, v) != b_.edge(x, w)) return false;
      if (a_.edge(v, u) != b_.edge(w, x)) return false;
    }
    return true;
  }

  void extend(size_t pos) {
    if (result_.size == limit_) return;
    uint32_t mapped = static_cast<uint32_t>(mapping_.size());
    if (pos == a_.size) {
      if (mapped > result_.size) {
        result_.size = mapped;
        result_.mapping.assign(mapping_.begin(), mapping_.end());
      }
      return;
    }
    // Even mapping every remaining node cannot beat the incumbent.
    uint32_t remaining = static_cast<uint32_t>(
        std::min(a_.size - pos, b_.size - used_count_));
    if (mapped + remaining <= result_.size) return;

    for (size_t w = 0; w < b_.size; ++w) {
      if (used_b_[w] || !compatible(pos, w)) continue;
      mapping_.emplace_back(pos, w);
      used_b_[w] = true;
      ++used_count_;
      extend(pos + 1);
      --used_count_;
      used_b_[w] = false;
      mapping_.pop_back();
      if (result_.size == limit_) return;
    }
    extend(pos + 1);  // leave this node unmapped
  }

  const DenseGraph& a_;
  const DenseGraph& b_;
  std::vector<std::pair<size_t, size_t>> mapping_;
  std::vector<bool> used_b_;
  size_t used_count_ = 0;
  uint32_t limit_ = 0;
  McsResult result_;
};

}  // namespace

McsResult mcs_size(const Cfg& a, const Cfg& b, uint32_t node_budget) {
  if (a.node_count() > node_budget || b.node_count() > node_budget) {
    fail(TAH_ERR_BUDGET_EXCEEDED,
         "graphs exceed the " + std::to_string(node_budget) +
             "-node search budget (" + std::to_string(a.node_count()) +
             " and " + std::to_string(b.node_count()) + " nodes)");
  }

  DenseGraph da(a);
  DenseGraph db(b);
  McsSearch search(da, db);
  McsResult indices = search.run();

  McsResult result;
  result.size = indices.size;
  result.mapping.reserve(indices.mapping.size());
  for (const auto& [ai, bi] : indices.mapping) {
    result.mapping.emplace_back(a.nodes()[ai], b.nodes()[bi]);
  }
  return result;
}

double mcs_similarity(const Cfg& a, const Cfg& b, uint32_t node_budget) {
  if (a.node_count() == 0 || b.node_count() == 0) {
    fail(TAH_ERR_EMPTY_SIGNATURE, "mcs similarity undefined on empty graphs");
  }
  McsResult result = mcs_size(a, b, node_budget);
  return static_cast<double>(result.size) /
         static_cast<double>(std::max(a.node_count(), b.node_count()));
}

GraphSignature enumerate_walks_oracle(const Cfg& g, uint32_t n) {
  if (n < 1) {
    fail(TAH_ERR_INVALID_ARG, "gram size must be at least 1");
  }
  if (g.node_count() > kOracleNodeLimit) {
    fail(TAH_ERR_BUDGET_EXCEEDED,
         "walk enumeration oracle is limited to " +
             std::to_string(kOracleNodeLimit) + " nodes");
  }

  std::map<std::string, uint32_t> counts;
  std::vector<size_t> walk;

  auto record = [&] {
    NGramFeature feature;
    feature.reserve(walk.size());
    for (size_t index : walk) {
      feature.push_back(abstract_node(g.degrees_at(index)));
    }
    uint32_t& count = counts[canonical_key(feature)];
    if (count == UINT32_MAX) {
      fail(TAH_ERR_COUNT_OVERFLOW, "oracle feature count overflow");
    }
    ++count;
  };

  auto walk_from = [&](auto&& self, size_t index) -> void {
    walk.push_back(index);
    record();
    if (walk.size() < n) {
      for (uint32_t successor : g.successors_at(index)) {
        self(self, successor);
      }
    }
    walk.pop_back();
  };

  for (size_t start = 0; start < g.node_count(); ++start) {
    walk_from(walk_from, start);
  }

  std::vector<GraphSignature::Entry> entries(counts.begin(), counts.end());
  return GraphSignature(n, std::move(entries));
}

}  // namespace tah
