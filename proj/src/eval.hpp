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

#ifndef TAH_EVAL_HPP
#define TAH_EVAL_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cfg.hpp"
#include "fuzzy.hpp"
#include "mcs.hpp"

namespace tah {

// Small deterministic generator so datasets reproduce bit-for-bit across
// standard library implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform value in [0, bound); bound must be positive.
  uint32_t below(uint32_t bound) {
    return static_cast<uint32_t>(next() % bound);
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  uint64_t state_;
};

// Connected CFG-shaped graph: spine 0 -> 1 -> ... -> (n-1) plus
// ceil(n/2) extra random edges, each kept only if no degree leaves the
// [0,3] range the type abstraction models.
Cfg generate_seed_cfg(uint64_t rng_seed, uint32_t node_count);

// Every single-edit variant of `seed`: the seed itself first, then one
// added isolated node, each isolated-node deletion, each absent
// non-self-loop edge addition, each edge deletion.
std::vector<Cfg> enumerate_variants(const Cfg& seed);

struct DatasetItem {
  Cfg cfg;
  std::string group;
  std::string filename;
};

struct Dataset {
  std::vector<DatasetItem> items;

  // Group label per item as dense integers (in first-appearance order).
  std::vector<uint32_t> group_ids() const;
};

// `groups` seeds derived from rng_seed, rng_seed+1, ... expanded into
// variants.  With dedup set, a variant whose default-parameter signature
// matches an earlier variant of the same group is dropped.
Dataset generate_dataset(uint64_t rng_seed, uint32_t node_count,
                         uint32_t groups, bool dedup);

// One JSON file per item plus labels.csv ("filename,group" header).
void write_dataset(const Dataset& ds, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

enum class Comparator { kHash, kExact, kMcs };

// Symmetric matrix of distances in [0,1] with a zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(size_t size) : size_(size), cells_(size * size, 0) {}

  size_t size() const { return size_; }
  double get(size_t i, size_t j) const { return cells_[i * size_ + j]; }
  void set(size_t i, size_t j, double value) {
    cells_[i * size_ + j] = value;
    cells_[j * size_ + i] = value;
  }

 private:
  size_t size_;
  std::vector<double> cells_;
};

// d(i,j) = 1 - similarity under the chosen comparator.  Signatures and
// hashes are derived once per item; the pair loop runs on several
// threads with scheduling-independent results.
DistanceMatrix distance_matrix(std::span<const DatasetItem> items,
                               Comparator comparator,
                               const ProjectionParams& params,
                               uint32_t mcs_budget = kDefaultMcsBudget);

enum class Linkage { kSingle, kAverage, kComplete };

struct Merge {
  double distance;
  uint32_t left;   // cluster slots joined, left < right
  uint32_t right;
};

// Full agglomeration order: always joins the currently closest pair,
// breaking ties toward the lowest (left, right) slots.  Cutting the
// sequence at the first merge with distance >= t reproduces the
// threshold-t clustering for any linkage.
std::vector<Merge> merge_sequence(const DistanceMatrix& m, Linkage linkage);

// Cluster labels (0.., numbered by each cluster's smallest member) after
// merging while the minimum linkage distance stays below `threshold`.
std::vector<uint32_t> hac_cluster(const DistanceMatrix& m, Linkage linkage,
                                  double threshold);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

// Cluster-quality scores: precision averages each cluster's best
// single-group overlap; recall averages each group's best single-cluster
// overlap.
PrecisionRecall precision_recall(std::span<const uint32_t> labels,
                                 std::span<const uint32_t> truth_groups);

struct SweepRow {
  double threshold = 0.0;
  uint32_t clusters = 0;
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
};

struct ClusteringReport {
  Linkage linkage = Linkage::kAverage;
  std::vector<SweepRow> rows;
  size_t optimal_index = 0;  // |precision-recall| minimal, F breaks ties

  // Pairwise distances split by ground truth, ascending.
  std::vector<double> same_sorted;
  std::vector<double> diff_sorted;

  const SweepRow& optimal() const { return rows[optimal_index]; }
  double quantile(bool same_group, double q) const;

  // "threshold,clusters,precision,recall,fscore" rows.
  void write_csv(const std::filesystem::path& path) const;
  // "category,distance,cum_fraction" rows, category "same"/"diff".
  void write_cdf_csv(const std::filesystem::path& path) const;
};

// Evaluates thresholds 0, step, 2*step, ..., 1 against the ground truth.
ClusteringReport threshold_sweep(const DistanceMatrix& m,
                                 std::span<const uint32_t> truth_groups,
                                 Linkage linkage, double step);

}  // namespace tah

#endif  // TAH_EVAL_HPP
