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

#include "eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "error.hpp"
#include "similarity.hpp"

namespace tah {

namespace {

constexpr uint32_t kDegreeCap = 3;

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

// Runs fn(index) for every index in [0, count) across a few threads.
// Each index writes only its own outputs, so results cannot depend on
// the schedule.  The lowest-index exception wins and is rethrown.
template <typename Fn>
void parallel_for(size_t count, Fn&& fn) {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<size_t>(workers, std::max<size_t>(count, 1)));

  std::mutex error_mutex;
  std::optional<size_t> error_index;
  std::exception_ptr error;

  auto body = [&](unsigned worker) {
    for (size_t i = worker; i < count; i += workers) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error_index || i < *error_index) {
          error_index = i;
          error = std::current_exception();
        }
        return;
      }
    }
  };

  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(body, w);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

Cfg generate_seed_cfg(uint64_t rng_seed, uint32_t node_count) {
  if (node_count < 2) {
    fail(TAH_ERR_INVALID_ARG, "seed graphs need at least 2 nodes");
  }

  SplitMix64 rng(rng_seed);
  std::vector<uint32_t> nodes(node_count);
  for (uint32_t i = 0; i < node_count; ++i) nodes[i] = i;

  std::set<Cfg::Edge> edges;
  std::vector<uint32_t> indegree(node_count, 0);
  std::vector<uint32_t> outdegree(node_count, 0);
  auto add_edge = [&](uint32_t u, uint32_t v) {
    edges.emplace(u, v);
    ++outdegree[u];
    ++indegree[v];
  };
  for (uint32_t i = 0; i + 1 < node_count; ++i) add_edge(i, i + 1);

  auto legal = [&](uint32_t u, uint32_t v) {
    return u != v && !edges.contains({u, v}) && outdegree[u] < kDegreeCap &&
           indegree[v] < kDegreeCap;
  };

  const uint32_t extra = (node_count + 1) / 2;
  const uint64_t max_draws = 256ull * node_count * node_count;
  for (uint32_t e = 0; e < extra; ++e) {
    bool placed = false;
    for (uint64_t draw = 0; draw < max_draws && !placed; ++draw) {
      uint32_t u = rng.below(node_count);
      uint32_t v = rng.below(node_count);
      if (legal(u, v)) {
        add_edge(u, v);
        placed = true;
      }
    }
    if (!placed) {
      // Degree caps left no sampled slot; take the first legal pair so
      // the edge count stays deterministic whenever capacity exists.
      for (uint32_t u = 0; u < node_count && !placed; ++u) {
        for (uint32_t v = 0; v < node_count && !placed; ++v) {
          if (legal(u, v)) {
            add_edge(u, v);
            placed = true;
          }
        }
      }
    }
    if (!placed) break;  // graph saturated
  }

  return Cfg::from_parts("seed" + std::to_string(rng_seed), std::move(nodes),
                         {edges.begin(), edges.end()});
}

std::vector<Cfg> enumerate_variants(const Cfg& seed) {
  std::vector<Cfg> variants;
  size_t index = 0;
  auto variant_name = [&](const char* op) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "_%s_%04zu", op, index++);
    return seed.name() + buf;
  };
  auto push = [&](const char* op, std::vector<uint32_t> nodes,
                  std::vector<Cfg::Edge> edges) {
    variants.push_back(Cfg::from_parts(variant_name(op), std::move(nodes),
                                       std::move(edges)));
  };

  const auto& nodes = seed.nodes();
  const auto& edges = seed.edges();

  push("seed", nodes, edges);

  // Add one isolated node.
  uint32_t fresh = nodes.empty() ? 0 : nodes.back() + 1;
  {
    std::vector<uint32_t> grown = nodes;
    grown.push_back(fresh);
    push("addnode", std::move(grown), edges);
  }

  // Delete each isolated node.
  for (size_t i = 0; i < nodes.size(); ++i) {
    DegreePair d = seed.degrees_at(i);
    if (d.indegree != 0 || d.outdegree != 0) continue;
    std::vector<uint32_t> shrunk = nodes;
    shrunk.erase(shrunk.begin() + static_cast<ptrdiff_t>(i));
    push("delnode", std::move(shrunk), edges);
  }

  // Add each absent non-self-loop edge.
  for (uint32_t u : nodes) {
    for (uint32_t v : nodes) {
      if (u == v) continue;
      if (std::binary_search(edges.begin(), edges.end(), Cfg::Edge{u, v})) {
        continue;
      }
      std::vector<Cfg::Edge> grown = edges;
      grown.emplace_back(u, v);
      push("addedge", nodes, std::move(grown));
    }
  }

  // Delete each existing edge.
  for (size_t i = 0; i < edges.size(); ++i) {
    std::vector<Cfg::Edge> shrunk = edges;
    shrunk.erase(shrunk.begin() + static_cast<ptrdiff_t>(i));
    push("deledge", nodes, std::move(shrunk));
  }

  return variants;
}

std::vector<uint32_t> Dataset::group_ids() const {
  std::vector<uint32_t> ids;
  ids.reserve(items.size());
  std::unordered_map<std::string, uint32_t> dense;
  for (const auto& item : items) {
    auto [it, inserted] =
        dense.emplace(item.group, static_cast<uint32_t>(dense.size()));
    ids.push_back(it->second);
  }
  return ids;
}

Dataset generate_dataset(uint64_t rng_seed, uint32_t node_count,
                         uint32_t groups, bool dedup) {
  if (groups == 0) {
    fail(TAH_ERR_INVALID_ARG, "at least one group is required");
  }

  Dataset ds;
  for (uint32_t g = 0; g < groups; ++g) {
    Cfg raw = generate_seed_cfg(rng_seed + g, node_count);
    std::string group = "g" + std::to_string(g);
    Cfg seed = Cfg::from_parts(group, raw.nodes(), raw.edges());

    std::set<std::string> seen;
    for (Cfg& variant : enumerate_variants(seed)) {
      if (dedup) {
        std::string fingerprint =
            extract_features(variant, kDefaultGramSize).export_text();
        if (!seen.insert(std::move(fingerprint)).second) continue;
      }
      std::string filename = variant.name() + ".json";
      ds.items.push_back({std::move(variant), group, std::move(filename)});
    }
  }
  return ds;
}

void write_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    fail(TAH_ERR_IO, "cannot create " + dir.string() + ": " + ec.message());
  }

  auto write_file = [](const std::filesystem::path& path,
                       const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    if (!out) {
      fail(TAH_ERR_IO, "cannot write " + path.string());
    }
  };

  std::ostringstream labels;
  labels << "filename,group\n";
  for (const auto& item : ds.items) {
    write_file(dir / item.filename,
               item.cfg.serialize(CfgFormat::kJson) + "\n");
    labels << item.filename << ',' << item.group << '\n';
  }
  write_file(dir / "labels.csv", labels.str());
}

Dataset load_dataset(const std::filesystem::path& dir) {
  std::ifstream labels(dir / "labels.csv");
  if (!labels) {
    fail(TAH_ERR_IO, "cannot open " + (dir / "labels.csv").string());
  }

  std::string line;
  if (std::getline(labels, line) && !line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != "filename,group") {
    fail(TAH_ERR_IO,
         (dir / "labels.csv").string() + ": expected 'filename,group' header");
  }

  Dataset ds;
  size_t line_no = 1;
  while (std::getline(labels, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t comma = line.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == line.size()) {
      fail(TAH_ERR_IO, (dir / "labels.csv").string() + " line " +
                           std::to_string(line_no) + ": expected "
                           "'filename,group'");
    }
    std::string filename = line.substr(0, comma);
    std::string group = line.substr(comma + 1);

    std::ifstream in(dir / filename, std::ios::binary);
    if (!in) {
      fail(TAH_ERR_IO, "cannot open " + (dir / filename).string());
    }
    std::ostringstream body;
    body << in.rdbuf();
    CfgFormat format = filename.size() >= 5 &&
                               filename.compare(filename.size() - 5, 5,
                                                ".json") == 0
                           ? CfgFormat::kJson
                           : CfgFormat::kEdgeList;
    try {
      ds.items.push_back(
          {Cfg::parse(body.str(), format), std::move(group), filename});
    } catch (const Error& e) {
      fail(e.code(), (dir / filename).string() + ": " + e.what());
    }
  }
  return ds;
}

DistanceMatrix distance_matrix(std::span<const DatasetItem> items,
                               Comparator comparator,
                               const ProjectionParams& params,
                               uint32_t mcs_budget) {
  const size_t count = items.size();
  for (size_t i = 0; i < count; ++i) {
    if (items[i].cfg.node_count() == 0) {
      fail(TAH_ERR_EMPTY_SIGNATURE,
           "item " + std::to_string(i) + " (" + items[i].filename +
               ") is an empty graph");
    }
  }

  DistanceMatrix m(count);
  if (count < 2) return m;

  // Derive each item's representation once, up front.
  std::vector<GraphSignature> signatures;
  std::vector<FuzzyHash> hashes;
  if (comparator != Comparator::kMcs) {
    signatures.resize(count, GraphSignature(params.n, {}));
    parallel_for(count, [&](size_t i) {
      signatures[i] = extract_features(items[i].cfg, params.n);
    });
    if (comparator == Comparator::kHash) {
      hashes.reserve(count);
      std::vector<std::optional<FuzzyHash>> slots(count);
      parallel_for(count, [&](size_t i) {
        slots[i] = project(signatures[i], params);
      });
      for (auto& slot : slots) hashes.push_back(std::move(*slot));
    }
  }

  auto annotate = [&](size_t i, size_t j, const Error& e) {
    fail(e.code(), "pair (" + std::to_string(i) + "," + std::to_string(j) +
                       ") [" + items[i].filename + " vs " + items[j].filename +
                       "]: " + e.what());
  };

  parallel_for(count, [&](size_t i) {
    for (size_t j = i + 1; j < count; ++j) {
      double similarity = 0.0;
      try {
        switch (comparator) {
          case Comparator::kHash:
            similarity = hash_similarity(hashes[i], hashes[j]);
            break;
          case Comparator::kExact:
            similarity = exact_similarity(signatures[i], signatures[j]);
            break;
          case Comparator::kMcs:
            similarity = mcs_similarity(items[i].cfg, items[j].cfg,
                                        mcs_budget);
            break;
        }
      } catch (const Error& e) {
        annotate(i, j, e);
      }
      m.set(i, j, 1.0 - similarity);
    }
  });
  return m;
}

std::vector<Merge> merge_sequence(const DistanceMatrix& m, Linkage linkage) {
  const size_t n = m.size();
  std::vector<Merge> merges;
  if (n < 2) return merges;
  merges.reserve(n - 1);

  // Working copy of the matrix; slot i holds the cluster whose smallest
  // member is item i, so the lowest-(i,j) tie rule reads directly off
  // the slot numbers.
  std::vector<double> dist(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) dist[i * n + j] = m.get(i, j);
  }
  std::vector<bool> active(n, true);
  std::vector<uint32_t> size(n, 1);

  struct RowBest {
    double distance;
    uint32_t partner;
  };
  std::vector<RowBest> best(n);

  auto recompute_row = [&](size_t i) {
    RowBest rb{std::numeric_limits<double>::infinity(), UINT32_MAX};
    for (size_t j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      double d = dist[i * n + j];
      if (d < rb.distance) rb = {d, static_cast<uint32_t>(j)};
    }
    best[i] = rb;
  };
  for (size_t i = 0; i < n; ++i) recompute_row(i);

  for (size_t step = 0; step + 1 < n; ++step) {
    // Lowest slot attaining the global minimum; its partner is then the
    // lowest such column, giving the lexicographically least (i,j).
    size_t left = SIZE_MAX;
    double min_distance = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
      if (active[i] && best[i].distance < min_distance) {
        min_distance = best[i].distance;
        left = i;
      }
    }
    size_t right = best[left].partner;
    if (right < left) std::swap(left, right);

    merges.push_back({min_distance, static_cast<uint32_t>(left),
                      static_cast<uint32_t>(right)});

    // Lance-Williams update of the surviving slot.
    for (size_t k = 0; k < n; ++k) {
      if (!active[k] || k == left || k == right) continue;
      double dl = dist[k * n + left];
      double dr = dist[k * n + right];
      double merged;
      switch (linkage) {
        case Linkage::kSingle:
          merged = std::min(dl, dr);
          break;
        case Linkage::kComplete:
          merged = std::max(dl, dr);
          break;
        case Linkage::kAverage:
        default:
          merged = (dl * size[left] + dr * size[right]) /
                   (size[left] + size[right]);
          break;
      }
      dist[k * n + left] = merged;
      dist[left * n + k] = merged;
    }
    size[left] += size[right];
    active[right] = false;

    recompute_row(left);
    for (size_t k = 0; k < n; ++k) {
      if (!active[k] || k == left) continue;
      if (best[k].partner == left || best[k].partner == right) {
        recompute_row(k);
      } else {
        double d = dist[k * n + left];
        if (d < best[k].distance ||
            (d == best[k].distance && left < best[k].partner)) {
          best[k] = {d, static_cast<uint32_t>(left)};
        }
      }
    }
  }
  return merges;
}

namespace {

// Minimal union-find over slots; roots stay at the smallest member.
struct Clusters {
  explicit Clusters(size_t n) : parent(n) {
    for (size_t i = 0; i < n; ++i) parent[i] = static_cast<uint32_t>(i);
  }

  uint32_t find(uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void merge(uint32_t left, uint32_t right) { parent[find(right)] = find(left); }

  // Labels numbered in ascending order of each cluster's smallest member.
  std::vector<uint32_t> labels() {
    const size_t n = parent.size();
    std::vector<uint32_t> roots(n);
    for (size_t i = 0; i < n; ++i) roots[i] = find(static_cast<uint32_t>(i));
    std::vector<uint32_t> order;
    order.reserve(n);
    std::vector<bool> seen(n, false);
    for (uint32_t root : roots) {
      if (!seen[root]) {
        seen[root] = true;
        order.push_back(root);
      }
    }
    std::sort(order.begin(), order.end());
    std::vector<uint32_t> rank(n, 0);
    for (size_t r = 0; r < order.size(); ++r) rank[order[r]] =
        static_cast<uint32_t>(r);
    std::vector<uint32_t> out(n);
    for (size_t i = 0; i < n; ++i) out[i] = rank[roots[i]];
    return out;
  }

  std::vector<uint32_t> parent;
};

}  // namespace

std::vector<uint32_t> hac_cluster(const DistanceMatrix& m, Linkage linkage,
                                  double threshold) {
  Clusters clusters(m.size());
  for (const Merge& merge : merge_sequence(m, linkage)) {
    if (!(merge.distance < threshold)) break;
    clusters.merge(merge.left, merge.right);
  }
  return clusters.labels();
}

PrecisionRecall precision_recall(std::span<const uint32_t> labels,
                                 std::span<const uint32_t> truth_groups) {
  const size_t count = labels.size();
  if (count == 0 || count != truth_groups.size()) {
    fail(TAH_ERR_INVALID_ARG,
         "partition and ground truth cover different items");
  }

  uint32_t clusters = *std::max_element(labels.begin(), labels.end()) + 1;
  uint32_t groups =
      *std::max_element(truth_groups.begin(), truth_groups.end()) + 1;

  std::vector<uint32_t> contingency(static_cast<size_t>(clusters) * groups, 0);
  for (size_t i = 0; i < count; ++i) {
    ++contingency[static_cast<size_t>(labels[i]) * groups + truth_groups[i]];
  }

  uint64_t cluster_hits = 0;
  for (uint32_t c = 0; c < clusters; ++c) {
    uint32_t top = 0;
    for (uint32_t g = 0; g < groups; ++g) {
      top = std::max(top, contingency[static_cast<size_t>(c) * groups + g]);
    }
    cluster_hits += top;
  }
  uint64_t group_hits = 0;
  for (uint32_t g = 0; g < groups; ++g) {
    uint32_t top = 0;
    for (uint32_t c = 0; c < clusters; ++c) {
      top = std::max(top, contingency[static_cast<size_t>(c) * groups + g]);
    }
    group_hits += top;
  }

  return {static_cast<double>(cluster_hits) / count,
          static_cast<double>(group_hits) / count};
}

double ClusteringReport::quantile(bool same_group, double q) const {
  const std::vector<double>& values = same_group ? same_sorted : diff_sorted;
  if (values.empty()) {
    fail(TAH_ERR_INVALID_ARG, "no pairs in the requested category");
  }
  q = std::clamp(q, 0.0, 1.0);
  size_t rank = static_cast<size_t>(
      std::ceil(q * static_cast<double>(values.size())));
  if (rank > 0) --rank;
  return values[std::min(rank, values.size() - 1)];
}

void ClusteringReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << "threshold,clusters,precision,recall,fscore\n";
  for (const SweepRow& row : rows) {
    out << format_double(row.threshold) << ',' << row.clusters << ','
        << format_double(row.precision) << ',' << format_double(row.recall)
        << ',' << format_double(row.fscore) << '\n';
  }
  if (!out) {
    fail(TAH_ERR_IO, "cannot write " + path.string());
  }
}

void ClusteringReport::write_cdf_csv(
    const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << "category,distance,cum_fraction\n";
  constexpr size_t kMaxPoints = 1024;
  auto emit = [&](const char* category, const std::vector<double>& values) {
    if (values.empty()) return;
    size_t points = std::min(values.size(), kMaxPoints);
    for (size_t p = 0; p < points; ++p) {
      size_t index = points == 1
                         ? values.size() - 1
                         : p * (values.size() - 1) / (points - 1);
      double fraction = static_cast<double>(index + 1) /
                        static_cast<double>(values.size());
      out << category << ',' << format_double(values[index]) << ','
          << format_double(fraction) << '\n';
    }
  };
  emit("same", same_sorted);
  emit("diff", diff_sorted);
  if (!out) {
    fail(TAH_ERR_IO, "cannot write " + path.string());
  }
}

ClusteringReport threshold_sweep(const DistanceMatrix& m,
                                 std::span<const uint32_t> truth_groups,
                                 Linkage linkage, double step) {
  if (!(step > 0.0) || step > 1.0) {
    fail(TAH_ERR_INVALID_ARG, "sweep step must be in (0, 1]");
  }
  if (m.size() != truth_groups.size() || m.size() == 0) {
    fail(TAH_ERR_INVALID_ARG,
         "distance matrix and ground truth cover different items");
  }

  ClusteringReport report;
  report.linkage = linkage;

  const size_t n = m.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      bool same = truth_groups[i] == truth_groups[j];
      (same ? report.same_sorted : report.diff_sorted).push_back(m.get(i, j));
    }
  }
  std::sort(report.same_sorted.begin(), report.same_sorted.end());
  std::sort(report.diff_sorted.begin(), report.diff_sorted.end());

  std::vector<double> thresholds;
  for (uint32_t i = 0;; ++i) {
    double t = i * step;
    if (t >= 1.0 - 1e-12) {
      thresholds.push_back(1.0);
      break;
    }
    thresholds.push_back(t);
  }

  std::vector<Merge> merges = merge_sequence(m, linkage);
  Clusters clusters(n);
  size_t next_merge = 0;
  uint32_t cluster_count = static_cast<uint32_t>(n);

  report.rows.reserve(thresholds.size());
  for (double t : thresholds) {
    while (next_merge < merges.size() && merges[next_merge].distance < t) {
      clusters.merge(merges[next_merge].left, merges[next_merge].right);
      ++next_merge;
      --cluster_count;
    }
    std::vector<uint32_t> labels = clusters.labels();
    PrecisionRecall pr = precision_recall(labels, truth_groups);
    double fscore = pr.precision + pr.recall > 0.0
                        ? 2.0 * pr.precision * pr.recall /
                              (pr.precision + pr.recall)
                        : 0.0;
    report.rows.push_back({t, cluster_count, pr.precision, pr.recall, fscore});
  }

  report.optimal_index = 0;
  for (size_t i = 1; i < report.rows.size(); ++i) {
    const SweepRow& candidate = report.rows[i];
    const SweepRow& incumbent = report.rows[report.optimal_index];
    double candidate_gap = std::abs(candidate.precision - candidate.recall);
    double incumbent_gap = std::abs(incumbent.precision - incumbent.recall);
    if (candidate_gap < incumbent_gap ||
        (candidate_gap == incumbent_gap &&
         candidate.fscore > incumbent.fscore)) {
      report.optimal_index = i;
    }
  }
  return report;
}

}  // namespace tah
