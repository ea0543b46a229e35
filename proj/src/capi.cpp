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

#include "tah/tah.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "cfg.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "features.hpp"
#include "fuzzy.hpp"
#include "mcs.hpp"
#include "similarity.hpp"

// Handle definitions.  Each wraps exactly one core object; the dataset
// additionally keeps per-item cfg handles alive for its accessors.
struct tah_cfg {
  tah::Cfg impl;
};
struct tah_signature {
  tah::GraphSignature impl;
};
struct tah_hash {
  tah::FuzzyHash impl;
};
struct tah_matrix {
  tah::DistanceMatrix impl;
};
struct tah_report {
  tah::ClusteringReport impl;
};
struct tah_dataset {
  tah::Dataset impl;
  std::vector<std::unique_ptr<tah_cfg>> views;
  std::vector<uint32_t> groups;

  void rebuild_views() {
    views.clear();
    views.reserve(impl.items.size());
    for (const auto& item : impl.items) {
      views.push_back(std::make_unique<tah_cfg>(tah_cfg{item.cfg}));
    }
    groups = impl.group_ids();
  }
};

namespace {

thread_local std::string t_last_error;

template <typename Fn>
tah_status guarded(Fn&& fn) {
  try {
    fn();
    return TAH_OK;
  } catch (const tah::Error& e) {
    t_last_error = e.what();
    return e.code();
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return TAH_ERR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return TAH_ERR_INTERNAL;
  }
}

tah_status invalid(const char* message) {
  t_last_error = message;
  return TAH_ERR_INVALID_ARG;
}

char* copy_out(const std::string& text, size_t* out_len) {
  char* buffer = new char[text.size() + 1];
  std::memcpy(buffer, text.data(), text.size());
  buffer[text.size()] = '\0';
  if (out_len) *out_len = text.size();
  return buffer;
}

tah::CfgFormat to_format(tah_format fmt) {
  return fmt == TAH_FORMAT_JSON ? tah::CfgFormat::kJson
                                : tah::CfgFormat::kEdgeList;
}

tah::ProjectionParams to_params(tah_params params) {
  return {params.bits, params.seed, params.n};
}

tah::Linkage to_linkage(tah_linkage linkage) {
  switch (linkage) {
    case TAH_LINKAGE_SINGLE:
      return tah::Linkage::kSingle;
    case TAH_LINKAGE_COMPLETE:
      return tah::Linkage::kComplete;
    case TAH_LINKAGE_AVERAGE:
    default:
      return tah::Linkage::kAverage;
  }
}

}  // namespace

extern "C" {

const char* tah_last_error(void) { return t_last_error.c_str(); }

/* ----------------------------- cfg ------------------------------- */

tah_status tah_cfg_parse(const char* data, size_t len, tah_format fmt,
                         tah_cfg** out) {
  if (!data || !out) return invalid("tah_cfg_parse: null argument");
  return guarded([&] {
    *out = new tah_cfg{tah::Cfg::parse({data, len}, to_format(fmt))};
  });
}

tah_status tah_cfg_create(const char* name, const uint32_t* nodes,
                          size_t node_count, const uint32_t* edges,
                          size_t edge_count, tah_cfg** out) {
  if (!out || (!nodes && node_count) || (!edges && edge_count)) {
    return invalid("tah_cfg_create: null argument");
  }
  return guarded([&] {
    std::vector<uint32_t> node_vec(nodes, nodes + node_count);
    std::vector<tah::Cfg::Edge> edge_vec;
    edge_vec.reserve(edge_count);
    for (size_t i = 0; i < edge_count; ++i) {
      edge_vec.emplace_back(edges[2 * i], edges[2 * i + 1]);
    }
    *out = new tah_cfg{tah::Cfg::from_parts(name ? name : "",
                                            std::move(node_vec),
                                            std::move(edge_vec))};
  });
}

tah_status tah_cfg_serialize(const tah_cfg* g, tah_format fmt, char** out,
                             size_t* out_len) {
  if (!g || !out) return invalid("tah_cfg_serialize: null argument");
  return guarded([&] {
    *out = copy_out(g->impl.serialize(to_format(fmt)), out_len);
  });
}

void tah_cfg_free(tah_cfg* g) { delete g; }
void tah_string_free(char* s) { delete[] s; }

const char* tah_cfg_name(const tah_cfg* g) {
  return g ? g->impl.name().c_str() : "";
}

size_t tah_cfg_node_count(const tah_cfg* g) {
  return g ? g->impl.node_count() : 0;
}

size_t tah_cfg_edge_count(const tah_cfg* g) {
  return g ? g->impl.edge_count() : 0;
}

tah_status tah_cfg_degrees(const tah_cfg* g, uint32_t node, uint32_t* indegree,
                           uint32_t* outdegree) {
  if (!g || !indegree || !outdegree) {
    return invalid("tah_cfg_degrees: null argument");
  }
  return guarded([&] {
    tah::DegreePair d = g->impl.degrees(node);
    *indegree = d.indegree;
    *outdegree = d.outdegree;
  });
}

/* -------------------------- signatures --------------------------- */

tah_status tah_signature_extract(const tah_cfg* g, uint32_t n,
                                 tah_signature** out) {
  if (!g || !out) return invalid("tah_signature_extract: null argument");
  return guarded([&] {
    *out = new tah_signature{tah::extract_features(g->impl, n)};
  });
}

tah_status tah_signature_enumerate(const tah_cfg* g, uint32_t n,
                                   tah_signature** out) {
  if (!g || !out) return invalid("tah_signature_enumerate: null argument");
  return guarded([&] {
    *out = new tah_signature{tah::enumerate_walks_oracle(g->impl, n)};
  });
}

void tah_signature_free(tah_signature* s) { delete s; }

uint32_t tah_signature_gram_size(const tah_signature* s) {
  return s ? s->impl.gram_size() : 0;
}

uint32_t tah_signature_total(const tah_signature* s) {
  return s ? s->impl.total() : 0;
}

size_t tah_signature_distinct_features(const tah_signature* s) {
  return s ? s->impl.entries().size() : 0;
}

tah_status tah_signature_export(const tah_signature* s, char** out,
                                size_t* out_len) {
  if (!s || !out) return invalid("tah_signature_export: null argument");
  return guarded([&] { *out = copy_out(s->impl.export_text(), out_len); });
}

uint64_t tah_feature_space_size(uint32_t n) {
  return tah::feature_space_size(n);
}

/* -------------------------- similarity --------------------------- */

tah_status tah_cosine(const tah_signature* a, const tah_signature* b,
                      double* out) {
  if (!a || !b || !out) return invalid("tah_cosine: null argument");
  return guarded([&] { *out = tah::cosine(a->impl, b->impl); });
}

tah_status tah_rectification(const tah_signature* a, const tah_signature* b,
                             double* out) {
  if (!a || !b || !out) return invalid("tah_rectification: null argument");
  return guarded([&] { *out = tah::rectification(a->impl, b->impl); });
}

tah_status tah_exact_similarity(const tah_signature* a, const tah_signature* b,
                                double* out) {
  if (!a || !b || !out) return invalid("tah_exact_similarity: null argument");
  return guarded([&] { *out = tah::exact_similarity(a->impl, b->impl); });
}

tah_status tah_exact_distance(const tah_signature* a, const tah_signature* b,
                              double* out) {
  if (!a || !b || !out) return invalid("tah_exact_distance: null argument");
  return guarded([&] { *out = tah::exact_distance(a->impl, b->impl); });
}

/* -------------------------- fuzzy hash --------------------------- */

double tah_gaussian_component(uint64_t seed, const char* feature_key,
                              uint32_t bit_index) {
  return tah::gaussian_component(seed, feature_key ? feature_key : "",
                                 bit_index);
}

tah_status tah_project(const tah_signature* s, tah_params params,
                       tah_hash** out) {
  if (!s || !out) return invalid("tah_project: null argument");
  return guarded([&] {
    *out = new tah_hash{tah::project(s->impl, to_params(params))};
  });
}

void tah_hash_free(tah_hash* h) { delete h; }

uint32_t tah_hash_total(const tah_hash* h) { return h ? h->impl.total() : 0; }

uint32_t tah_hash_bit_count(const tah_hash* h) {
  return h ? h->impl.params().bits : 0;
}

tah_status tah_hash_bytes(const tah_hash* h, uint8_t* buf, size_t cap) {
  if (!h || !buf) return invalid("tah_hash_bytes: null argument");
  if (cap < h->impl.bytes().size()) {
    return invalid("tah_hash_bytes: buffer too small");
  }
  std::memcpy(buf, h->impl.bytes().data(), h->impl.bytes().size());
  return TAH_OK;
}

tah_status tah_hamming_similarity(const tah_hash* a, const tah_hash* b,
                                  double* out) {
  if (!a || !b || !out) return invalid("tah_hamming_similarity: null argument");
  return guarded([&] { *out = tah::hamming_similarity(a->impl, b->impl); });
}

tah_status tah_estimate_cosine(const tah_hash* a, const tah_hash* b,
                               double* out) {
  if (!a || !b || !out) return invalid("tah_estimate_cosine: null argument");
  return guarded([&] { *out = tah::estimate_cosine(a->impl, b->impl); });
}

tah_status tah_hash_similarity(const tah_hash* a, const tah_hash* b,
                               double* out) {
  if (!a || !b || !out) return invalid("tah_hash_similarity: null argument");
  return guarded([&] { *out = tah::hash_similarity(a->impl, b->impl); });
}

tah_status tah_hash_encode(const tah_hash* h, char** out, size_t* out_len) {
  if (!h || !out) return invalid("tah_hash_encode: null argument");
  return guarded([&] { *out = copy_out(tah::encode_hash(h->impl), out_len); });
}

tah_status tah_hash_decode(const char* text, size_t len, uint64_t seed,
                           uint32_t n, tah_hash** out) {
  if (!text || !out) return invalid("tah_hash_decode: null argument");
  return guarded([&] {
    *out = new tah_hash{tah::decode_hash({text, len}, seed, n)};
  });
}

/* ------------------------------ mcs ------------------------------ */

tah_status tah_mcs_size(const tah_cfg* a, const tah_cfg* b,
                        uint32_t node_budget, uint32_t* out) {
  if (!a || !b || !out) return invalid("tah_mcs_size: null argument");
  return guarded([&] {
    *out = tah::mcs_size(a->impl, b->impl, node_budget).size;
  });
}

tah_status tah_mcs_similarity(const tah_cfg* a, const tah_cfg* b,
                              uint32_t node_budget, double* out) {
  if (!a || !b || !out) return invalid("tah_mcs_similarity: null argument");
  return guarded([&] {
    *out = tah::mcs_similarity(a->impl, b->impl, node_budget);
  });
}

/* ---------------------------- datasets --------------------------- */

tah_status tah_generate_seed_cfg(uint64_t rng_seed, uint32_t node_count,
                                 tah_cfg** out) {
  if (!out) return invalid("tah_generate_seed_cfg: null argument");
  return guarded([&] {
    *out = new tah_cfg{tah::generate_seed_cfg(rng_seed, node_count)};
  });
}

tah_status tah_dataset_variants(const tah_cfg* seed, const char* group,
                                tah_dataset** out) {
  if (!seed || !group || !out) {
    return invalid("tah_dataset_variants: null argument");
  }
  return guarded([&] {
    auto ds = std::make_unique<tah_dataset>();
    for (tah::Cfg& variant : tah::enumerate_variants(seed->impl)) {
      std::string filename = variant.name() + ".json";
      ds->impl.items.push_back(
          {std::move(variant), group, std::move(filename)});
    }
    ds->rebuild_views();
    *out = ds.release();
  });
}

tah_status tah_dataset_generate(uint64_t rng_seed, uint32_t node_count,
                                uint32_t groups, int dedup,
                                tah_dataset** out) {
  if (!out) return invalid("tah_dataset_generate: null argument");
  return guarded([&] {
    auto ds = std::make_unique<tah_dataset>();
    ds->impl = tah::generate_dataset(rng_seed, node_count, groups,
                                     dedup != 0);
    ds->rebuild_views();
    *out = ds.release();
  });
}

tah_status tah_dataset_write(const tah_dataset* ds, const char* dir) {
  if (!ds || !dir) return invalid("tah_dataset_write: null argument");
  return guarded([&] { tah::write_dataset(ds->impl, dir); });
}

tah_status tah_dataset_load(const char* dir, tah_dataset** out) {
  if (!dir || !out) return invalid("tah_dataset_load: null argument");
  return guarded([&] {
    auto ds = std::make_unique<tah_dataset>();
    ds->impl = tah::load_dataset(dir);
    ds->rebuild_views();
    *out = ds.release();
  });
}

void tah_dataset_free(tah_dataset* ds) { delete ds; }

size_t tah_dataset_size(const tah_dataset* ds) {
  return ds ? ds->impl.items.size() : 0;
}

const tah_cfg* tah_dataset_cfg(const tah_dataset* ds, size_t i) {
  if (!ds || i >= ds->views.size()) return nullptr;
  return ds->views[i].get();
}

const char* tah_dataset_group(const tah_dataset* ds, size_t i) {
  if (!ds || i >= ds->impl.items.size()) return nullptr;
  return ds->impl.items[i].group.c_str();
}

const char* tah_dataset_filename(const tah_dataset* ds, size_t i) {
  if (!ds || i >= ds->impl.items.size()) return nullptr;
  return ds->impl.items[i].filename.c_str();
}

/* ------------------------ distance matrix ------------------------ */

tah_status tah_distance_matrix(const tah_dataset* ds, tah_comparator cmp,
                               tah_params params, uint32_t mcs_budget,
                               tah_matrix** out) {
  if (!ds || !out) return invalid("tah_distance_matrix: null argument");
  return guarded([&] {
    tah::Comparator comparator =
        cmp == TAH_CMP_HASH    ? tah::Comparator::kHash
        : cmp == TAH_CMP_EXACT ? tah::Comparator::kExact
                               : tah::Comparator::kMcs;
    *out = new tah_matrix{tah::distance_matrix(
        ds->impl.items, comparator, to_params(params), mcs_budget)};
  });
}

void tah_matrix_free(tah_matrix* m) { delete m; }

size_t tah_matrix_size(const tah_matrix* m) { return m ? m->impl.size() : 0; }

tah_status tah_matrix_get(const tah_matrix* m, size_t i, size_t j,
                          double* out) {
  if (!m || !out) return invalid("tah_matrix_get: null argument");
  if (i >= m->impl.size() || j >= m->impl.size()) {
    return invalid("tah_matrix_get: index out of range");
  }
  *out = m->impl.get(i, j);
  return TAH_OK;
}

/* ---------------------------- clustering ------------------------- */

tah_status tah_hac_cluster(const tah_matrix* m, tah_linkage linkage,
                           double threshold, uint32_t* labels) {
  if (!m || !labels) return invalid("tah_hac_cluster: null argument");
  return guarded([&] {
    std::vector<uint32_t> result =
        tah::hac_cluster(m->impl, to_linkage(linkage), threshold);
    std::memcpy(labels, result.data(), result.size() * sizeof(uint32_t));
  });
}

tah_status tah_precision_recall(const uint32_t* labels, size_t count,
                                const tah_dataset* truth, double* precision,
                                double* recall) {
  if (!labels || !truth || !precision || !recall) {
    return invalid("tah_precision_recall: null argument");
  }
  if (count != truth->impl.items.size()) {
    return invalid("tah_precision_recall: label count does not match dataset");
  }
  return guarded([&] {
    tah::PrecisionRecall pr =
        tah::precision_recall({labels, count}, truth->groups);
    *precision = pr.precision;
    *recall = pr.recall;
  });
}

tah_status tah_threshold_sweep(const tah_matrix* m, const tah_dataset* truth,
                               tah_linkage linkage, double step,
                               tah_report** out) {
  if (!m || !truth || !out) {
    return invalid("tah_threshold_sweep: null argument");
  }
  return guarded([&] {
    *out = new tah_report{tah::threshold_sweep(
        m->impl, truth->groups, to_linkage(linkage), step)};
  });
}

void tah_report_free(tah_report* r) { delete r; }

size_t tah_report_rows(const tah_report* r) {
  return r ? r->impl.rows.size() : 0;
}

tah_status tah_report_row(const tah_report* r, size_t i, double* threshold,
                          uint32_t* clusters, double* precision,
                          double* recall, double* fscore) {
  if (!r) return invalid("tah_report_row: null argument");
  if (i >= r->impl.rows.size()) {
    return invalid("tah_report_row: index out of range");
  }
  const tah::SweepRow& row = r->impl.rows[i];
  if (threshold) *threshold = row.threshold;
  if (clusters) *clusters = row.clusters;
  if (precision) *precision = row.precision;
  if (recall) *recall = row.recall;
  if (fscore) *fscore = row.fscore;
  return TAH_OK;
}

size_t tah_report_optimal(const tah_report* r) {
  return r ? r->impl.optimal_index : 0;
}

tah_status tah_report_range(const tah_report* r, tah_pair_category cat,
                            double* min, double* max) {
  if (!r || !min || !max) return invalid("tah_report_range: null argument");
  const std::vector<double>& values =
      cat == TAH_PAIRS_SAME ? r->impl.same_sorted : r->impl.diff_sorted;
  if (values.empty()) {
    return invalid("tah_report_range: no pairs in the requested category");
  }
  *min = values.front();
  *max = values.back();
  return TAH_OK;
}

tah_status tah_report_quantile(const tah_report* r, tah_pair_category cat,
                               double q, double* out) {
  if (!r || !out) return invalid("tah_report_quantile: null argument");
  return guarded([&] {
    *out = r->impl.quantile(cat == TAH_PAIRS_SAME, q);
  });
}

tah_status tah_report_write_csv(const tah_report* r, const char* path) {
  if (!r || !path) return invalid("tah_report_write_csv: null argument");
  return guarded([&] { r->impl.write_csv(path); });
}

tah_status tah_report_write_cdf_csv(const tah_report* r, const char* path) {
  if (!r || !path) return invalid("tah_report_write_cdf_csv: null argument");
  return guarded([&] { r->impl.write_cdf_csv(path); });
}

} /* extern "C" */
