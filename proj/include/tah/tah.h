/* Copyright 2026 The TAH Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* libtah -- topology-aware hashing for control flow graph similarity.
 *
 * The library turns a directed control flow graph into a sparse "graph
 * signature" of blended n-gram degree-type features, compares signatures
 * either exactly (cosine x size rectification) or through a compact
 * hyperplane-LSH fuzzy hash, and ships the clustering-based evaluation
 * harness used to assess comparison quality.
 *
 * All heap-allocated objects are returned through opaque handles and must
 * be released with the matching *_free function.  Functions that can fail
 * return a tah_status; a human-readable description of the most recent
 * failure on the calling thread is available via tah_last_error().
 */

#ifndef TAH_TAH_H
#define TAH_TAH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TAH_API __declspec(dllexport)
#else
#define TAH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* ------------------------------------------------------------------ */
/* Status codes and error reporting                                    */
/* ------------------------------------------------------------------ */

typedef enum tah_status {
  TAH_OK = 0,
  TAH_ERR_INVALID_ARG = 1,     /* null pointer, bad parameter value */
  TAH_ERR_SYNTAX = 2,          /* malformed input text */
  TAH_ERR_SEMANTIC = 3,        /* well-formed text, invalid graph */
  TAH_ERR_UNKNOWN_NODE = 4,    /* node id not present in the graph */
  TAH_ERR_EMPTY_SIGNATURE = 5, /* operation undefined on empty graphs */
  TAH_ERR_PARAM_MISMATCH = 6,  /* incompatible signature/hash parameters */
  TAH_ERR_COUNT_OVERFLOW = 7,  /* a feature count no longer fits in 32 bits */
  TAH_ERR_BUDGET_EXCEEDED = 8, /* input too large for an exponential search */
  TAH_ERR_BAD_ENCODING = 9,    /* malformed or wrong-version hash text */
  TAH_ERR_IO = 10,             /* filesystem failure */
  TAH_ERR_INTERNAL = 11        /* allocation failure or unexpected state */
} tah_status;

/* Message describing the most recent error raised on this thread.
 * Never NULL; empty string when no error has occurred.  The buffer is
 * overwritten by the next failing call on the same thread. */
TAH_API const char* tah_last_error(void);

/* ------------------------------------------------------------------ */
/* Control flow graphs                                                 */
/* ------------------------------------------------------------------ */

typedef struct tah_cfg tah_cfg;

typedef enum tah_format {
  TAH_FORMAT_JSON = 0,    /* {"name":..., "nodes":[...], "edges":[[s,d],...]} */
  TAH_FORMAT_EDGELIST = 1 /* "src dst" lines, '#' comments, "node <id>" lines */
} tah_format;

/* Parse and validate a graph.  Rejects duplicate nodes/edges and edges
 * that reference unknown nodes; diagnostics carry the offending location. */
TAH_API tah_status tah_cfg_parse(const char* data, size_t len, tah_format fmt,
                                 tah_cfg** out);

/* Build a graph directly from arrays.  Edges are (src,dst) pairs laid out
 * flat, so `edges` holds 2*edge_count values.  Same validation as parsing. */
TAH_API tah_status tah_cfg_create(const char* name, const uint32_t* nodes,
                                  size_t node_count, const uint32_t* edges,
                                  size_t edge_count, tah_cfg** out);

/* Canonical text form: nodes and edges in ascending order.  The result is
 * heap-allocated and NUL-terminated; release it with tah_string_free. */
TAH_API tah_status tah_cfg_serialize(const tah_cfg* g, tah_format fmt,
                                     char** out, size_t* out_len);

TAH_API void tah_cfg_free(tah_cfg* g);
TAH_API void tah_string_free(char* s);

TAH_API const char* tah_cfg_name(const tah_cfg* g);
TAH_API size_t tah_cfg_node_count(const tah_cfg* g);
TAH_API size_t tah_cfg_edge_count(const tah_cfg* g);

/* Exact in/out edge counts of `node`; a self-loop adds 1 to each. */
TAH_API tah_status tah_cfg_degrees(const tah_cfg* g, uint32_t node,
                                   uint32_t* indegree, uint32_t* outdegree);

/* ------------------------------------------------------------------ */
/* Graph signatures (blended n-gram features)                          */
/* ------------------------------------------------------------------ */

typedef struct tah_signature tah_signature;

/* Extract every directed walk of 1..n nodes starting at each node and
 * count the walks' degree-type sequences.  Fails with
 * TAH_ERR_COUNT_OVERFLOW if any count (or the total) exceeds 2^32-1. */
TAH_API tah_status tah_signature_extract(const tah_cfg* g, uint32_t n,
                                         tah_signature** out);

/* Reference extractor: literal depth-first enumeration of each walk,
 * abstracting every node independently.  Intended for cross-checking
 * tah_signature_extract on small graphs (at most 12 nodes). */
TAH_API tah_status tah_signature_enumerate(const tah_cfg* g, uint32_t n,
                                           tah_signature** out);

TAH_API void tah_signature_free(tah_signature* s);

TAH_API uint32_t tah_signature_gram_size(const tah_signature* s);
TAH_API uint32_t tah_signature_total(const tah_signature* s);
TAH_API size_t tah_signature_distinct_features(const tah_signature* s);

/* Debug dump: "key<TAB>count" lines sorted by key, then "TOTAL<TAB>N". */
TAH_API tah_status tah_signature_export(const tah_signature* s, char** out,
                                        size_t* out_len);

/* Number of valid features of length <= n over the 16 degree types.
 * Saturates at UINT64_MAX for very large n. */
TAH_API uint64_t tah_feature_space_size(uint32_t n);

/* ------------------------------------------------------------------ */
/* Exact signature similarity                                          */
/* ------------------------------------------------------------------ */

TAH_API tah_status tah_cosine(const tah_signature* a, const tah_signature* b,
                              double* out);
TAH_API tah_status tah_rectification(const tah_signature* a,
                                     const tah_signature* b, double* out);
/* rectification x cosine; 1.0 exactly iff the signatures are identical. */
TAH_API tah_status tah_exact_similarity(const tah_signature* a,
                                        const tah_signature* b, double* out);
TAH_API tah_status tah_exact_distance(const tah_signature* a,
                                      const tah_signature* b, double* out);

/* ------------------------------------------------------------------ */
/* Fuzzy hashes                                                        */
/* ------------------------------------------------------------------ */

/* Hash derivation parameters.  `bits` must be a positive multiple of 8.
 * Two hashes are comparable only when all three fields agree. */
typedef struct tah_params {
  uint32_t bits;  /* projection width k, default 256 */
  uint64_t seed;  /* Gaussian stream seed, default TAH_DEFAULT_SEED */
  uint32_t n;     /* gram size the signature was built with, default 5 */
} tah_params;

#define TAH_DEFAULT_BITS 256u
#define TAH_DEFAULT_SEED UINT64_C(0x5441485F43464731)
#define TAH_DEFAULT_N 5u

typedef struct tah_hash tah_hash;

/* Deterministic standard-normal component of random vector `bit_index`
 * at coordinate `feature_key`.  Exposed for validation. */
TAH_API double tah_gaussian_component(uint64_t seed, const char* feature_key,
                                      uint32_t bit_index);

/* Sign-of-dot-product projection of a signature onto `params.bits`
 * Gaussian vectors; carries the signature total alongside the bits. */
TAH_API tah_status tah_project(const tah_signature* s, tah_params params,
                               tah_hash** out);

TAH_API void tah_hash_free(tah_hash* h);

TAH_API uint32_t tah_hash_total(const tah_hash* h);
TAH_API uint32_t tah_hash_bit_count(const tah_hash* h);
/* Copy the packed bit vector (bit i = byte i/8, mask 1<<(7-i%8)). */
TAH_API tah_status tah_hash_bytes(const tah_hash* h, uint8_t* buf, size_t cap);

/* 1 - popcount(a XOR b)/k. */
TAH_API tah_status tah_hamming_similarity(const tah_hash* a, const tah_hash* b,
                                          double* out);
/* Cosine estimate 2H-1, clamped to [0,1]. */
TAH_API tah_status tah_estimate_cosine(const tah_hash* a, const tah_hash* b,
                                       double* out);
/* rectification (from the stored totals) x cosine estimate. */
TAH_API tah_status tah_hash_similarity(const tah_hash* a, const tah_hash* b,
                                       double* out);

/* Text form "tah1:" + 8 hex digits of the total (big-endian) + bit bytes
 * as hex.  77 characters at the default 256-bit width. */
TAH_API tah_status tah_hash_encode(const tah_hash* h, char** out,
                                   size_t* out_len);

/* Inverse of tah_hash_encode.  The wire format does not carry the seed or
 * gram size, so the caller supplies the values the hash was built with. */
TAH_API tah_status tah_hash_decode(const char* text, size_t len, uint64_t seed,
                                   uint32_t n, tah_hash** out);

/* ------------------------------------------------------------------ */
/* Maximal common subgraph baseline                                    */
/* ------------------------------------------------------------------ */

/* Node count of the largest common induced subgraph under an injective,
 * direction-preserving mapping.  Exponential; both graphs must have at
 * most `node_budget` nodes (24 is a sane default). */
TAH_API tah_status tah_mcs_size(const tah_cfg* a, const tah_cfg* b,
                                uint32_t node_budget, uint32_t* out);

/* mcs_size / max(|a|, |b|). */
TAH_API tah_status tah_mcs_similarity(const tah_cfg* a, const tah_cfg* b,
                                      uint32_t node_budget, double* out);

/* ------------------------------------------------------------------ */
/* Evaluation harness                                                  */
/* ------------------------------------------------------------------ */

typedef struct tah_dataset tah_dataset;

/* Deterministic 20-node-style seed CFG: a spine 0->1->...->(n-1) plus
 * ceil(n/2) extra random edges, capped so every degree stays <= 3. */
TAH_API tah_status tah_generate_seed_cfg(uint64_t rng_seed,
                                         uint32_t node_count, tah_cfg** out);

/* All single-edit variants of `seed` labelled `group`: the seed itself,
 * one added isolated node, each isolated-node deletion, each absent
 * non-self-loop edge added, each existing edge deleted. */
TAH_API tah_status tah_dataset_variants(const tah_cfg* seed, const char* group,
                                        tah_dataset** out);

/* `groups` seed CFGs (rng_seed, rng_seed+1, ...) expanded into variants.
 * When dedup is nonzero, variants whose default-parameter signature
 * duplicates an earlier variant of the same group are dropped. */
TAH_API tah_status tah_dataset_generate(uint64_t rng_seed, uint32_t node_count,
                                        uint32_t groups, int dedup,
                                        tah_dataset** out);

/* One JSON file per item plus labels.csv ("filename,group"). */
TAH_API tah_status tah_dataset_write(const tah_dataset* ds, const char* dir);
TAH_API tah_status tah_dataset_load(const char* dir, tah_dataset** out);

TAH_API void tah_dataset_free(tah_dataset* ds);
TAH_API size_t tah_dataset_size(const tah_dataset* ds);
TAH_API const tah_cfg* tah_dataset_cfg(const tah_dataset* ds, size_t i);
TAH_API const char* tah_dataset_group(const tah_dataset* ds, size_t i);
TAH_API const char* tah_dataset_filename(const tah_dataset* ds, size_t i);

typedef enum tah_comparator {
  TAH_CMP_HASH = 0, /* fuzzy-hash similarity */
  TAH_CMP_EXACT = 1,/* exact signature similarity */
  TAH_CMP_MCS = 2   /* maximal-common-subgraph similarity */
} tah_comparator;

typedef struct tah_matrix tah_matrix;

/* Symmetric all-pairs distance matrix d(i,j) = 1 - similarity(i,j).
 * Signatures and hashes are computed once per item and cached; the fill
 * is parallel with scheduling-independent results. */
TAH_API tah_status tah_distance_matrix(const tah_dataset* ds,
                                       tah_comparator cmp, tah_params params,
                                       uint32_t mcs_budget, tah_matrix** out);

TAH_API void tah_matrix_free(tah_matrix* m);
TAH_API size_t tah_matrix_size(const tah_matrix* m);
TAH_API tah_status tah_matrix_get(const tah_matrix* m, size_t i, size_t j,
                                  double* out);

typedef enum tah_linkage {
  TAH_LINKAGE_SINGLE = 0,
  TAH_LINKAGE_AVERAGE = 1,
  TAH_LINKAGE_COMPLETE = 2
} tah_linkage;

/* Agglomerative clustering: repeatedly merge the pair of clusters with
 * the minimum linkage distance while that distance is below `threshold`
 * (ties break toward the lowest cluster indices).  `labels` receives one
 * cluster id per item, numbered 0.. in order of each cluster's smallest
 * member. */
TAH_API tah_status tah_hac_cluster(const tah_matrix* m, tah_linkage linkage,
                                   double threshold, uint32_t* labels);

/* Cluster precision/recall of `labels` against the dataset's groups:
 * precision averages each cluster's best single-group overlap, recall
 * averages each group's best single-cluster overlap. */
TAH_API tah_status tah_precision_recall(const uint32_t* labels, size_t count,
                                        const tah_dataset* truth,
                                        double* precision, double* recall);

typedef struct tah_report tah_report;

/* Evaluate thresholds 0, step, 2*step, ..., 1 and record precision,
 * recall and F-score per threshold plus same-group/different-group
 * distance statistics. */
TAH_API tah_status tah_threshold_sweep(const tah_matrix* m,
                                       const tah_dataset* truth,
                                       tah_linkage linkage, double step,
                                       tah_report** out);

TAH_API void tah_report_free(tah_report* r);
TAH_API size_t tah_report_rows(const tah_report* r);
TAH_API tah_status tah_report_row(const tah_report* r, size_t i,
                                  double* threshold, uint32_t* clusters,
                                  double* precision, double* recall,
                                  double* fscore);
/* Index of the row nearest the precision/recall intersection. */
TAH_API size_t tah_report_optimal(const tah_report* r);

typedef enum tah_pair_category {
  TAH_PAIRS_SAME = 0, /* both items share a ground-truth group */
  TAH_PAIRS_DIFF = 1
} tah_pair_category;

TAH_API tah_status tah_report_range(const tah_report* r, tah_pair_category cat,
                                    double* min, double* max);
/* Distance below which fraction `q` (0..1) of the category's pairs fall. */
TAH_API tah_status tah_report_quantile(const tah_report* r,
                                       tah_pair_category cat, double q,
                                       double* out);

/* CSV writers: "threshold,clusters,precision,recall,fscore" and
 * "category,distance,cum_fraction" (category "same"/"diff"). */
TAH_API tah_status tah_report_write_csv(const tah_report* r, const char* path);
TAH_API tah_status tah_report_write_cdf_csv(const tah_report* r,
                                            const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TAH_TAH_H */
