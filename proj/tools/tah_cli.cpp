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

// Command line front end; everything flows through the public C API.
//
// Exit codes: 0 success, 2 parse/validation failure, 3 empty CFG,
// 4 I/O failure, 5 comparator failure, 6 duplicate corpus id,
// 7 corrupt corpus line, 64 usage error.

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tah/tah.h"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitEmpty = 3;
constexpr int kExitIo = 4;
constexpr int kExitComparator = 5;
constexpr int kExitDuplicateId = 6;
constexpr int kExitCorruptCorpus = 7;
constexpr int kExitUsage = 64;

// Fatal-error helper: print the library diagnostic and leave.
[[noreturn]] void die(int exit_code, const std::string& context) {
  std::fprintf(stderr, "tah: %s: %s\n", context.c_str(), tah_last_error());
  std::exit(exit_code);
}

int exit_code_for(tah_status status) {
  switch (status) {
    case TAH_ERR_EMPTY_SIGNATURE:
      return kExitEmpty;
    case TAH_ERR_IO:
      return kExitIo;
    case TAH_ERR_SYNTAX:
    case TAH_ERR_SEMANTIC:
    case TAH_ERR_UNKNOWN_NODE:
    case TAH_ERR_BAD_ENCODING:
    case TAH_ERR_INVALID_ARG:
      return kExitParse;
    default:
      return kExitComparator;
  }
}

struct HashOptions {
  uint32_t n = TAH_DEFAULT_N;
  uint32_t bits = TAH_DEFAULT_BITS;
  std::string seed_text;  // hex; empty means env/default

  tah_params params() const {
    tah_params p{bits, TAH_DEFAULT_SEED, n};
    const char* env = std::getenv("TAH_SEED");
    std::string text = !seed_text.empty() ? seed_text
                       : env              ? std::string(env)
                                          : std::string();
    if (!text.empty()) {
      const char* begin = text.c_str();
      char* end = nullptr;
      uint64_t value = std::strtoull(begin, &end, 16);
      if (end == begin || *end != '\0') {
        std::fprintf(stderr, "tah: invalid hex seed '%s'\n", text.c_str());
        std::exit(kExitUsage);
      }
      p.seed = value;
    }
    return p;
  }
};

void add_hash_options(CLI::App* cmd, HashOptions* opts) {
  cmd->add_option("--n", opts->n, "Maximum gram length")
      ->capture_default_str();
  cmd->add_option("--bits", opts->bits, "Projection width in bits")
      ->capture_default_str();
  cmd->add_option("--seed", opts->seed_text,
                  "Projection seed (hex; overrides TAH_SEED)");
}

std::string read_file(const std::string& path, int fail_code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "tah: cannot open %s\n", path.c_str());
    std::exit(fail_code);
  }
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

tah_format detect_format(const std::string& explicit_format,
                         const std::string& body) {
  if (explicit_format == "json") return TAH_FORMAT_JSON;
  if (explicit_format == "edgelist") return TAH_FORMAT_EDGELIST;
  for (char c : body) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == '{' ? TAH_FORMAT_JSON : TAH_FORMAT_EDGELIST;
  }
  return TAH_FORMAT_JSON;
}

using CfgPtr = std::unique_ptr<tah_cfg, decltype(&tah_cfg_free)>;
using SigPtr = std::unique_ptr<tah_signature, decltype(&tah_signature_free)>;
using HashPtr = std::unique_ptr<tah_hash, decltype(&tah_hash_free)>;

CfgPtr load_cfg(const std::string& path, const std::string& format) {
  std::string body = read_file(path, kExitParse);
  tah_cfg* cfg = nullptr;
  tah_status status =
      tah_cfg_parse(body.data(), body.size(), detect_format(format, body),
                    &cfg);
  if (status != TAH_OK) die(exit_code_for(status), path);
  return {cfg, tah_cfg_free};
}

SigPtr extract(const tah_cfg* cfg, uint32_t n, const std::string& context) {
  tah_signature* sig = nullptr;
  tah_status status = tah_signature_extract(cfg, n, &sig);
  if (status != TAH_OK) die(exit_code_for(status), context);
  return {sig, tah_signature_free};
}

HashPtr project(const tah_signature* sig, tah_params params,
                const std::string& context) {
  tah_hash* hash = nullptr;
  tah_status status = tah_project(sig, params, &hash);
  if (status != TAH_OK) die(exit_code_for(status), context);
  return {hash, tah_hash_free};
}

std::string encode(const tah_hash* hash) {
  char* text = nullptr;
  tah_status status = tah_hash_encode(hash, &text, nullptr);
  if (status != TAH_OK) die(kExitComparator, "encode");
  std::string out(text);
  tah_string_free(text);
  return out;
}

/* ------------------------------ hash ------------------------------ */

int run_hash(const std::string& input, const std::string& format,
             const HashOptions& opts) {
  CfgPtr cfg = load_cfg(input, format);
  SigPtr sig = extract(cfg.get(), opts.n, input);
  HashPtr hash = project(sig.get(), opts.params(), input);
  std::printf("%s\n", encode(hash.get()).c_str());
  return 0;
}

/* ----------------------------- compare ---------------------------- */

int run_compare(const std::string& a_path, const std::string& b_path,
                bool exact, const std::string& format,
                const HashOptions& opts) {
  CfgPtr a = load_cfg(a_path, format);
  CfgPtr b = load_cfg(b_path, format);
  SigPtr sig_a = extract(a.get(), opts.n, a_path);
  SigPtr sig_b = extract(b.get(), opts.n, b_path);

  double similarity = 0.0;
  if (exact) {
    tah_status status =
        tah_exact_similarity(sig_a.get(), sig_b.get(), &similarity);
    if (status != TAH_OK) die(exit_code_for(status), "compare");
  } else {
    tah_params params = opts.params();
    HashPtr hash_a = project(sig_a.get(), params, a_path);
    HashPtr hash_b = project(sig_b.get(), params, b_path);
    tah_status status =
        tah_hash_similarity(hash_a.get(), hash_b.get(), &similarity);
    if (status != TAH_OK) die(exit_code_for(status), "compare");
  }
  std::printf("%.6f\n", similarity);
  return 0;
}

/* ------------------------------- gen ------------------------------ */

int run_gen(const std::string& out_dir, uint32_t nodes, uint32_t groups,
            uint64_t rng_seed, bool dedup) {
  tah_dataset* ds = nullptr;
  tah_status status =
      tah_dataset_generate(rng_seed, nodes, groups, dedup ? 1 : 0, &ds);
  if (status != TAH_OK) die(kExitParse, "gen");
  std::unique_ptr<tah_dataset, decltype(&tah_dataset_free)> guard(
      ds, tah_dataset_free);

  status = tah_dataset_write(ds, out_dir.c_str());
  if (status != TAH_OK) die(kExitIo, out_dir);
  std::printf("wrote %zu items in %u groups to %s\n", tah_dataset_size(ds),
              groups, out_dir.c_str());
  return 0;
}

/* ----------------------------- cluster ---------------------------- */

tah_comparator parse_comparator(const std::string& name) {
  if (name == "tah") return TAH_CMP_HASH;
  if (name == "exact") return TAH_CMP_EXACT;
  if (name == "mcs") return TAH_CMP_MCS;
  std::fprintf(stderr, "tah: unknown comparator '%s'\n", name.c_str());
  std::exit(kExitUsage);
}

tah_linkage parse_linkage(const std::string& name) {
  if (name == "single") return TAH_LINKAGE_SINGLE;
  if (name == "average") return TAH_LINKAGE_AVERAGE;
  if (name == "complete") return TAH_LINKAGE_COMPLETE;
  std::fprintf(stderr, "tah: unknown linkage '%s'\n", name.c_str());
  std::exit(kExitUsage);
}

int run_cluster(const std::string& dir, const std::string& comparator,
                const std::string& linkage, double step,
                const std::string& report_path, const std::string& cdf_path,
                uint32_t mcs_budget, const HashOptions& opts) {
  tah_dataset* ds = nullptr;
  if (tah_dataset_load(dir.c_str(), &ds) != TAH_OK) die(kExitParse, dir);
  std::unique_ptr<tah_dataset, decltype(&tah_dataset_free)> ds_guard(
      ds, tah_dataset_free);

  tah_matrix* matrix = nullptr;
  tah_status status = tah_distance_matrix(ds, parse_comparator(comparator),
                                          opts.params(), mcs_budget, &matrix);
  if (status != TAH_OK) die(kExitComparator, "distance matrix");
  std::unique_ptr<tah_matrix, decltype(&tah_matrix_free)> matrix_guard(
      matrix, tah_matrix_free);

  tah_report* report = nullptr;
  status = tah_threshold_sweep(matrix, ds, parse_linkage(linkage), step,
                               &report);
  if (status != TAH_OK) die(kExitComparator, "threshold sweep");
  std::unique_ptr<tah_report, decltype(&tah_report_free)> report_guard(
      report, tah_report_free);

  if (tah_report_write_csv(report, report_path.c_str()) != TAH_OK) {
    die(kExitIo, report_path);
  }
  if (!cdf_path.empty() &&
      tah_report_write_cdf_csv(report, cdf_path.c_str()) != TAH_OK) {
    die(kExitIo, cdf_path);
  }

  double threshold = 0.0, precision = 0.0, recall = 0.0, fscore = 0.0;
  uint32_t clusters = 0;
  tah_report_row(report, tah_report_optimal(report), &threshold, &clusters,
                 &precision, &recall, &fscore);
  std::printf("optimal F=%.6f at t=%.6f\n", fscore, threshold);
  return 0;
}

/* ------------------------------ corpus ---------------------------- */

struct CorpusEntry {
  std::string id;
  std::string hash;
};

std::vector<CorpusEntry> read_corpus(const std::string& db_path) {
  std::vector<CorpusEntry> entries;
  std::ifstream in(db_path, std::ios::binary);
  if (!in) return entries;  // absent file is an empty corpus

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object() ||
        !record.contains("id") || !record["id"].is_string() ||
        !record.contains("hash") || !record["hash"].is_string()) {
      std::fprintf(stderr, "tah: %s line %zu: corrupt corpus record\n",
                   db_path.c_str(), line_no);
      std::exit(kExitCorruptCorpus);
    }
    entries.push_back({record["id"].get<std::string>(),
                       record["hash"].get<std::string>()});
  }
  return entries;
}

int run_corpus_add(const std::string& id, const std::string& cfg_path,
                   const std::string& db_path, const std::string& format,
                   const HashOptions& opts) {
  for (const CorpusEntry& entry : read_corpus(db_path)) {
    if (entry.id == id) {
      std::fprintf(stderr, "tah: id '%s' already present in %s\n", id.c_str(),
                   db_path.c_str());
      return kExitDuplicateId;
    }
  }

  CfgPtr cfg = load_cfg(cfg_path, format);
  SigPtr sig = extract(cfg.get(), opts.n, cfg_path);
  HashPtr hash = project(sig.get(), opts.params(), cfg_path);

  nlohmann::ordered_json record;
  record["id"] = id;
  record["hash"] = encode(hash.get());
  record["added_at"] = static_cast<int64_t>(std::time(nullptr));

  std::ofstream out(db_path, std::ios::binary | std::ios::app);
  out << record.dump() << '\n';
  if (!out) {
    std::fprintf(stderr, "tah: cannot append to %s\n", db_path.c_str());
    return kExitIo;
  }
  return 0;
}

int run_corpus_scan(const std::string& cfg_path, const std::string& db_path,
                    double threshold, const std::string& format,
                    const HashOptions& opts) {
  CfgPtr cfg = load_cfg(cfg_path, format);
  SigPtr sig = extract(cfg.get(), opts.n, cfg_path);
  tah_params params = opts.params();
  HashPtr query = project(sig.get(), params, cfg_path);

  std::vector<std::pair<double, std::string>> matches;
  for (const CorpusEntry& entry : read_corpus(db_path)) {
    tah_hash* stored = nullptr;
    tah_status status = tah_hash_decode(entry.hash.data(), entry.hash.size(),
                                        params.seed, params.n, &stored);
    if (status != TAH_OK) die(kExitCorruptCorpus, entry.id);
    HashPtr stored_guard(stored, tah_hash_free);

    double similarity = 0.0;
    status = tah_hash_similarity(query.get(), stored, &similarity);
    if (status != TAH_OK) die(exit_code_for(status), entry.id);
    if (similarity >= threshold) {
      matches.emplace_back(similarity, entry.id);
    }
  }

  std::sort(matches.begin(), matches.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (const auto& [similarity, id] : matches) {
    std::printf("%.6f\t%s\n", similarity, id.c_str());
  }
  return 0;
}

/* ------------------------------- bench ---------------------------- */

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

int run_bench(const std::string& dir, const std::string& comparators,
              size_t limit, uint32_t mcs_budget, const HashOptions& opts) {
  tah_dataset* ds = nullptr;
  if (tah_dataset_load(dir.c_str(), &ds) != TAH_OK) die(kExitParse, dir);
  std::unique_ptr<tah_dataset, decltype(&tah_dataset_free)> guard(
      ds, tah_dataset_free);

  size_t count = tah_dataset_size(ds);
  if (limit > 0 && limit < count) count = limit;
  tah_params params = opts.params();

  std::vector<std::string> names;
  std::stringstream list(comparators);
  std::string token;
  while (std::getline(list, token, ',')) {
    if (!token.empty()) names.push_back(token);
  }

  std::printf("%-14s %8s %12s %12s %12s\n", "comparator", "items",
              "generate_s", "pairs_s", "total_s");

  for (const std::string& name : names) {
    double generate_s = 0.0;
    double pairs_s = 0.0;

    if (name == "tah" || name == "exact") {
      auto start = std::chrono::steady_clock::now();
      std::vector<SigPtr> sigs;
      std::vector<HashPtr> hashes;
      for (size_t i = 0; i < count; ++i) {
        sigs.push_back(extract(tah_dataset_cfg(ds, i), opts.n, "bench"));
        if (name == "tah") {
          hashes.push_back(project(sigs.back().get(), params, "bench"));
        }
      }
      generate_s = seconds_since(start);

      start = std::chrono::steady_clock::now();
      double sink = 0.0;
      for (size_t i = 0; i < count; ++i) {
        for (size_t j = i + 1; j < count; ++j) {
          double similarity = 0.0;
          tah_status status =
              name == "tah"
                  ? tah_hash_similarity(hashes[i].get(), hashes[j].get(),
                                        &similarity)
                  : tah_exact_similarity(sigs[i].get(), sigs[j].get(),
                                         &similarity);
          if (status != TAH_OK) die(kExitComparator, "bench");
          sink += similarity;
        }
      }
      pairs_s = seconds_since(start);
      if (sink < -1.0) std::printf("unreachable\n");
    } else if (name == "tah-uncached") {
      // Regenerates both hashes inside every pairwise comparison, the
      // way a raw-graph comparator has to work.
      auto start = std::chrono::steady_clock::now();
      for (size_t i = 0; i < count; ++i) {
        for (size_t j = i + 1; j < count; ++j) {
          SigPtr sig_i = extract(tah_dataset_cfg(ds, i), opts.n, "bench");
          SigPtr sig_j = extract(tah_dataset_cfg(ds, j), opts.n, "bench");
          HashPtr hash_i = project(sig_i.get(), params, "bench");
          HashPtr hash_j = project(sig_j.get(), params, "bench");
          double similarity = 0.0;
          if (tah_hash_similarity(hash_i.get(), hash_j.get(), &similarity) !=
              TAH_OK) {
            die(kExitComparator, "bench");
          }
        }
      }
      pairs_s = seconds_since(start);
    } else if (name == "mcs") {
      auto start = std::chrono::steady_clock::now();
      for (size_t i = 0; i < count; ++i) {
        for (size_t j = i + 1; j < count; ++j) {
          double similarity = 0.0;
          tah_status status =
              tah_mcs_similarity(tah_dataset_cfg(ds, i), tah_dataset_cfg(ds, j),
                                 mcs_budget, &similarity);
          if (status != TAH_OK) die(kExitComparator, "bench");
        }
      }
      pairs_s = seconds_since(start);
    } else {
      std::fprintf(stderr, "tah: unknown comparator '%s'\n", name.c_str());
      return kExitUsage;
    }

    std::printf("%-14s %8zu %12.3f %12.3f %12.3f\n", name.c_str(), count,
                generate_s, pairs_s, generate_s + pairs_s);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topology-aware hashing for control flow graph similarity"};
  app.require_subcommand(1);

  // hash
  std::string hash_input, hash_format = "auto";
  HashOptions hash_opts;
  CLI::App* hash_cmd = app.add_subcommand("hash", "Print a CFG's fuzzy hash");
  hash_cmd->add_option("input", hash_input, "CFG file")->required();
  hash_cmd->add_option("--format", hash_format, "json|edgelist|auto");
  add_hash_options(hash_cmd, &hash_opts);

  // compare
  std::string cmp_a, cmp_b, cmp_format = "auto";
  bool cmp_exact = false;
  HashOptions cmp_opts;
  CLI::App* cmp_cmd =
      app.add_subcommand("compare", "Similarity of two CFG files");
  cmp_cmd->add_option("a", cmp_a, "First CFG file")->required();
  cmp_cmd->add_option("b", cmp_b, "Second CFG file")->required();
  cmp_cmd->add_flag("--exact", cmp_exact,
                    "Exact signature similarity instead of hashes");
  cmp_cmd->add_option("--format", cmp_format, "json|edgelist|auto");
  add_hash_options(cmp_cmd, &cmp_opts);

  // gen
  std::string gen_out;
  uint32_t gen_nodes = 20, gen_groups = 5;
  uint64_t gen_seed = 1;
  bool gen_dedup = false;
  CLI::App* gen_cmd =
      app.add_subcommand("gen", "Generate a labelled variant dataset");
  gen_cmd->add_option("--out", gen_out, "Output directory")->required();
  gen_cmd->add_option("--nodes", gen_nodes, "Nodes per seed CFG")
      ->capture_default_str();
  gen_cmd->add_option("--groups", gen_groups, "Number of seed CFGs")
      ->capture_default_str();
  gen_cmd->add_option("--rng-seed", gen_seed, "Generator seed")
      ->capture_default_str();
  gen_cmd->add_flag("--dedup", gen_dedup,
                    "Drop variants with duplicate signatures");

  // cluster
  std::string cl_dir, cl_comparator = "tah", cl_linkage = "average";
  std::string cl_report = "report.csv", cl_cdf;
  double cl_step = 0.005;
  uint32_t cl_budget = 24;
  HashOptions cl_opts;
  CLI::App* cl_cmd =
      app.add_subcommand("cluster", "Sweep clustering thresholds");
  cl_cmd->add_option("--dir", cl_dir, "Dataset directory with labels.csv")
      ->required();
  cl_cmd->add_option("--comparator", cl_comparator, "tah|exact|mcs")
      ->capture_default_str();
  cl_cmd->add_option("--linkage", cl_linkage, "single|average|complete")
      ->capture_default_str();
  cl_cmd->add_option("--step", cl_step, "Threshold step")
      ->capture_default_str();
  cl_cmd->add_option("--report", cl_report, "Report CSV path")
      ->capture_default_str();
  cl_cmd->add_option("--cdf", cl_cdf, "Distance CDF CSV path");
  cl_cmd->add_option("--mcs-budget", cl_budget, "MCS node budget")
      ->capture_default_str();
  add_hash_options(cl_cmd, &cl_opts);

  // corpus
  CLI::App* corpus_cmd =
      app.add_subcommand("corpus", "Maintain and scan a hash corpus");
  corpus_cmd->require_subcommand(1);
  std::string add_id, add_cfg, add_db = "corpus.jsonl", add_format = "auto";
  HashOptions add_opts;
  CLI::App* add_cmd = corpus_cmd->add_subcommand("add", "Append one CFG");
  add_cmd->add_option("id", add_id, "Entry identifier")->required();
  add_cmd->add_option("cfg", add_cfg, "CFG file")->required();
  add_cmd->add_option("--db", add_db, "Corpus JSONL path")
      ->capture_default_str();
  add_cmd->add_option("--format", add_format, "json|edgelist|auto");
  add_hash_options(add_cmd, &add_opts);

  std::string scan_cfg, scan_db = "corpus.jsonl", scan_format = "auto";
  double scan_threshold = 0.5;
  HashOptions scan_opts;
  CLI::App* scan_cmd =
      corpus_cmd->add_subcommand("scan", "Rank corpus entries by similarity");
  scan_cmd->add_option("cfg", scan_cfg, "CFG file")->required();
  scan_cmd->add_option("--db", scan_db, "Corpus JSONL path")
      ->capture_default_str();
  scan_cmd->add_option("--threshold", scan_threshold,
                       "Minimum similarity to report")
      ->capture_default_str();
  scan_cmd->add_option("--format", scan_format, "json|edgelist|auto");
  add_hash_options(scan_cmd, &scan_opts);

  // bench
  std::string bench_dir, bench_comparators = "tah,exact";
  size_t bench_limit = 0;
  uint32_t bench_budget = 24;
  HashOptions bench_opts;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Time generation and all-pairs comparison");
  bench_cmd->add_option("--dir", bench_dir, "Dataset directory")->required();
  bench_cmd
      ->add_option("--comparators", bench_comparators,
                   "Comma list of tah,exact,mcs,tah-uncached")
      ->capture_default_str();
  bench_cmd->add_option("--limit", bench_limit, "Use only the first N items");
  bench_cmd->add_option("--mcs-budget", bench_budget, "MCS node budget")
      ->capture_default_str();
  add_hash_options(bench_cmd, &bench_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (hash_cmd->parsed()) return run_hash(hash_input, hash_format, hash_opts);
  if (cmp_cmd->parsed()) {
    return run_compare(cmp_a, cmp_b, cmp_exact, cmp_format, cmp_opts);
  }
  if (gen_cmd->parsed()) {
    return run_gen(gen_out, gen_nodes, gen_groups, gen_seed, gen_dedup);
  }
  if (cl_cmd->parsed()) {
    return run_cluster(cl_dir, cl_comparator, cl_linkage, cl_step, cl_report,
                       cl_cdf, cl_budget, cl_opts);
  }
  if (corpus_cmd->parsed()) {
    if (add_cmd->parsed()) {
      return run_corpus_add(add_id, add_cfg, add_db, add_format, add_opts);
    }
    return run_corpus_scan(scan_cfg, scan_db, scan_threshold, scan_format,
                           scan_opts);
  }
  if (bench_cmd->parsed()) {
    return run_bench(bench_dir, bench_comparators, bench_limit, bench_budget,
                     bench_opts);
  }
  return kExitUsage;
}
