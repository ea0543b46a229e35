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

#include "fuzzy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "error.hpp"

namespace tah {

namespace {

uint64_t fnv1a64(std::string_view data) {
  uint64_t hash = 14695981039346656037ull;
  for (unsigned char byte : data) {
    hash ^= byte;
    hash *= 1099511628211ull;
  }
  return hash;
}

uint64_t splitmix_finalize(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Top 53 bits, offset half a step so the result stays inside (0,1).
double to_unit(uint64_t z) {
  return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

void require_valid(const ProjectionParams& params) {
  if (params.bits == 0 || params.bits % 8 != 0) {
    fail(TAH_ERR_INVALID_ARG, "projection width must be a positive multiple "
                              "of 8, got " + std::to_string(params.bits));
  }
  if (params.n == 0) {
    fail(TAH_ERR_INVALID_ARG, "gram size must be at least 1");
  }
}

void require_params_match(const FuzzyHash& a, const FuzzyHash& b) {
  if (!(a.params() == b.params())) {
    fail(TAH_ERR_PARAM_MISMATCH,
         "hashes built with different parameters cannot be compared");
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

double gaussian_component(uint64_t seed, std::string_view feature_key,
                          uint32_t bit_index) {
  uint64_t base = splitmix_finalize(seed ^ fnv1a64(feature_key));
  uint64_t z1 = splitmix_finalize(base + kGolden * (2ull * bit_index + 1));
  uint64_t z2 = splitmix_finalize(base + kGolden * (2ull * bit_index + 2));
  double u1 = to_unit(z1);
  double u2 = to_unit(z2);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

FuzzyHash::FuzzyHash(std::vector<uint8_t> bytes, uint32_t total,
                     ProjectionParams params)
    : bytes_(std::move(bytes)), total_(total), params_(params) {
  require_valid(params_);
  if (bytes_.size() * 8 != params_.bits) {
    fail(TAH_ERR_INVALID_ARG, "bit vector length does not match parameters");
  }
  if (total_ == 0) {
    fail(TAH_ERR_INVALID_ARG, "hash total must be positive");
  }
}

FuzzyHash project(const GraphSignature& signature,
                  const ProjectionParams& params) {
  require_valid(params);
  if (signature.total() == 0) {
    fail(TAH_ERR_EMPTY_SIGNATURE, "cannot project an empty signature");
  }
  if (signature.gram_size() != params.n) {
    fail(TAH_ERR_PARAM_MISMATCH,
         "signature gram size " + std::to_string(signature.gram_size()) +
             " does not match projection parameter n=" +
             std::to_string(params.n));
  }

  std::vector<double> dots(params.bits, 0.0);
  for (const auto& [key, count] : signature.entries()) {
    double weight = static_cast<double>(count);
    for (uint32_t i = 0; i < params.bits; ++i) {
      dots[i] += weight * gaussian_component(params.seed, key, i);
    }
  }

  std::vector<uint8_t> bytes(params.bits / 8, 0);
  for (uint32_t i = 0; i < params.bits; ++i) {
    if (dots[i] >= 0.0) {  // ties project to 1
      bytes[i / 8] |= static_cast<uint8_t>(1u << (7 - i % 8));
    }
  }
  return FuzzyHash(std::move(bytes), signature.total(), params);
}

double hamming_similarity(const FuzzyHash& a, const FuzzyHash& b) {
  require_params_match(a, b);
  uint32_t differing = 0;
  for (size_t i = 0; i < a.bytes().size(); ++i) {
    differing += static_cast<uint32_t>(
        std::popcount(static_cast<uint8_t>(a.bytes()[i] ^ b.bytes()[i])));
  }
  return 1.0 - static_cast<double>(differing) / a.params().bits;
}

double estimate_cosine(const FuzzyHash& a, const FuzzyHash& b) {
  double estimate = 2.0 * hamming_similarity(a, b) - 1.0;
  return std::clamp(estimate, 0.0, 1.0);
}

double hash_similarity(const FuzzyHash& a, const FuzzyHash& b) {
  double estimate = estimate_cosine(a, b);
  double lo = static_cast<double>(std::min(a.total(), b.total()));
  double hi = static_cast<double>(std::max(a.total(), b.total()));
  return (lo / hi) * estimate;
}

std::string encode_hash(const FuzzyHash& h) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "tah1:";
  out.reserve(5 + 8 + h.bytes().size() * 2);
  for (int shift = 28; shift >= 0; shift -= 4) {
    out.push_back(kHex[(h.total() >> shift) & 0xF]);
  }
  for (uint8_t byte : h.bytes()) {
    out.push_back(kHex[byte >> 4]);
    out.push_back(kHex[byte & 0xF]);
  }
  return out;
}

FuzzyHash decode_hash(std::string_view text, uint64_t seed, uint32_t n) {
  size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    fail(TAH_ERR_BAD_ENCODING, "missing version tag");
  }
  std::string_view version = text.substr(0, colon);
  if (version != "tah1") {
    fail(TAH_ERR_BAD_ENCODING,
         "unsupported hash version '" + std::string(version) + "'");
  }
  std::string_view body = text.substr(colon + 1);
  if (body.size() < 10 || (body.size() - 8) % 2 != 0) {
    fail(TAH_ERR_BAD_ENCODING, "hash text has invalid length " +
                                   std::to_string(text.size()));
  }

  uint32_t total = 0;
  for (size_t i = 0; i < 8; ++i) {
    int v = hex_value(body[i]);
    if (v < 0) {
      fail(TAH_ERR_BAD_ENCODING, "non-hex character in hash text");
    }
    total = (total << 4) | static_cast<uint32_t>(v);
  }
  if (total == 0) {
    fail(TAH_ERR_BAD_ENCODING, "hash total must be positive");
  }

  std::vector<uint8_t> bytes((body.size() - 8) / 2);
  for (size_t i = 0; i < bytes.size(); ++i) {
    int hi = hex_value(body[8 + 2 * i]);
    int lo = hex_value(body[9 + 2 * i]);
    if (hi < 0 || lo < 0) {
      fail(TAH_ERR_BAD_ENCODING, "non-hex character in hash text");
    }
    bytes[i] = static_cast<uint8_t>((hi << 4) | lo);
  }

  ProjectionParams params{static_cast<uint32_t>(bytes.size() * 8), seed, n};
  return FuzzyHash(std::move(bytes), total, params);
}

}  // namespace tah
