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

#ifndef TAH_FUZZY_HPP
#define TAH_FUZZY_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "features.hpp"

namespace tah {

inline constexpr uint32_t kDefaultBits = 256;
inline constexpr uint64_t kDefaultSeed = 0x5441485F43464731ull;
inline constexpr uint32_t kDefaultGramSize = 5;

struct ProjectionParams {
  uint32_t bits = kDefaultBits;  // positive multiple of 8
  uint64_t seed = kDefaultSeed;
  uint32_t n = kDefaultGramSize;

  bool operator==(const ProjectionParams&) const = default;
};

// Deterministic standard-normal component of random vector `bit_index`
// at the coordinate named by `feature_key`.  The seed and an FNV-1a hash
// of the key feed a SplitMix64-style finalizer; two uniform draws go
// through Box-Muller.
double gaussian_component(uint64_t seed, std::string_view feature_key,
                          uint32_t bit_index);

// k projection bits plus the signature total; the 288-bit output at the
// default 256-bit width.
class FuzzyHash {
 public:
  FuzzyHash(std::vector<uint8_t> bytes, uint32_t total,
            ProjectionParams params);

  const std::vector<uint8_t>& bytes() const { return bytes_; }
  uint32_t total() const { return total_; }
  const ProjectionParams& params() const { return params_; }

  // Bit i sits in byte i/8 at position 7 - i%8 (MSB first).
  bool bit(uint32_t i) const {
    return (bytes_[i / 8] >> (7 - i % 8)) & 1u;
  }

  bool operator==(const FuzzyHash&) const = default;

 private:
  std::vector<uint8_t> bytes_;
  uint32_t total_;
  ProjectionParams params_;
};

// Bit i = 1 iff the dot product of the signature with Gaussian vector i
// is >= 0.  Requires a nonempty signature whose gram size matches
// params.n.
FuzzyHash project(const GraphSignature& signature,
                  const ProjectionParams& params);

// 1 - popcount(a XOR b)/k; requires matching params.
double hamming_similarity(const FuzzyHash& a, const FuzzyHash& b);

// 2H - 1 clamped to [0,1].
double estimate_cosine(const FuzzyHash& a, const FuzzyHash& b);

// rectification (recomputed from the stored totals) x estimated cosine.
double hash_similarity(const FuzzyHash& a, const FuzzyHash& b);

// "tah1:" + 8 hex digits of total (big-endian) + bit bytes in hex.
std::string encode_hash(const FuzzyHash& h);

// Inverse of encode_hash.  The text does not carry the seed or gram
// size, so the caller states which stream the hash belongs to.
FuzzyHash decode_hash(std::string_view text, uint64_t seed, uint32_t n);

}  // namespace tah

#endif  // TAH_FUZZY_HPP
