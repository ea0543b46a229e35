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

#include "similarity.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace tah {

namespace {

void require_nonempty(const GraphSignature& s) {
  if (s.total() == 0) {
    fail(TAH_ERR_EMPTY_SIGNATURE, "similarity undefined on empty signature");
  }
}

void require_compatible(const GraphSignature& a, const GraphSignature& b) {
  if (a.gram_size() != b.gram_size()) {
    fail(TAH_ERR_PARAM_MISMATCH,
         "gram size mismatch: " + std::to_string(a.gram_size()) + " vs " +
             std::to_string(b.gram_size()));
  }
}

}  // namespace

double cosine(const GraphSignature& a, const GraphSignature& b) {
  require_nonempty(a);
  require_nonempty(b);

  const auto& ea = a.entries();
  const auto& eb = b.entries();
  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (const auto& [key, count] : ea) {
    norm_a += static_cast<double>(count) * count;
  }
  for (const auto& [key, count] : eb) {
    norm_b += static_cast<double>(count) * count;
  }
  size_t i = 0;
  size_t j = 0;
  while (i < ea.size() && j < eb.size()) {
    int order = ea[i].first.compare(eb[j].first);
    if (order < 0) {
      ++i;
    } else if (order > 0) {
      ++j;
    } else {
      dot += static_cast<double>(ea[i].second) * eb[j].second;
      ++i;
      ++j;
    }
  }
  // sqrt of the product (rather than a product of sqrts) keeps the
  // self-comparison exactly 1.0: sqrt(x*x) == x in IEEE arithmetic.
  double value = dot / std::sqrt(norm_a * norm_b);
  return std::clamp(value, 0.0, 1.0);
}

double rectification(const GraphSignature& a, const GraphSignature& b) {
  require_nonempty(a);
  require_nonempty(b);
  double lo = static_cast<double>(std::min(a.total(), b.total()));
  double hi = static_cast<double>(std::max(a.total(), b.total()));
  return lo / hi;
}

double exact_similarity(const GraphSignature& a, const GraphSignature& b) {
  require_compatible(a, b);
  return rectification(a, b) * cosine(a, b);
}

double exact_distance(const GraphSignature& a, const GraphSignature& b) {
  return 1.0 - exact_similarity(a, b);
}

}  // namespace tah
