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

#ifndef TAH_SIMILARITY_HPP
#define TAH_SIMILARITY_HPP

#include "features.hpp"

namespace tah {

// Exact signature comparison.  All functions require nonempty signatures
// (TAH_ERR_EMPTY_SIGNATURE otherwise); the combined scores additionally
// require matching gram sizes (TAH_ERR_PARAM_MISMATCH).

double cosine(const GraphSignature& a, const GraphSignature& b);

// min(total_a, total_b) / max(total_a, total_b).
double rectification(const GraphSignature& a, const GraphSignature& b);

// rectification x cosine; exactly 1.0 for identical signatures.
double exact_similarity(const GraphSignature& a, const GraphSignature& b);

// 1 - exact_similarity.
double exact_distance(const GraphSignature& a, const GraphSignature& b);

}  // namespace tah

#endif  // TAH_SIMILARITY_HPP
