// Copyright 2026 The GraphKV Authors.
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

#ifndef GRAPHKV_EVICTION_H_
#define GRAPHKV_EVICTION_H_

// Budgeted token selection: base scores, optional graph refinement, a
// protected observation window, and gathering of the kept rows.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "graphkv/graph.h"
#include "graphkv/kv_model.h"
#include "graphkv/propagation.h"
#include "graphkv/scorers.h"

namespace graphkv {

struct GraphRefinement {
  SourceSelection sources = SourceSelection::Ratio(0.3);
  SimilarityKind similarity = SimilarityKind::kKeyKey;
  PropagationConfig propagation;
};

struct EvictionPolicy {
  ScorerConfig scorer;
  std::optional<GraphRefinement> refinement;
  // Trailing tokens that are always kept. They count against the budget, are
  // never sources and never receive signals.
  std::size_t protected_window = 0;
  // When set, used instead of running the scorer.
  std::optional<ScoreVector> precomputed_scores;
};

struct EvictionResult {
  std::vector<TokenIndex> kept_indices;
  Matrix keys_sub;
  Matrix values_sub;
  ScoreVector refined_scores;
};

// The k highest-scoring indices, ties to the lower index, sorted ascending.
// -inf entries are chosen only once finite ones run out.
std::vector<TokenIndex> select_topk(const ScoreVector& scores, std::size_t k);

// Rows `indices` of keys and values, in order.
std::pair<Matrix, Matrix> gather(const LayerCache& cache,
                                 const std::vector<TokenIndex>& indices);

EvictionResult evict(const LayerCache& cache, std::size_t budget,
                     const EvictionPolicy& policy);

}  // namespace graphkv

#endif  // GRAPHKV_EVICTION_H_
