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

#ifndef GRAPHKV_SCORERS_H_
#define GRAPHKV_SCORERS_H_

// Base importance scorers and per-layer budget allocators. These stand in for
// the eviction baselines GraphKV refines: key-norm ranking, observation-window
// attention (SnapKV family) and cumulative attention (H2O), plus uniform and
// pyramid budget schedules.

#include <cstddef>
#include <string_view>
#include <vector>

#include "graphkv/kv_model.h"

namespace graphkv {

enum class ScorerKind { kKNorm, kWindowAttention, kCumulativeAttention };

std::string_view ScorerKindName(ScorerKind kind);
// Accepts "knorm", "window_attention", "cumulative_attention".
ScorerKind ParseScorerKind(std::string_view name);

struct WindowConfig {
  std::size_t window_len = 32;
  // Sliding max-pool width over the score vector; 1 disables pooling.
  std::size_t pool_width = 1;
};

struct ScorerConfig {
  ScorerKind kind = ScorerKind::kWindowAttention;
  WindowConfig window;
  // KNorm ranks low-norm keys first (score = -norm) unless this is set.
  bool knorm_positive = false;
};

ScoreVector score_knorm(const Matrix& keys, bool positive = false);

// Mean softmax(q K^T / sqrt(d)) over the last `window_len` query rows.
ScoreVector score_window_attention(const Matrix& queries, const Matrix& keys,
                                   const WindowConfig& cfg);

// Sum of softmax(q K^T / sqrt(d)) over all query rows.
ScoreVector score_cumulative_attention(const Matrix& queries,
                                       const Matrix& keys);

// Dispatches on cfg.kind. Attention kinds require cache.queries.
ScoreVector ComputeBaseScores(const LayerCache& cache, const ScorerConfig& cfg);

// Same-length sliding max over a window of `width` centered on each entry
// (left reach width/2, right reach width-1-width/2), truncated at the edges.
std::vector<double> MaxPool1d(std::span<const double> v, std::size_t width);

std::vector<std::size_t> allocate_budget_uniform(std::size_t total,
                                                 std::size_t num_layers);

// Linear taper from weight 1 at layer 0 to 1/taper at the last layer.
std::vector<std::size_t> allocate_budget_pyramid(std::size_t total,
                                                 std::size_t num_layers,
                                                 double taper);

}  // namespace graphkv

#endif  // GRAPHKV_SCORERS_H_
