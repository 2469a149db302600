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

#include "graphkv/scorers.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "graphkv/errors.h"
#include "graphkv/simd.h"

namespace graphkv {
namespace {

// softmax(q K^T / sqrt(d)) for one query row.
std::vector<double> AttentionRow(std::span<const float> query,
                                 const Matrix& keys) {
  const double scale =
      keys.cols() == 0 ? 0.0 : 1.0 / std::sqrt(static_cast<double>(keys.cols()));
  std::vector<double> logits(keys.rows());
  for (std::size_t j = 0; j < keys.rows(); ++j) {
    logits[j] = simd::Dot(query, keys.row(j)) * scale;
  }
  return softmax_row(logits);
}

void CheckAttentionShapes(const Matrix& queries, const Matrix& keys) {
  if (queries.cols() != keys.cols()) {
    throw ArgumentError("queries and keys differ in dimension");
  }
  if (keys.rows() == 0) throw ArgumentError("attention over zero keys");
}

// Splits `total` proportionally to `weights`, flooring each share and handing
// the remainder out one unit at a time from layer 0.
std::vector<std::size_t> SplitByWeights(std::size_t total,
                                        const std::vector<double>& weights) {
  double weight_sum = 0.0;
  for (double w : weights) weight_sum += w;
  std::vector<std::size_t> out(weights.size());
  std::size_t assigned = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    // Small slack so exact quotients like 20.0 are not floored to 19.
    const double share = static_cast<double>(total) * weights[l] / weight_sum;
    out[l] = std::min<std::size_t>(total - assigned,
                                   static_cast<std::size_t>(share + 1e-9));
    assigned += out[l];
  }
  for (std::size_t l = 0; assigned < total; l = (l + 1) % out.size()) {
    ++out[l];
    ++assigned;
  }
  return out;
}

}  // namespace

std::string_view ScorerKindName(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::kKNorm:
      return "knorm";
    case ScorerKind::kWindowAttention:
      return "window_attention";
    case ScorerKind::kCumulativeAttention:
      return "cumulative_attention";
  }
  return "unknown";
}

ScorerKind ParseScorerKind(std::string_view name) {
  if (name == "knorm") return ScorerKind::kKNorm;
  if (name == "window_attention") return ScorerKind::kWindowAttention;
  if (name == "cumulative_attention") return ScorerKind::kCumulativeAttention;
  throw ConfigError("unknown scorer kind: " + std::string(name));
}

ScoreVector score_knorm(const Matrix& keys, bool positive) {
  std::vector<double> norms = l2_norm_rows(keys);
  if (!positive) {
    for (double& v : norms) v = -v;
  }
  return ScoreVector(std::move(norms));
}

ScoreVector score_window_attention(const Matrix& queries, const Matrix& keys,
                                   const WindowConfig& cfg) {
  CheckAttentionShapes(queries, keys);
  if (cfg.window_len == 0) throw ArgumentError("window_len must be >= 1");
  if (cfg.pool_width == 0) throw ArgumentError("pool_width must be >= 1");
  if (cfg.window_len > queries.rows()) {
    throw ArgumentError("observation window (" + std::to_string(cfg.window_len) +
                        ") longer than available queries (" +
                        std::to_string(queries.rows()) + ")");
  }
  std::vector<double> scores(keys.rows(), 0.0);
  for (std::size_t q = queries.rows() - cfg.window_len; q < queries.rows(); ++q) {
    const std::vector<double> probs = AttentionRow(queries.row(q), keys);
    for (std::size_t j = 0; j < scores.size(); ++j) scores[j] += probs[j];
  }
  const double inv = 1.0 / static_cast<double>(cfg.window_len);
  for (double& s : scores) s *= inv;
  if (cfg.pool_width > 1) scores = MaxPool1d(scores, cfg.pool_width);
  return ScoreVector(std::move(scores));
}

ScoreVector score_cumulative_attention(const Matrix& queries,
                                       const Matrix& keys) {
  CheckAttentionShapes(queries, keys);
  if (queries.rows() == 0) throw ArgumentError("cumulative attention needs queries");
  std::vector<double> scores(keys.rows(), 0.0);
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    const std::vector<double> probs = AttentionRow(queries.row(q), keys);
    for (std::size_t j = 0; j < scores.size(); ++j) scores[j] += probs[j];
  }
  return ScoreVector(std::move(scores));
}

ScoreVector ComputeBaseScores(const LayerCache& cache, const ScorerConfig& cfg) {
  switch (cfg.kind) {
    case ScorerKind::kKNorm:
      return score_knorm(cache.keys, cfg.knorm_positive);
    case ScorerKind::kWindowAttention:
    case ScorerKind::kCumulativeAttention:
      if (!cache.queries) {
        throw ConfigError(std::string(ScorerKindName(cfg.kind)) +
                          " scorer requires queries");
      }
      return cfg.kind == ScorerKind::kWindowAttention
                 ? score_window_attention(*cache.queries, cache.keys, cfg.window)
                 : score_cumulative_attention(*cache.queries, cache.keys);
  }
  throw InvariantError("unhandled scorer kind");
}

std::vector<double> MaxPool1d(std::span<const double> v, std::size_t width) {
  if (width == 0) throw ArgumentError("pool width must be >= 1");
  const std::size_t left = width / 2;
  const std::size_t right = width - 1 - left;
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t lo = i >= left ? i - left : 0;
    const std::size_t hi = std::min(v.size() - 1, i + right);
    out[i] = *std::max_element(v.begin() + lo, v.begin() + hi + 1);
  }
  return out;
}

std::vector<std::size_t> allocate_budget_uniform(std::size_t total,
                                                 std::size_t num_layers) {
  if (num_layers == 0) throw ArgumentError("num_layers must be >= 1");
  std::vector<std::size_t> out(num_layers, total / num_layers);
  for (std::size_t l = 0; l < total % num_layers; ++l) ++out[l];
  return out;
}

std::vector<std::size_t> allocate_budget_pyramid(std::size_t total,
                                                 std::size_t num_layers,
                                                 double taper) {
  if (num_layers == 0) throw ArgumentError("num_layers must be >= 1");
  if (!(taper > 1.0)) throw ArgumentError("pyramid taper must be > 1");
  std::vector<double> weights(num_layers, 1.0);
  if (num_layers > 1) {
    const double step = (1.0 - 1.0 / taper) / static_cast<double>(num_layers - 1);
    for (std::size_t l = 0; l < num_layers; ++l) {
      weights[l] = 1.0 - static_cast<double>(l) * step;
    }
  }
  return SplitByWeights(total, weights);
}

}  // namespace graphkv
