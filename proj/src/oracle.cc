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

#include "graphkv/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "graphkv/errors.h"

namespace graphkv::oracle {
namespace {

double NaiveCosine(std::span<const float> u, std::span<const float> v) {
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += static_cast<double>(u[i]) * v[i];
    uu += static_cast<double>(u[i]) * u[i];
    vv += static_cast<double>(v[i]) * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return std::clamp(uv / std::sqrt(uu * vv), -1.0, 1.0);
}

// Repeatedly takes the best remaining candidate: highest value, lowest index
// on ties. Returns the picks sorted ascending.
std::vector<TokenIndex> PickBest(const std::vector<double>& values,
                                 std::size_t count, TokenIndex excluded) {
  std::vector<bool> taken(values.size(), false);
  if (excluded < values.size()) taken[excluded] = true;
  std::vector<TokenIndex> picks;
  for (std::size_t round = 0; round < count; ++round) {
    std::size_t best = values.size();
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (taken[i]) continue;
      if (best == values.size() || values[i] > values[best]) best = i;
    }
    if (best == values.size()) break;
    taken[best] = true;
    picks.push_back(best);
  }
  std::sort(picks.begin(), picks.end());
  return picks;
}

}  // namespace

std::vector<std::vector<double>> dense_full_similarity(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out[i][j] = NaiveCosine(m.row(i), m.row(j));
    }
  }
  return out;
}

ScoreVector dense_reference_refine(const LayerCache& cache,
                                   const ScoreVector& scores,
                                   const SourceSelection& sel,
                                   std::size_t budget, SimilarityKind kind,
                                   const PropagationConfig& cfg) {
  const std::size_t n = cache.num_tokens();
  if (scores.size() != n) throw ArgumentError("score length mismatch");
  if (n == 0) throw ArgumentError("empty scores");
  cfg.Validate(n);

  const Matrix* source_side = nullptr;
  const Matrix* target_side = nullptr;
  const bool have_queries = cache.queries && cache.queries->rows() >= n;
  switch (kind) {
    case SimilarityKind::kKeyKey:
      source_side = &cache.keys;
      target_side = &cache.keys;
      break;
    case SimilarityKind::kQueryKey:
      source_side = have_queries ? &*cache.queries : nullptr;
      target_side = &cache.keys;
      break;
    case SimilarityKind::kQueryQuery:
      source_side = have_queries ? &*cache.queries : nullptr;
      target_side = source_side;
      break;
    case SimilarityKind::kKeyValue:
      source_side = &cache.keys;
      target_side = &cache.values;
      break;
    case SimilarityKind::kValueValue:
      source_side = &cache.values;
      target_side = &cache.values;
      break;
  }
  if (source_side == nullptr) {
    throw ConfigError("query-based similarity without per-token queries");
  }

  // Full similarity matrix, self entries zero.
  std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) sim[i][j] = NaiveCosine(source_side->row(i), target_side->row(j));
    }
  }

  std::size_t k = 0;
  if (sel.count()) {
    k = *sel.count();
  } else {
    k = static_cast<std::size_t>(
        std::floor(*sel.ratio() * static_cast<double>(budget) + 1e-9));
  }
  k = std::max<std::size_t>(1, std::min(k, n));
  const std::vector<TokenIndex> sources =
      PickBest(scores.vector(), k, std::numeric_limits<TokenIndex>::max());

  std::size_t m = 0;
  if (const auto* fixed = std::get_if<FixedNeighbors>(&cfg.neighbors)) {
    m = fixed->m;
  } else {
    const auto& adaptive = std::get<AdaptiveNeighbors>(cfg.neighbors);
    m = std::min<std::size_t>(
        adaptive.max_neighbors,
        static_cast<std::size_t>(std::ceil(adaptive.alpha * static_cast<double>(n))));
  }

  std::vector<double> s = scores.vector();
  if (cfg.rounds == 0) return ScoreVector(s);
  for (std::size_t round = 0; round < cfg.rounds; ++round) {
    for (TokenIndex src : sources) {
      for (TokenIndex j : PickBest(sim[src], m, src)) {
        const double c = cfg.strength * std::min(1.0, std::max(0.0, sim[src][j]));
        if (cfg.signal == SignalKind::kDecay) {
          s[j] = s[j] * (1.0 - c);
        } else if (cfg.signal == SignalKind::kEnhanced) {
          s[j] = s[j] * (1.0 + c);
        } else {
          s[j] = -std::numeric_limits<double>::infinity();
        }
      }
    }
  }
  return ScoreVector(s);
}

}  // namespace graphkv::oracle
