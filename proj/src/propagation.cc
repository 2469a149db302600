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

#include "graphkv/propagation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "graphkv/errors.h"

namespace graphkv {

std::string_view SignalKindName(SignalKind kind) {
  switch (kind) {
    case SignalKind::kDecay:
      return "decay";
    case SignalKind::kEnhanced:
      return "enhanced";
    case SignalKind::kEvicted:
      return "evicted";
  }
  return "unknown";
}

SignalKind ParseSignalKind(std::string_view name) {
  for (SignalKind kind : kAllSignalKinds) {
    if (SignalKindName(kind) == name) return kind;
  }
  throw ConfigError("unknown signal kind: " + std::string(name));
}

std::size_t PropagationConfig::EffectiveNeighbors(std::size_t n) const {
  if (const auto* fixed = std::get_if<FixedNeighbors>(&neighbors)) {
    return fixed->m;
  }
  const auto& adaptive = std::get<AdaptiveNeighbors>(neighbors);
  const auto scaled = static_cast<std::size_t>(
      std::ceil(adaptive.alpha * static_cast<double>(n)));
  return std::min(adaptive.max_neighbors, scaled);
}

void PropagationConfig::Validate(std::size_t n) const {
  if (rounds > kMaxRounds) {
    throw ArgumentError("rounds must be <= " + std::to_string(kMaxRounds));
  }
  if (!(strength >= 0.0 && strength <= 1.0)) {
    throw ArgumentError("strength must lie in [0, 1]");
  }
  if (const auto* adaptive = std::get_if<AdaptiveNeighbors>(&neighbors)) {
    if (!(adaptive->alpha > 0.0) || !std::isfinite(adaptive->alpha)) {
      throw ArgumentError("adaptive alpha must be positive");
    }
  }
  if (rounds > 0 && n > 0 && EffectiveNeighbors(n) == 0) {
    throw ArgumentError("neighborhood size must be >= 1");
  }
}

std::vector<std::vector<TokenIndex>> ComputeNeighborhoods(const SparseGraph& g,
                                                          std::size_t m) {
  std::vector<std::vector<TokenIndex>> out;
  out.reserve(g.num_sources());
  for (std::size_t a = 0; a < g.num_sources(); ++a) {
    out.push_back(neighborhood(g, a, m));
  }
  return out;
}

ScoreVector propagate(const SparseGraph& g, const ScoreVector& scores,
                      const PropagationConfig& cfg) {
  if (scores.size() != g.n) {
    throw ArgumentError("propagate: score length " +
                        std::to_string(scores.size()) + " != graph size " +
                        std::to_string(g.n));
  }
  cfg.Validate(g.n);
  if (cfg.rounds == 0) return scores;
  if (cfg.signal != SignalKind::kEvicted) {
    for (double s : scores.values()) {
      if (!std::isfinite(s)) {
        throw ArgumentError("decay/enhanced propagation needs finite scores");
      }
    }
  }

  const auto neighborhoods = ComputeNeighborhoods(g, cfg.EffectiveNeighbors(g.n));
  std::vector<double> out = scores.vector();
  for (std::size_t round = 0; round < cfg.rounds; ++round) {
    for (std::size_t a = 0; a < g.num_sources(); ++a) {
      for (TokenIndex j : neighborhoods[a]) {
        const double c = cfg.strength * std::clamp(g.edge(a, j), 0.0, 1.0);
        switch (cfg.signal) {
          case SignalKind::kDecay:
            out[j] *= 1.0 - c;
            break;
          case SignalKind::kEnhanced:
            out[j] *= 1.0 + c;
            break;
          case SignalKind::kEvicted:
            out[j] = -std::numeric_limits<double>::infinity();
            break;
        }
      }
    }
  }
  return ScoreVector(std::move(out));
}

ScoreVector refine_scores(const LayerCache& cache, const ScoreVector& scores,
                          const SourceSelection& sel, std::size_t budget,
                          SimilarityKind kind, const PropagationConfig& cfg) {
  cfg.Validate(cache.num_tokens());
  const SparseGraph g = build_sparse_graph(cache, scores, sel, budget, kind);
  return propagate(g, scores, cfg);
}

}  // namespace graphkv
