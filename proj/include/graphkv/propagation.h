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

#ifndef GRAPHKV_PROPAGATION_H_
#define GRAPHKV_PROPAGATION_H_

// Signal propagation over a SparseGraph. Each round, every source pushes a
// signal to its top-m neighbors:
//
//   decay     s_j <- s_j * (1 - c)
//   enhanced  s_j <- s_j * (1 + c)
//   evicted   s_j <- -inf
//
// where c = strength * clamp(edge, 0, 1). Updates are applied in ascending
// (source, neighbor) order, so a token reached by several sources collects the
// product of their factors. Neighborhoods depend only on the graph and are
// computed once.

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "graphkv/graph.h"
#include "graphkv/kv_model.h"

namespace graphkv {

enum class SignalKind { kDecay, kEnhanced, kEvicted };

inline constexpr SignalKind kAllSignalKinds[] = {
    SignalKind::kDecay, SignalKind::kEnhanced, SignalKind::kEvicted};

std::string_view SignalKindName(SignalKind kind);
// Accepts "decay", "enhanced", "evicted".
SignalKind ParseSignalKind(std::string_view name);

struct FixedNeighbors {
  std::size_t m = 5;
};

// Effective m = min(max_neighbors, ceil(alpha * n)).
struct AdaptiveNeighbors {
  std::size_t max_neighbors = 64;
  double alpha = 0.001;
};

using NeighborPolicy = std::variant<FixedNeighbors, AdaptiveNeighbors>;

inline constexpr std::size_t kMaxRounds = 16;

struct PropagationConfig {
  std::size_t rounds = 1;
  NeighborPolicy neighbors = FixedNeighbors{};
  SignalKind signal = SignalKind::kDecay;
  // Global multiplier on the clamped edge weight, in [0, 1].
  double strength = 1.0;

  // Neighborhood size for a graph over n tokens.
  std::size_t EffectiveNeighbors(std::size_t n) const;
  // Throws ArgumentError on out-of-range settings.
  void Validate(std::size_t n) const;
};

// Top-m neighborhood of every source, in source order.
std::vector<std::vector<TokenIndex>> ComputeNeighborhoods(const SparseGraph& g,
                                                          std::size_t m);

ScoreVector propagate(const SparseGraph& g, const ScoreVector& scores,
                      const PropagationConfig& cfg);

// select_source_nodes -> build_sparse_graph -> propagate.
ScoreVector refine_scores(const LayerCache& cache, const ScoreVector& scores,
                          const SourceSelection& sel, std::size_t budget,
                          SimilarityKind kind, const PropagationConfig& cfg);

}  // namespace graphkv

#endif  // GRAPHKV_PROPAGATION_H_
