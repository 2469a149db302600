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

#ifndef GRAPHKV_GRAPH_H_
#define GRAPHKV_GRAPH_H_

// Sparse token-similarity graph. Only the top-k tokens by importance become
// source nodes; each source gets one edge to every other token, so building
// the graph costs k*(n-1) similarity evaluations instead of n^2.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "graphkv/kv_model.h"

namespace graphkv {

// Which vector pair an edge compares: (source-side, target-side).
enum class SimilarityKind {
  kKeyKey,         // key_i   vs key_j
  kQueryKey,       // query_i vs key_j
  kQueryQuery,     // query_i vs query_j
  kKeyValue,       // key_i   vs value_j
  kValueValue,     // value_i vs value_j
};

inline constexpr SimilarityKind kAllSimilarityKinds[] = {
    SimilarityKind::kKeyKey, SimilarityKind::kQueryKey,
    SimilarityKind::kQueryQuery, SimilarityKind::kKeyValue,
    SimilarityKind::kValueValue};

std::string_view SimilarityKindName(SimilarityKind kind);
// Accepts "key_key", "query_key", "query_query", "key_value", "value_value".
SimilarityKind ParseSimilarityKind(std::string_view name);

// Number of source nodes, either as a fraction of the layer budget or as an
// absolute count.
class SourceSelection {
 public:
  static SourceSelection Ratio(double ratio);
  static SourceSelection Count(std::size_t k);

  std::optional<double> ratio() const { return ratio_; }
  std::optional<std::size_t> count() const { return count_; }

  // min(n, count or floor(ratio * budget)), at least 1.
  std::size_t Resolve(std::size_t n, std::size_t budget) const;

 private:
  std::optional<double> ratio_;
  std::optional<std::size_t> count_;
};

struct SparseGraph {
  std::size_t n = 0;
  // Strictly ascending.
  std::vector<TokenIndex> source_ids;
  // Row-major source_ids.size() x n. edges[a*n + j] is the raw cosine
  // between source a and token j; the self entry is 0.
  std::vector<double> edges;
  // Similarity evaluations performed while building; always k*(n-1).
  std::uint64_t similarity_evaluations = 0;

  std::size_t num_sources() const { return source_ids.size(); }
  std::span<const double> edge_row(std::size_t a) const {
    return {edges.data() + a * n, n};
  }
  double edge(std::size_t a, std::size_t j) const { return edges[a * n + j]; }
};

// Indices of the k highest scores, ties to the lower index, returned sorted
// ascending. Shared by source selection and final token selection.
std::vector<TokenIndex> TopKIndices(std::span<const double> scores,
                                    std::size_t k);

std::vector<TokenIndex> select_source_nodes(const ScoreVector& scores,
                                            const SourceSelection& sel,
                                            std::size_t budget);

// Throws ConfigError when `kind` needs queries the cache does not carry
// (one query row per token).
SparseGraph build_sparse_graph(const LayerCache& cache,
                               const ScoreVector& scores,
                               const SourceSelection& sel, std::size_t budget,
                               SimilarityKind kind);

// Graph over explicitly chosen sources.
SparseGraph BuildGraphForSources(const LayerCache& cache,
                                 std::vector<TokenIndex> source_ids,
                                 SimilarityKind kind);

// The min(m, n-1) tokens with the largest edges from source position `a`,
// excluding the source itself. Ties go to the lower token index; the result
// is sorted ascending.
std::vector<TokenIndex> neighborhood(const SparseGraph& g, std::size_t a,
                                     std::size_t m);

}  // namespace graphkv

#endif  // GRAPHKV_GRAPH_H_
