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

#include "graphkv/graph.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "graphkv/errors.h"
#include "graphkv/parallel.h"
#include "graphkv/simd.h"

namespace graphkv {
namespace {

struct VectorSides {
  const Matrix* source;
  const Matrix* target;
};

VectorSides SidesFor(const LayerCache& cache, SimilarityKind kind) {
  const bool needs_queries = kind == SimilarityKind::kQueryKey ||
                             kind == SimilarityKind::kQueryQuery;
  if (needs_queries && !cache.has_aligned_queries()) {
    throw ConfigError(
        std::string(SimilarityKindName(kind)) +
        " similarity needs one query row per token (have " +
        std::to_string(cache.queries ? cache.queries->rows() : 0) + ", need " +
        std::to_string(cache.num_tokens()) + ")");
  }
  switch (kind) {
    case SimilarityKind::kKeyKey:
      return {&cache.keys, &cache.keys};
    case SimilarityKind::kQueryKey:
      return {&*cache.queries, &cache.keys};
    case SimilarityKind::kQueryQuery:
      return {&*cache.queries, &*cache.queries};
    case SimilarityKind::kKeyValue:
      return {&cache.keys, &cache.values};
    case SimilarityKind::kValueValue:
      return {&cache.values, &cache.values};
  }
  throw InvariantError("unhandled similarity kind");
}

// Strict "ranks before" order: larger value first, then lower index.
struct RanksBefore {
  std::span<const double> values;
  bool operator()(TokenIndex a, TokenIndex b) const {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  }
};

}  // namespace

std::string_view SimilarityKindName(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::kKeyKey:
      return "key_key";
    case SimilarityKind::kQueryKey:
      return "query_key";
    case SimilarityKind::kQueryQuery:
      return "query_query";
    case SimilarityKind::kKeyValue:
      return "key_value";
    case SimilarityKind::kValueValue:
      return "value_value";
  }
  return "unknown";
}

SimilarityKind ParseSimilarityKind(std::string_view name) {
  for (SimilarityKind kind : kAllSimilarityKinds) {
    if (SimilarityKindName(kind) == name) return kind;
  }
  throw ConfigError("unknown similarity kind: " + std::string(name));
}

SourceSelection SourceSelection::Ratio(double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw ArgumentError("source ratio must lie in (0, 1]");
  }
  SourceSelection sel;
  sel.ratio_ = ratio;
  return sel;
}

SourceSelection SourceSelection::Count(std::size_t k) {
  if (k == 0) throw ArgumentError("source count must be >= 1");
  SourceSelection sel;
  sel.count_ = k;
  return sel;
}

std::size_t SourceSelection::Resolve(std::size_t n, std::size_t budget) const {
  std::size_t k = 0;
  if (count_) {
    k = *count_;
  } else {
    // Slack so 0.29 * 100 = 28.999999999999996 floors to 29, not 28.
    k = static_cast<std::size_t>(
        std::floor(ratio_.value_or(0.0) * static_cast<double>(budget) + 1e-9));
  }
  return std::max<std::size_t>(1, std::min(n, k));
}

std::vector<TokenIndex> TopKIndices(std::span<const double> scores,
                                    std::size_t k) {
  if (k > scores.size()) throw ArgumentError("top-k larger than input");
  std::vector<TokenIndex> order(scores.size());
  std::iota(order.begin(), order.end(), TokenIndex{0});
  const RanksBefore before{scores};
  if (k < order.size()) {
    std::nth_element(order.begin(), order.begin() + k, order.end(), before);
  }
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<TokenIndex> select_source_nodes(const ScoreVector& scores,
                                            const SourceSelection& sel,
                                            std::size_t budget) {
  if (scores.empty()) throw ArgumentError("select_source_nodes: empty scores");
  return TopKIndices(scores.values(), sel.Resolve(scores.size(), budget));
}

SparseGraph BuildGraphForSources(const LayerCache& cache,
                                 std::vector<TokenIndex> source_ids,
                                 SimilarityKind kind) {
  const VectorSides sides = SidesFor(cache, kind);
  const std::size_t n = cache.num_tokens();
  for (std::size_t a = 0; a < source_ids.size(); ++a) {
    if (source_ids[a] >= n || (a > 0 && source_ids[a] <= source_ids[a - 1])) {
      throw ArgumentError("source ids must be strictly ascending and < n");
    }
  }

  SparseGraph g;
  g.n = n;
  g.source_ids = std::move(source_ids);
  const std::size_t k = g.source_ids.size();
  g.edges.assign(k * n, 0.0);

  const simd::Kernels& kernels = simd::Active();
  const std::size_t dim = cache.dim();
  std::vector<double> target_norms(n);
  ParallelFor(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      target_norms[j] =
          std::sqrt(kernels.squared_norm(sides.target->row(j).data(), dim));
    }
  });

  std::vector<std::uint64_t> evaluations(k, 0);
  ParallelFor(k, [&](std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      const TokenIndex src = g.source_ids[a];
      const float* src_vec = sides.source->row(src).data();
      const double src_norm = std::sqrt(kernels.squared_norm(src_vec, dim));
      double* out = g.edges.data() + a * n;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == src) continue;
        ++evaluations[a];
        const double denom = src_norm * target_norms[j];
        if (denom == 0.0) continue;
        const double c =
            kernels.dot(src_vec, sides.target->row(j).data(), dim) / denom;
        out[j] = std::clamp(c, -1.0, 1.0);
      }
    }
  });
  g.similarity_evaluations =
      std::accumulate(evaluations.begin(), evaluations.end(), std::uint64_t{0});
  return g;
}

SparseGraph build_sparse_graph(const LayerCache& cache,
                               const ScoreVector& scores,
                               const SourceSelection& sel, std::size_t budget,
                               SimilarityKind kind) {
  if (scores.size() != cache.num_tokens()) {
    throw ArgumentError("score count does not match token count");
  }
  // Fail on missing queries before doing any work.
  SidesFor(cache, kind);
  return BuildGraphForSources(cache, select_source_nodes(scores, sel, budget),
                              kind);
}

std::vector<TokenIndex> neighborhood(const SparseGraph& g, std::size_t a,
                                     std::size_t m) {
  if (a >= g.num_sources()) throw ArgumentError("source position out of range");
  const TokenIndex self = g.source_ids[a];
  const std::span<const double> row = g.edge_row(a);
  std::vector<TokenIndex> candidates;
  candidates.reserve(g.n - 1);
  for (TokenIndex j = 0; j < g.n; ++j) {
    if (j != self) candidates.push_back(j);
  }
  const std::size_t take = std::min(m, candidates.size());
  const RanksBefore before{row};
  if (take < candidates.size()) {
    std::nth_element(candidates.begin(), candidates.begin() + take,
                     candidates.end(), before);
  }
  candidates.resize(take);
  std::sort(candidates.begin(), candidates.end());
  return candidates;
}

}  // namespace graphkv
