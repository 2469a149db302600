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

#include "graphkv/eviction.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

#include "graphkv/errors.h"

namespace graphkv {
namespace {

Matrix GatherRows(const Matrix& m, const std::vector<TokenIndex>& indices) {
  std::vector<float> data;
  data.reserve(indices.size() * m.cols());
  for (TokenIndex i : indices) {
    const auto row = m.row(i);
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(indices.size(), m.cols(), std::move(data));
}

// The cache restricted to its first `prefix` tokens. Queries survive only when
// they are per-token, so query-based similarities stay aligned.
LayerCache PrefixCache(const LayerCache& cache, std::size_t prefix) {
  std::optional<Matrix> queries;
  if (cache.has_aligned_queries()) queries = cache.queries->SliceRows(0, prefix);
  return LayerCache(cache.keys.SliceRows(0, prefix),
                    cache.values.SliceRows(0, prefix), std::move(queries),
                    cache.layer_index);
}

void CheckResult(const EvictionResult& r, std::size_t budget, std::size_t n,
                 std::size_t window) {
  if (r.kept_indices.size() != budget) {
    throw InvariantError("kept count differs from budget");
  }
  for (std::size_t i = 1; i < r.kept_indices.size(); ++i) {
    if (r.kept_indices[i] <= r.kept_indices[i - 1]) {
      throw InvariantError("kept indices not strictly ascending");
    }
  }
  for (std::size_t t = n - window; t < n; ++t) {
    if (!std::binary_search(r.kept_indices.begin(), r.kept_indices.end(), t)) {
      throw InvariantError("protected window token evicted");
    }
  }
}

}  // namespace

std::vector<TokenIndex> select_topk(const ScoreVector& scores, std::size_t k) {
  if (k > scores.size()) {
    throw ArgumentError("select_topk: k=" + std::to_string(k) + " exceeds n=" +
                        std::to_string(scores.size()));
  }
  return TopKIndices(scores.values(), k);
}

std::pair<Matrix, Matrix> gather(const LayerCache& cache,
                                 const std::vector<TokenIndex>& indices) {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= cache.num_tokens()) {
      throw ArgumentError("gather: index " + std::to_string(indices[i]) +
                          " out of range");
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw ArgumentError("gather: indices must be strictly ascending");
    }
  }
  return {GatherRows(cache.keys, indices), GatherRows(cache.values, indices)};
}

EvictionResult evict(const LayerCache& cache, std::size_t budget,
                     const EvictionPolicy& policy) {
  const std::size_t n = cache.num_tokens();
  const std::size_t window = policy.protected_window;
  if (budget > n) {
    throw ArgumentError("budget " + std::to_string(budget) +
                        " exceeds token count " + std::to_string(n));
  }
  if (window > budget) {
    throw ArgumentError("protected window larger than budget");
  }

  ScoreVector base = policy.precomputed_scores
                         ? *policy.precomputed_scores
                         : ComputeBaseScores(cache, policy.scorer);
  if (base.size() != n) {
    throw ArgumentError("score count does not match token count");
  }

  const std::size_t prefix = n - window;
  std::vector<double> prefix_scores(base.values().begin(),
                                    base.values().begin() + prefix);
  ScoreVector candidates(std::move(prefix_scores));
  if (policy.refinement && prefix > 0) {
    const GraphRefinement& r = *policy.refinement;
    candidates = refine_scores(PrefixCache(cache, prefix), candidates,
                               r.sources, budget, r.similarity, r.propagation);
  }

  EvictionResult result;
  result.kept_indices = select_topk(candidates, budget - window);
  for (TokenIndex t = prefix; t < n; ++t) result.kept_indices.push_back(t);

  std::vector<double> refined = candidates.vector();
  refined.insert(refined.end(), base.values().begin() + prefix,
                 base.values().end());
  result.refined_scores = ScoreVector(std::move(refined));
  std::tie(result.keys_sub, result.values_sub) =
      gather(cache, result.kept_indices);
  CheckResult(result, budget, n, window);
  return result;
}

}  // namespace graphkv
