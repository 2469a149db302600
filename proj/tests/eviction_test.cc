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
#include <limits>

#include <gtest/gtest.h>

#include "graphkv/errors.h"
#include "test_util.h"

namespace graphkv {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

LayerCache ThreeTokenCache() {
  const Matrix keys = Matrix::FromRows({{1, 0}, {1, 0}, {0, 1}});
  return LayerCache(keys, keys);
}

GraphRefinement SingleSourceDecay() {
  GraphRefinement r;
  r.sources = SourceSelection::Count(1);
  r.propagation.neighbors = FixedNeighbors{1};
  return r;
}

EvictionPolicy WithScores(ScoreVector s) {
  EvictionPolicy p;
  p.precomputed_scores = std::move(s);
  return p;
}

TEST(SelectTopkTest, WorkedExamples) {
  EXPECT_EQ(select_topk({0.1, 0.9, 0.5, 0.7}, 2), (std::vector<TokenIndex>{1, 3}));
  EXPECT_EQ(select_topk({1, 1, 1}, 2), (std::vector<TokenIndex>{0, 1}));
  EXPECT_EQ(select_topk({kNegInf, 0.0, kNegInf}, 2), (std::vector<TokenIndex>{0, 1}));
  EXPECT_TRUE(select_topk({1, 2}, 0).empty());
  EXPECT_THROW(select_topk({1, 2}, 3), ArgumentError);
}

TEST(GatherTest, RowsInOrder) {
  const Matrix keys = Matrix::FromRows({{1, 2}, {3, 4}, {5, 6}});
  const Matrix values = Matrix::FromRows({{7, 0}, {8, 0}, {9, 0}});
  const auto [k, v] = gather(LayerCache(keys, values), {0, 2});
  EXPECT_EQ(k, Matrix::FromRows({{1, 2}, {5, 6}}));
  EXPECT_EQ(v, Matrix::FromRows({{7, 0}, {9, 0}}));
  const auto [k0, v0] = gather(LayerCache(keys, values), {});
  EXPECT_EQ(k0.rows(), 0u);
  EXPECT_EQ(k0.cols(), 2u);
  EXPECT_THROW(gather(LayerCache(keys, values), {3}), ArgumentError);
  EXPECT_THROW(gather(LayerCache(keys, values), {2, 1}), ArgumentError);
  EXPECT_THROW(gather(LayerCache(keys, values), {1, 1}), ArgumentError);
}

TEST(EvictTest, ThreeTokenRefinementChangesSelection) {
  EvictionPolicy base = WithScores({1.0, 0.8, 0.2});
  EXPECT_EQ(evict(ThreeTokenCache(), 2, base).kept_indices,
            (std::vector<TokenIndex>{0, 1}));

  EvictionPolicy graph = base;
  graph.refinement = SingleSourceDecay();
  const EvictionResult r = evict(ThreeTokenCache(), 2, graph);
  EXPECT_EQ(r.kept_indices, (std::vector<TokenIndex>{0, 2}));
  EXPECT_EQ(r.refined_scores, ScoreVector({1.0, 0.0, 0.2}));
  EXPECT_EQ(r.keys_sub, Matrix::FromRows({{1, 0}, {0, 1}}));
}

TEST(EvictTest, FullBudgetKeepsEverything) {
  Rng rng(4);
  const LayerCache cache = testing::RandomCache(rng, 4, 3);
  EvictionPolicy p = WithScores(testing::RandomScores(rng, 4));
  p.refinement = GraphRefinement{};
  const EvictionResult r = evict(cache, 4, p);
  EXPECT_EQ(r.kept_indices, (std::vector<TokenIndex>{0, 1, 2, 3}));
  EXPECT_EQ(r.keys_sub, cache.keys);
  EXPECT_EQ(r.values_sub, cache.values);
}

TEST(EvictTest, ZeroRoundsMatchesBaseline) {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + rng.NextU64() % 40;
    const LayerCache cache = testing::RandomCache(rng, n, 4);
    const std::size_t budget = 1 + rng.NextU64() % n;
    EvictionPolicy base = WithScores(testing::RandomScores(rng, n));
    EvictionPolicy graph = base;
    graph.refinement = GraphRefinement{};
    graph.refinement->propagation.rounds = 0;
    const EvictionResult a = evict(cache, budget, base);
    const EvictionResult b = evict(cache, budget, graph);
    EXPECT_EQ(a.kept_indices, b.kept_indices);
    EXPECT_EQ(a.refined_scores, b.refined_scores);
  }
}

TEST(EvictTest, ProtectedWindowAlwaysKept) {
  Rng rng(10);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + rng.NextU64() % 50;
    const std::size_t budget = 1 + rng.NextU64() % n;
    const std::size_t window = rng.NextU64() % (budget + 1);
    const LayerCache cache = testing::RandomCache(rng, n, 5);
    EvictionPolicy p;
    p.scorer.kind = ScorerKind::kCumulativeAttention;
    p.protected_window = window;
    if (trial % 2 == 0) {
      p.refinement = GraphRefinement{};
      p.refinement->propagation.signal = kAllSignalKinds[trial % 3];
      p.refinement->similarity = kAllSimilarityKinds[trial % 5];
    }
    const EvictionResult r = evict(cache, budget, p);
    ASSERT_EQ(r.kept_indices.size(), budget);
    EXPECT_TRUE(std::is_sorted(r.kept_indices.begin(), r.kept_indices.end()));
    for (std::size_t t = n - window; t < n; ++t) {
      EXPECT_TRUE(std::binary_search(r.kept_indices.begin(), r.kept_indices.end(), t));
    }
    EXPECT_EQ(r.keys_sub.rows(), budget);
    EXPECT_EQ(r.values_sub.rows(), budget);
    EXPECT_EQ(r.refined_scores.size(), n);
  }
}

TEST(EvictTest, WindowTokensKeepBaseScores) {
  // Token 3 sits in the window and is a perfect duplicate of source 0, yet its
  // score is untouched.
  const Matrix keys = Matrix::FromRows({{1, 0}, {0, 1}, {1, 1}, {1, 0}});
  EvictionPolicy p = WithScores({1.0, 0.5, 0.4, 0.3});
  p.refinement = SingleSourceDecay();
  p.protected_window = 1;
  const EvictionResult r = evict(LayerCache(keys, keys), 3, p);
  EXPECT_EQ(r.refined_scores[3], 0.3);
  EXPECT_EQ(r.kept_indices, (std::vector<TokenIndex>{0, 1, 3}));
}

TEST(EvictTest, BaselineInvariantUnderAffineScoreMaps) {
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 4 + rng.NextU64() % 40;
    const std::size_t budget = 1 + rng.NextU64() % n;
    const LayerCache cache = testing::RandomCache(rng, n, 3);
    const ScoreVector s = testing::RandomScores(rng, n);
    std::vector<double> mapped(s.values().begin(), s.values().end());
    for (double& x : mapped) x = 4.0 * x + 3.0;
    EXPECT_EQ(evict(cache, budget, WithScores(s)).kept_indices,
              evict(cache, budget, WithScores(ScoreVector(mapped))).kept_indices);

    // Decay is multiplicative, so positive scaling alone preserves the result.
    EvictionPolicy a = WithScores(s);
    a.refinement = GraphRefinement{};
    std::vector<double> scaled(s.values().begin(), s.values().end());
    for (double& x : scaled) x *= 8.0;
    EvictionPolicy b = WithScores(ScoreVector(scaled));
    b.refinement = a.refinement;
    EXPECT_EQ(evict(cache, budget, a).kept_indices, evict(cache, budget, b).kept_indices);
  }
}

TEST(EvictTest, EvictedNeighborsDroppedWhenFiniteTokensRemain) {
  Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 10 + rng.NextU64() % 40;
    const LayerCache cache = testing::RandomCache(rng, n, 4);
    EvictionPolicy p = WithScores(testing::RandomScores(rng, n));
    p.refinement = GraphRefinement{};
    p.refinement->sources = SourceSelection::Count(2);
    p.refinement->propagation.signal = SignalKind::kEvicted;
    p.refinement->propagation.neighbors = FixedNeighbors{2};
    const std::size_t budget = n - 4;  // at least n - 4 finite scores remain
    const EvictionResult r = evict(cache, budget, p);
    for (TokenIndex t : r.kept_indices) EXPECT_NE(r.refined_scores[t], kNegInf);
  }
}

TEST(EvictTest, EvictedFillsFromNegativeInfinityLowestIndexFirst) {
  // One finite score besides the source; budget 3 forces one -inf token in.
  const Matrix keys = Matrix::FromRows({{1, 0}, {1, 0.1f}, {1, 0.2f}, {0, 1}});
  EvictionPolicy p = WithScores({1.0, 0.5, 0.5, 0.1});
  p.refinement = SingleSourceDecay();
  p.refinement->propagation.signal = SignalKind::kEvicted;
  p.refinement->propagation.neighbors = FixedNeighbors{2};
  const EvictionResult r = evict(LayerCache(keys, keys), 3, p);
  EXPECT_EQ(r.refined_scores[1], kNegInf);
  EXPECT_EQ(r.refined_scores[2], kNegInf);
  EXPECT_EQ(r.kept_indices, (std::vector<TokenIndex>{0, 1, 3}));
}

TEST(EvictTest, ArgumentErrors) {
  EvictionPolicy p = WithScores({1, 2, 3});
  EXPECT_THROW(evict(ThreeTokenCache(), 4, p), ArgumentError);
  p.protected_window = 3;
  EXPECT_THROW(evict(ThreeTokenCache(), 2, p), ArgumentError);
  EXPECT_THROW(evict(ThreeTokenCache(), 2, WithScores({1, 2})), ArgumentError);

  EvictionPolicy attention;
  attention.scorer.kind = ScorerKind::kWindowAttention;
  EXPECT_THROW(evict(ThreeTokenCache(), 2, attention), ConfigError);
}

TEST(EvictTest, KNormScorerRuns) {
  EvictionPolicy p;
  p.scorer.kind = ScorerKind::kKNorm;
  const Matrix keys = Matrix::FromRows({{3, 4}, {1, 0}, {0, 2}});
  const EvictionResult r = evict(LayerCache(keys, keys), 2, p);
  // Smallest key norms win.
  EXPECT_EQ(r.kept_indices, (std::vector<TokenIndex>{1, 2}));
}

}  // namespace
}  // namespace graphkv
