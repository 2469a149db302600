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

#include <cmath>

#include <gtest/gtest.h>

#include "graphkv/errors.h"
#include "test_util.h"

namespace graphkv {
namespace {

TEST(DenseFullSimilarityTest, SymmetricWithUnitDiagonal) {
  const Matrix m = testing::RandomMatrix(3, 12, 5);
  const auto sim = oracle::dense_full_similarity(m);
  ASSERT_EQ(sim.size(), 12u);
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_NEAR(sim[i][i], 1.0, 1e-12);
    for (std::size_t j = 0; j < 12; ++j) {
      EXPECT_EQ(sim[i][j], sim[j][i]);
      EXPECT_LE(std::abs(sim[i][j]), 1.0);
    }
  }
}

TEST(DenseFullSimilarityTest, ZeroRowsGiveZero) {
  const auto sim = oracle::dense_full_similarity(Matrix::FromRows({{0, 0}, {1, 0}}));
  EXPECT_EQ(sim[0][0], 0.0);
  EXPECT_EQ(sim[0][1], 0.0);
  EXPECT_EQ(sim[1][1], 1.0);
}

TEST(DenseReferenceRefineTest, ThreeTokenExample) {
  const Matrix keys = Matrix::FromRows({{1, 0}, {1, 0}, {0, 1}});
  PropagationConfig cfg;
  cfg.neighbors = FixedNeighbors{1};
  EXPECT_EQ(oracle::dense_reference_refine(LayerCache(keys, keys), {1.0, 0.8, 0.2},
                                           SourceSelection::Count(1), 0,
                                           SimilarityKind::kKeyKey, cfg),
            ScoreVector({1.0, 0.0, 0.2}));
}

TEST(DenseReferenceRefineTest, AgreesWithFastPathAcrossSettings) {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.NextU64() % 30;
    const LayerCache cache = testing::RandomCache(rng, n, 1 + rng.NextU64() % 9);
    const ScoreVector s = testing::RandomScores(rng, n);
    PropagationConfig cfg;
    cfg.rounds = rng.NextU64() % 4;
    cfg.signal = kAllSignalKinds[trial % 3];
    cfg.strength = rng.Uniform();
    if (trial % 4 == 0) {
      cfg.neighbors = AdaptiveNeighbors{4, 0.2};
    } else {
      cfg.neighbors = FixedNeighbors{1 + rng.NextU64() % 6};
    }
    const SourceSelection sel = trial % 2 ? SourceSelection::Count(1 + rng.NextU64() % 5)
                                          : SourceSelection::Ratio(0.5);
    const SimilarityKind kind = kAllSimilarityKinds[trial % 5];
    const ScoreVector fast = refine_scores(cache, s, sel, n, kind, cfg);
    const ScoreVector slow = oracle::dense_reference_refine(cache, s, sel, n, kind, cfg);
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isinf(slow[j])) {
        EXPECT_EQ(fast[j], slow[j]);
      } else {
        EXPECT_NEAR(fast[j], slow[j], 1e-9);
      }
    }
  }
}

TEST(DenseReferenceRefineTest, Errors) {
  const Matrix keys = Matrix::FromRows({{1, 0}, {0, 1}});
  const LayerCache cache(keys, keys);
  EXPECT_THROW(oracle::dense_reference_refine(cache, {1.0}, SourceSelection::Count(1), 0,
                                              SimilarityKind::kKeyKey, {}),
               ArgumentError);
  EXPECT_THROW(oracle::dense_reference_refine(cache, {1.0, 2.0},
                                              SourceSelection::Count(1), 0,
                                              SimilarityKind::kQueryKey, {}),
               ConfigError);
}

}  // namespace
}  // namespace graphkv
