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

#include "graphkv/synthetic.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "graphkv/analysis.h"
#include "graphkv/errors.h"
#include "graphkv/eviction.h"
#include "test_util.h"

namespace graphkv {
namespace {

TEST(RngTest, EngineIsStandardMt19937_64) {
  Rng rng(5489);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.NextU64();
  EXPECT_EQ(x, 9981545732273789042ull);
}

// The vectors listed in docs/FORMATS.md.
TEST(RngTest, DocumentedVectorsSeed42) {
  Rng raw(42);
  EXPECT_EQ(raw.NextU64(), 13930160852258120406ull);
  EXPECT_EQ(raw.NextU64(), 11788048577503494824ull);
  EXPECT_EQ(raw.NextU64(), 13874630024467741450ull);
  Rng uni(42);
  EXPECT_EQ(uni.Uniform(), 0.75515553295453897);
  EXPECT_EQ(uni.Uniform(), 0.63903139385469743);
  EXPECT_EQ(uni.Uniform(), 0.7521452007480266);
  Rng gau(42);
  EXPECT_EQ(gau.Gaussian(), 1.2938204232729367);
  EXPECT_EQ(gau.Gaussian(), 0.70498826642085988);
  EXPECT_EQ(gau.Gaussian(), 0.39797739618378869);
  EXPECT_EQ(gau.Gaussian(), -0.57409480672026136);
  const ClusterWorkload w = gen_clustered_keys(ClusterSpec{});
  EXPECT_EQ(w.cache.keys.at(0, 0), 0.0808048099f);
  EXPECT_EQ(w.cache.keys.at(0, 1), 0.048253756f);
}

TEST(RngTest, UniformUsesTop53Bits) {
  Rng rng(42);
  std::mt19937_64 ref(42);
  for (int i = 0; i < 1000; ++i) {
    const double want = static_cast<double>(ref() >> 11) / 9007199254740992.0;
    const double got = rng.Uniform();
    EXPECT_EQ(got, want);
    EXPECT_GE(got, 0.0);
    EXPECT_LT(got, 1.0);
  }
}

TEST(RngTest, GaussianIsPolarPairOrder) {
  Rng rng(7);
  std::mt19937_64 ref(7);
  auto uniform = [&] { return static_cast<double>(ref() >> 11) / 9007199254740992.0; };
  for (int pair = 0; pair < 500; ++pair) {
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    EXPECT_EQ(rng.Gaussian(), u * f);
    EXPECT_EQ(rng.Gaussian(), v * f);
  }
}

TEST(RngTest, GaussianMoments) {
  Rng rng(1);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = rng.Gaussian();
    sum += g;
    sq += g * g;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(GenClusteredKeysTest, ShapesAndLabels) {
  ClusterSpec spec;
  spec.clusters = 3;
  spec.per_cluster = 4;
  spec.dim = 6;
  spec.query_count = 5;
  const ClusterWorkload w = gen_clustered_keys(spec);
  EXPECT_EQ(w.cache.keys.rows(), 12u);
  EXPECT_EQ(w.cache.keys.cols(), 6u);
  EXPECT_EQ(w.cache.values.rows(), 12u);
  ASSERT_TRUE(w.cache.queries.has_value());
  EXPECT_EQ(w.cache.queries->rows(), 5u);
  EXPECT_EQ(w.labels, (std::vector<std::size_t>{0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2}));
  for (std::size_t t = 0; t < 12; ++t) {
    double sq = 0;
    for (float x : w.cache.keys.row(t)) sq += double{x} * x;
    EXPECT_NEAR(sq, 1.0, 1e-6);
  }
}

TEST(GenClusteredKeysTest, ZeroSigmaGivesExactDuplicates) {
  ClusterSpec spec;
  spec.sigma = 0.0;
  spec.clusters = 2;
  spec.per_cluster = 5;
  const ClusterWorkload w = gen_clustered_keys(spec);
  for (std::size_t t = 1; t < 5; ++t) {
    EXPECT_NEAR(cosine_similarity(w.cache.keys.row(0), w.cache.keys.row(t)), 1.0, 1e-7);
    EXPECT_NEAR(cosine_similarity(w.cache.keys.row(5), w.cache.keys.row(5 + t)), 1.0,
                1e-7);
  }
}

TEST(GenClusteredKeysTest, DeterministicPerSeed) {
  ClusterSpec spec;
  const ClusterWorkload a = gen_clustered_keys(spec);
  const ClusterWorkload b = gen_clustered_keys(spec);
  EXPECT_EQ(a.cache.keys, b.cache.keys);
  EXPECT_EQ(a.cache.values, b.cache.values);
  EXPECT_EQ(*a.cache.queries, *b.cache.queries);
  spec.seed = 43;
  EXPECT_FALSE(gen_clustered_keys(spec).cache.keys == a.cache.keys);
}

TEST(GenClusteredKeysTest, IntraClusterSimilarityExceedsInter) {
  const ClusterWorkload w = gen_clustered_keys(ClusterSpec{});
  double intra = 0, inter = 0;
  std::size_t n_intra = 0, n_inter = 0;
  const std::size_t n = w.labels.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double c = cosine_similarity(w.cache.keys.row(a), w.cache.keys.row(b));
      if (w.labels[a] == w.labels[b]) {
        intra += c;
        ++n_intra;
      } else {
        inter += c;
        ++n_inter;
      }
    }
  }
  EXPECT_GT(intra / n_intra, 0.8);
  EXPECT_GT(intra / n_intra, inter / n_inter + 0.5);
}

TEST(GenClusteredKeysTest, FocusRoutesQueries) {
  ClusterSpec spec;
  spec.query_focus = {0, 0, 1, 0, 0};
  spec.sigma = 0.0;
  const ClusterWorkload w = gen_clustered_keys(spec);
  // Every query is the normalized center of cluster 2, i.e. token 40's key.
  for (std::size_t q = 0; q < spec.query_count; ++q) {
    EXPECT_NEAR(cosine_similarity(w.cache.queries->row(q), w.cache.keys.row(40)), 1.0,
                1e-6);
  }
}

TEST(GenClusteredKeysTest, InvalidSpecs) {
  ClusterSpec spec;
  spec.clusters = 0;
  EXPECT_THROW(gen_clustered_keys(spec), ArgumentError);
  spec = ClusterSpec{};
  spec.dim = 1;
  EXPECT_THROW(gen_clustered_keys(spec), ArgumentError);
  spec = ClusterSpec{};
  spec.sigma = -0.1;
  EXPECT_THROW(gen_clustered_keys(spec), ArgumentError);
  spec = ClusterSpec{};
  spec.query_focus = {1, 1};
  EXPECT_THROW(gen_clustered_keys(spec), ArgumentError);
  spec.query_focus = {0, 0, 0, 0, 0};
  EXPECT_THROW(gen_clustered_keys(spec), ArgumentError);
}

TEST(ClusterCoverageTest, CountsDistinctLabels) {
  const std::vector<std::size_t> labels{0, 0, 1, 1, 2};
  EXPECT_EQ(cluster_coverage({}, labels), 0u);
  EXPECT_EQ(cluster_coverage({0, 1}, labels), 1u);
  EXPECT_EQ(cluster_coverage({0, 2, 4}, labels), 3u);
  EXPECT_THROW(cluster_coverage({5}, labels), ArgumentError);
}

TEST(ClusterCoverageTest, RefinementKeepsAtLeastBaselineCoverage) {
  ClusterSpec spec;
  spec.query_focus = {0.8, 0.05, 0.05, 0.05, 0.05};
  const ClusterWorkload w = gen_clustered_keys(spec);
  EvictionPolicy base;
  EvictionPolicy graph = base;
  graph.refinement = GraphRefinement{};
  const auto kept_base = evict(w.cache, 10, base).kept_indices;
  const auto kept_graph = evict(w.cache, 10, graph).kept_indices;
  EXPECT_GE(cluster_coverage(kept_graph, w.labels),
            cluster_coverage(kept_base, w.labels));
}

TEST(ClusterCoverageTest, FocusedNoiselessBaselineKeepsOneCluster) {
  ClusterSpec spec;
  spec.sigma = 0.0;
  spec.query_focus = {0, 0, 0, 1, 0};
  const ClusterWorkload w = gen_clustered_keys(spec);
  const auto kept = evict(w.cache, spec.per_cluster, EvictionPolicy{}).kept_indices;
  EXPECT_EQ(cluster_coverage(kept, w.labels), 1u);
}

}  // namespace
}  // namespace graphkv
