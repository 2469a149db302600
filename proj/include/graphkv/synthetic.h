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

#ifndef GRAPHKV_SYNTHETIC_H_
#define GRAPHKV_SYNTHETIC_H_

// Seeded workloads with planted redundancy: c clusters of r near-duplicate
// unit keys, plus queries concentrated on chosen clusters.
//
// Random stream: std::mt19937_64 seeded with the 64-bit seed (its output is
// fixed by the C++ standard). Uniforms take the top 53 bits; Gaussians come
// from the Marsaglia polar method, emitting u*f then caching v*f. See
// docs/FORMATS.md for the draw order and test vectors.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "graphkv/kv_model.h"

namespace graphkv {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1).
  double Uniform();
  // Standard normal.
  double Gaussian();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct ClusterSpec {
  std::uint64_t seed = 42;
  std::size_t clusters = 5;
  std::size_t per_cluster = 20;
  std::size_t dim = 64;
  double sigma = 0.05;
  std::size_t query_count = 32;
  // Relative weight of each cluster when drawing query centers. Empty means
  // uniform; otherwise one non-negative entry per cluster with positive sum.
  std::vector<double> query_focus;

  void Validate() const;
};

struct ClusterWorkload {
  LayerCache cache;
  std::vector<std::size_t> labels;
  ClusterSpec spec;
};

// Draw order: centers (clusters x dim), then member keys cluster by cluster
// (tokens are cluster-major, token t has label t / per_cluster), then each
// query (one uniform to pick a cluster, then dim noise draws), then values
// (n x dim standard normals).
ClusterWorkload gen_clustered_keys(const ClusterSpec& spec);

std::size_t cluster_coverage(const std::vector<TokenIndex>& kept,
                             const std::vector<std::size_t>& labels);

}  // namespace graphkv

#endif  // GRAPHKV_SYNTHETIC_H_
