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

#ifndef GRAPHKV_ANALYSIS_H_
#define GRAPHKV_ANALYSIS_H_

// Diagnostics: similarity statistics of a token subset, 2-D PCA of key
// vectors, and KV-cache memory accounting.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "graphkv/kv_model.h"

namespace graphkv {

inline constexpr std::size_t kDefaultHistogramBins = 40;

struct SimilarityStats {
  double mean = 0.0;
  // Population variance over the pairs.
  double variance = 0.0;
  std::uint64_t pairs = 0;
  // Equal-width bins over [-1, 1]; a value of exactly 1 lands in the last bin.
  std::vector<std::uint64_t> histogram;
};

// Statistics over all unordered pairs of rows in `subset` (needs >= 2).
SimilarityStats pairwise_cosine_stats(const Matrix& m,
                                      const std::vector<TokenIndex>& subset,
                                      std::size_t bins = kDefaultHistogramBins);

struct PcaResult {
  Matrix coords;  // n x 2
  // Variance along PC1 and PC2 (sample covariance eigenvalues), descending.
  std::array<double, 2> explained_variance{};
  // Trace of the covariance, i.e. the total variance.
  double total_variance = 0.0;
};

// Power iteration with deflation on the centered sample covariance. Start
// vector is normalized all-ones; at most 1000 iterations, stopping when the
// direction moves by less than 1e-10. Each direction is signed so its
// largest-magnitude component is positive.
PcaResult pca_2d(const Matrix& m);

struct ModelGeometry {
  std::size_t layers = 32;
  std::size_t kv_heads = 8;
  std::size_t head_dim = 128;
  std::size_t bytes_per_element = 2;  // BF16

  void Validate() const;
};

// tokens * 2 (K and V) * layers * kv_heads * head_dim * bytes / 2^30.
double kv_memory_gb(const ModelGeometry& geom, std::uint64_t tokens);

// Round half up to 3 decimals and format with exactly 3 decimals.
std::string FormatGb(double gb);

}  // namespace graphkv

#endif  // GRAPHKV_ANALYSIS_H_
