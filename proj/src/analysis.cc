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

#include "graphkv/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "graphkv/errors.h"

namespace graphkv {
namespace {

constexpr int kPowerIterations = 1000;
constexpr double kPowerTolerance = 1e-10;

using Dense = std::vector<double>;  // row-major d x d

Dense MatVec(const Dense& c, const Dense& v) {
  const std::size_t d = v.size();
  Dense out(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += c[i * d + j] * v[j];
    out[i] = acc;
  }
  return out;
}

double Norm(const Dense& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

void FixSign(Dense& v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  }
  if (v[arg] < 0) {
    for (double& x : v) x = -x;
  }
}

// Dominant eigenpair of the symmetric PSD matrix `c`. Returns eigenvalue 0
// and a zero vector when `c` annihilates every start vector tried, judged
// relative to `scale` (the largest entry of the undeflated covariance).
std::pair<double, Dense> PowerIterate(const Dense& c, std::size_t d, double scale) {
  // All-ones first; fall back to basis vectors in case it is orthogonal to
  // every direction with nonzero variance.
  std::vector<Dense> starts;
  starts.emplace_back(d, 1.0 / std::sqrt(static_cast<double>(d)));
  for (std::size_t i = 0; i < d; ++i) {
    Dense e(d, 0.0);
    e[i] = 1.0;
    starts.push_back(std::move(e));
  }
  for (Dense v : starts) {
    Dense w = MatVec(c, v);
    double w_norm = Norm(w);
    if (w_norm <= scale * 1e-12) continue;
    for (int it = 0; it < kPowerIterations; ++it) {
      Dense next(d);
      for (std::size_t i = 0; i < d; ++i) next[i] = w[i] / w_norm;
      double moved = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        moved = std::max(moved, std::abs(next[i] - v[i]));
      }
      v = std::move(next);
      if (moved < kPowerTolerance) break;
      w = MatVec(c, v);
      w_norm = Norm(w);
      if (w_norm == 0.0) break;
    }
    FixSign(v);
    const Dense cv = MatVec(c, v);
    double lambda = 0.0;
    for (std::size_t i = 0; i < d; ++i) lambda += v[i] * cv[i];
    return {std::max(lambda, 0.0), v};
  }
  return {0.0, Dense(d, 0.0)};
}

}  // namespace

SimilarityStats pairwise_cosine_stats(const Matrix& m,
                                      const std::vector<TokenIndex>& subset,
                                      std::size_t bins) {
  if (subset.size() < 2) {
    throw ArgumentError("pairwise_cosine_stats needs at least 2 tokens");
  }
  if (bins == 0) throw ArgumentError("histogram needs at least one bin");
  for (TokenIndex i : subset) {
    if (i >= m.rows()) throw ArgumentError("subset index out of range");
  }
  SimilarityStats stats;
  stats.histogram.assign(bins, 0);
  std::vector<double> values;
  values.reserve(subset.size() * (subset.size() - 1) / 2);
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const double c = cosine_similarity(m.row(subset[a]), m.row(subset[b]));
      values.push_back(c);
      auto bin = static_cast<std::size_t>(
          std::floor((c + 1.0) / 2.0 * static_cast<double>(bins)));
      ++stats.histogram[std::min(bin, bins - 1)];
    }
  }
  stats.pairs = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - stats.mean) * (v - stats.mean);
  stats.variance = sq / static_cast<double>(values.size());
  return stats;
}

PcaResult pca_2d(const Matrix& m) {
  const std::size_t n = m.rows();
  const std::size_t d = m.cols();
  if (n < 2 || d < 2) throw ArgumentError("pca_2d needs n >= 2 and d >= 2");

  Dense mean(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += m.at(r, j);
  }
  for (double& x : mean) x /= static_cast<double>(n);
  Dense centered(n * d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      centered[r * d + j] = m.at(r, j) - mean[j];
    }
  }
  Dense cov(d * d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const double* x = centered.data() + r * d;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) cov[i * d + j] += x[i] * x[j];
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i * d + j] /= denom;
      cov[j * d + i] = cov[i * d + j];
    }
  }

  PcaResult result;
  for (std::size_t i = 0; i < d; ++i) result.total_variance += cov[i * d + i];

  double scale = 0.0;
  for (double x : cov) scale = std::max(scale, std::abs(x));
  auto [lambda1, v1] = PowerIterate(cov, d, scale);
  Dense deflated = cov;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      deflated[i * d + j] -= lambda1 * v1[i] * v1[j];
    }
  }
  auto [lambda2, v2] = PowerIterate(deflated, d, scale);
  double overlap = 0.0;
  for (std::size_t i = 0; i < d; ++i) overlap += v1[i] * v2[i];
  for (std::size_t i = 0; i < d; ++i) v2[i] -= overlap * v1[i];
  const double v2_norm = Norm(v2);
  if (v2_norm > 0.0) {
    for (double& x : v2) x /= v2_norm;
    FixSign(v2);
  }
  if (lambda2 > lambda1) {
    std::swap(lambda1, lambda2);
    std::swap(v1, v2);
  }
  result.explained_variance = {lambda1, lambda2};

  std::vector<float> coords(n * 2);
  for (std::size_t r = 0; r < n; ++r) {
    double p1 = 0.0, p2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      p1 += centered[r * d + j] * v1[j];
      p2 += centered[r * d + j] * v2[j];
    }
    coords[r * 2] = static_cast<float>(p1);
    coords[r * 2 + 1] = static_cast<float>(p2);
  }
  result.coords = Matrix(n, 2, std::move(coords));
  return result;
}

void ModelGeometry::Validate() const {
  if (layers == 0 || kv_heads == 0 || head_dim == 0 || bytes_per_element == 0) {
    throw ArgumentError("model geometry entries must all be >= 1");
  }
}

double kv_memory_gb(const ModelGeometry& geom, std::uint64_t tokens) {
  geom.Validate();
  const double bytes = static_cast<double>(tokens) * 2.0 *
                       static_cast<double>(geom.layers) *
                       static_cast<double>(geom.kv_heads) *
                       static_cast<double>(geom.head_dim) *
                       static_cast<double>(geom.bytes_per_element);
  return bytes / 1073741824.0;
}

std::string FormatGb(double gb) {
  const auto thousandths =
      static_cast<long long>(std::floor(gb * 1000.0 + 0.5));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%lld.%03lld", thousandths / 1000,
                thousandths % 1000);
  return buf;
}

}  // namespace graphkv
