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
#include <set>
#include <string>

#include "graphkv/errors.h"

namespace graphkv {
namespace {

// Scales v to unit length in double, then rounds to float. A zero vector
// stays zero.
void NormalizeInto(const std::vector<double>& v, std::span<float> out) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double inv = sq > 0.0 ? 1.0 / std::sqrt(sq) : 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<float>(v[i] * inv);
  }
}

}  // namespace

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::Gaussian() {
  if (spare_) {
    const double out = *spare_;
    spare_.reset();
    return out;
  }
  double u, v, s;
  do {
    u = 2.0 * Uniform() - 1.0;
    v = 2.0 * Uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  return u * f;
}

void ClusterSpec::Validate() const {
  if (clusters == 0) throw ArgumentError("clusters must be >= 1");
  if (per_cluster == 0) throw ArgumentError("per_cluster must be >= 1");
  if (dim < 2) throw ArgumentError("dim must be >= 2");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ArgumentError("sigma must be finite and >= 0");
  }
  if (!query_focus.empty()) {
    if (query_focus.size() != clusters) {
      throw ArgumentError("query_focus needs one weight per cluster");
    }
    double total = 0.0;
    for (double w : query_focus) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw ArgumentError("query_focus weights must be finite and >= 0");
      }
      total += w;
    }
    if (!(total > 0.0)) throw ArgumentError("query_focus weights sum to zero");
  }
}

ClusterWorkload gen_clustered_keys(const ClusterSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  const std::size_t c = spec.clusters;
  const std::size_t d = spec.dim;
  const std::size_t n = c * spec.per_cluster;

  std::vector<std::vector<double>> centers(c, std::vector<double>(d));
  for (auto& center : centers) {
    for (double& x : center) x = rng.Gaussian();
    double sq = 0.0;
    for (double x : center) sq += x * x;
    const double inv = sq > 0.0 ? 1.0 / std::sqrt(sq) : 0.0;
    for (double& x : center) x *= inv;
  }

  Matrix keys(n, d);
  std::vector<std::size_t> labels(n);
  std::vector<double> scratch(d);
  for (std::size_t t = 0; t < n; ++t) {
    labels[t] = t / spec.per_cluster;
    const auto& center = centers[labels[t]];
    for (std::size_t j = 0; j < d; ++j) {
      scratch[j] = center[j] + spec.sigma * rng.Gaussian();
    }
    NormalizeInto(scratch, keys.mutable_row(t));
  }

  std::vector<double> weights = spec.query_focus;
  if (weights.empty()) weights.assign(c, 1.0);
  double weight_sum = 0.0;
  for (double w : weights) weight_sum += w;
  Matrix queries(spec.query_count, d);
  for (std::size_t q = 0; q < spec.query_count; ++q) {
    const double pick = rng.Uniform() * weight_sum;
    std::size_t cluster = 0;
    double running = weights[0];
    while (cluster + 1 < c && pick >= running) running += weights[++cluster];
    // Skip zero-weight clusters that the running sum may land on.
    while (weights[cluster] == 0.0 && cluster > 0) --cluster;
    for (std::size_t j = 0; j < d; ++j) {
      scratch[j] = centers[cluster][j] + spec.sigma * rng.Gaussian();
    }
    NormalizeInto(scratch, queries.mutable_row(q));
  }

  Matrix values(n, d);
  for (std::size_t t = 0; t < n; ++t) {
    for (float& x : values.mutable_row(t)) x = static_cast<float>(rng.Gaussian());
  }

  ClusterWorkload w;
  w.cache = LayerCache(std::move(keys), std::move(values), std::move(queries));
  w.labels = std::move(labels);
  w.spec = spec;
  return w;
}

std::size_t cluster_coverage(const std::vector<TokenIndex>& kept,
                             const std::vector<std::size_t>& labels) {
  std::set<std::size_t> seen;
  for (TokenIndex t : kept) {
    if (t >= labels.size()) throw ArgumentError("kept index has no label");
    seen.insert(labels[t]);
  }
  return seen.size();
}

}  // namespace graphkv
