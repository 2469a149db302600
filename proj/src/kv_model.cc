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

#include "graphkv/kv_model.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "graphkv/errors.h"
#include "graphkv/simd.h"

namespace graphkv {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ArgumentError("matrix data length " + std::to_string(data_.size()) +
                        " != " + std::to_string(rows_) + "x" +
                        std::to_string(cols_));
  }
  for (float x : data_) {
    if (!std::isfinite(x)) throw ArgumentError("matrix element is not finite");
  }
}

Matrix Matrix::FromRows(const std::vector<std::vector<float>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<float> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw ArgumentError("ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

Matrix Matrix::SliceRows(std::size_t begin, std::size_t end) const {
  if (begin > end || end > rows_) throw ArgumentError("row slice out of range");
  std::vector<float> data(data_.begin() + begin * cols_,
                          data_.begin() + end * cols_);
  return Matrix(end - begin, cols_, std::move(data));
}

LayerCache::LayerCache(Matrix keys_in, Matrix values_in,
                       std::optional<Matrix> queries_in, std::size_t layer)
    : keys(std::move(keys_in)),
      values(std::move(values_in)),
      queries(std::move(queries_in)),
      layer_index(layer) {
  if (keys.rows() != values.rows() || keys.cols() != values.cols()) {
    throw ArgumentError("keys and values must have the same shape");
  }
  if (queries && queries->cols() != keys.cols()) {
    throw ArgumentError("queries must share the key dimension");
  }
}

ScoreVector::ScoreVector(std::vector<double> values)
    : values_(std::move(values)) {
  Validate();
}

void ScoreVector::Validate() const {
  for (double v : values_) {
    if (std::isnan(v)) throw ArgumentError("score vector contains NaN");
  }
}

double cosine_similarity(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw ArgumentError("cosine_similarity: length mismatch");
  }
  const double uu = simd::SquaredNorm(u);
  const double vv = simd::SquaredNorm(v);
  if (uu == 0.0 || vv == 0.0) return 0.0;
  const double c = simd::Dot(u, v) / (std::sqrt(uu) * std::sqrt(vv));
  return std::clamp(c, -1.0, 1.0);
}

std::vector<double> l2_norm_rows(const Matrix& m) {
  std::vector<double> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out[r] = std::sqrt(simd::SquaredNorm(m.row(r)));
  }
  return out;
}

std::vector<double> softmax_row(std::span<const double> logits) {
  if (logits.empty()) throw ArgumentError("softmax_row: empty input");
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

}  // namespace graphkv
