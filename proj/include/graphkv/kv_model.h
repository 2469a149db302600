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

#ifndef GRAPHKV_KV_MODEL_H_
#define GRAPHKV_KV_MODEL_H_

// Core tensor and score types shared by every GraphKV module, plus the small
// numeric primitives (cosine similarity, row norms, softmax) built on them.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace graphkv {

using TokenIndex = std::size_t;

// Dense row-major matrix of 32-bit floats. Rows are tokens, columns are
// feature dimensions. Every element is finite; construction enforces it.
class Matrix {
 public:
  Matrix() = default;
  // Zero-filled rows x cols matrix.
  Matrix(std::size_t rows, std::size_t cols);
  // Takes ownership of `data`, which must hold rows*cols finite values.
  Matrix(std::size_t rows, std::size_t cols, std::vector<float> data);
  // Convenience for tests and fixtures; all rows must share one length.
  static Matrix FromRows(const std::vector<std::vector<float>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  std::span<const float> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<float> mutable_row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  float at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const float> data() const { return data_; }

  // Rows [begin, end) as a new matrix.
  Matrix SliceRows(std::size_t begin, std::size_t end) const;

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

// One layer's cached tensors. Queries are optional; when present they share
// the feature dimension of the keys but may cover fewer rows (an observation
// window) or exactly one row per token.
struct LayerCache {
  Matrix keys;
  Matrix values;
  std::optional<Matrix> queries;
  std::size_t layer_index = 0;

  LayerCache() = default;
  LayerCache(Matrix keys, Matrix values, std::optional<Matrix> queries = {},
             std::size_t layer_index = 0);

  std::size_t num_tokens() const { return keys.rows(); }
  std::size_t dim() const { return keys.cols(); }
  // True when there is one query row per token, so queries can stand in for
  // keys in per-token similarity computations.
  bool has_aligned_queries() const {
    return queries.has_value() && queries->rows() >= keys.rows();
  }
};

// Per-token importance scores. 64-bit so multi-round multiplicative updates
// do not accumulate float32 rounding; -inf is a legal "evicted" sentinel,
// NaN is rejected.
class ScoreVector {
 public:
  ScoreVector() = default;
  explicit ScoreVector(std::vector<double> values);
  ScoreVector(std::initializer_list<double> values)
      : ScoreVector(std::vector<double>(values)) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  // Assigning NaN through this accessor is a caller bug; Validate() catches it.
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }

  void Validate() const;

  friend bool operator==(const ScoreVector& a, const ScoreVector& b) = default;

 private:
  std::vector<double> values_;
};

// <u,v> / (|u| |v|), clamped to [-1, 1]. Returns 0 when either vector has
// zero norm. Products are formed exactly in double precision.
double cosine_similarity(std::span<const float> u, std::span<const float> v);

// Euclidean norm of every row.
std::vector<double> l2_norm_rows(const Matrix& m);

// Numerically stable softmax (max subtraction), computed in double.
std::vector<double> softmax_row(std::span<const double> logits);

}  // namespace graphkv

#endif  // GRAPHKV_KV_MODEL_H_
