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

#ifndef GRAPHKV_SIMD_H_
#define GRAPHKV_SIMD_H_

// Inner-product kernels with a scalar reference implementation and vector
// variants (AVX2+FMA on x86-64, NEON on AArch64) chosen at runtime.
//
// All kernels multiply float32 inputs in double precision. A float*float
// product is exact in double, so variants differ only in summation order.

#include <cstddef>
#include <span>
#include <string_view>

namespace graphkv::simd {

enum class Level { kScalar, kAvx2, kNeon };

std::string_view LevelName(Level level);

struct Kernels {
  Level level;
  // sum_i a[i] * b[i]
  double (*dot)(const float* a, const float* b, std::size_t n);
  // sum_i a[i] * a[i]
  double (*squared_norm)(const float* a, std::size_t n);
};

// Whether this binary was compiled with, and this CPU supports, `level`.
bool Supported(Level level);

// Best supported level on this machine.
Level Detect();

const Kernels& KernelsFor(Level level);

// Kernels used by the library. Defaults to Detect().
const Kernels& Active();

// Overrides the active level (tests and benchmarks). Throws ArgumentError if
// the level is not supported. Not thread-safe against concurrent kernel use.
void SetActive(Level level);

inline double Dot(std::span<const float> a, std::span<const float> b) {
  return Active().dot(a.data(), b.data(), a.size());
}

inline double SquaredNorm(std::span<const float> a) {
  return Active().squared_norm(a.data(), a.size());
}

namespace internal {
double DotScalar(const float* a, const float* b, std::size_t n);
double SquaredNormScalar(const float* a, std::size_t n);
#if defined(GRAPHKV_HAVE_AVX2)
double DotAvx2(const float* a, const float* b, std::size_t n);
double SquaredNormAvx2(const float* a, std::size_t n);
#endif
#if defined(GRAPHKV_HAVE_NEON)
double DotNeon(const float* a, const float* b, std::size_t n);
double SquaredNormNeon(const float* a, std::size_t n);
#endif
}  // namespace internal

}  // namespace graphkv::simd

#endif  // GRAPHKV_SIMD_H_
