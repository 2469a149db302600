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

#include <atomic>
#include <string>

#include "graphkv/errors.h"
#include "graphkv/simd.h"

namespace graphkv::simd {
namespace {

constexpr Kernels kScalarKernels{Level::kScalar, &internal::DotScalar,
                                 &internal::SquaredNormScalar};
#if defined(GRAPHKV_HAVE_AVX2)
constexpr Kernels kAvx2Kernels{Level::kAvx2, &internal::DotAvx2,
                               &internal::SquaredNormAvx2};
#endif
#if defined(GRAPHKV_HAVE_NEON)
constexpr Kernels kNeonKernels{Level::kNeon, &internal::DotNeon,
                               &internal::SquaredNormNeon};
#endif

std::atomic<const Kernels*>& ActiveSlot() {
  static std::atomic<const Kernels*> slot{&KernelsFor(Detect())};
  return slot;
}

}  // namespace

std::string_view LevelName(Level level) {
  switch (level) {
    case Level::kScalar:
      return "scalar";
    case Level::kAvx2:
      return "avx2";
    case Level::kNeon:
      return "neon";
  }
  return "unknown";
}

bool Supported(Level level) {
  switch (level) {
    case Level::kScalar:
      return true;
    case Level::kAvx2:
#if defined(GRAPHKV_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Level::kNeon:
#if defined(GRAPHKV_HAVE_NEON)
      return true;  // Advanced SIMD is mandatory on AArch64.
#else
      return false;
#endif
  }
  return false;
}

Level Detect() {
  if (Supported(Level::kAvx2)) return Level::kAvx2;
  if (Supported(Level::kNeon)) return Level::kNeon;
  return Level::kScalar;
}

const Kernels& KernelsFor(Level level) {
  if (!Supported(level)) {
    throw ArgumentError("SIMD level not supported on this machine: " +
                        std::string(LevelName(level)));
  }
  switch (level) {
#if defined(GRAPHKV_HAVE_AVX2)
    case Level::kAvx2:
      return kAvx2Kernels;
#endif
#if defined(GRAPHKV_HAVE_NEON)
    case Level::kNeon:
      return kNeonKernels;
#endif
    default:
      return kScalarKernels;
  }
}

const Kernels& Active() { return *ActiveSlot().load(std::memory_order_acquire); }

void SetActive(Level level) {
  ActiveSlot().store(&KernelsFor(level), std::memory_order_release);
}

}  // namespace graphkv::simd
