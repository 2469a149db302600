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

#ifndef GRAPHKV_PARALLEL_H_
#define GRAPHKV_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace graphkv {

// Worker count hint. Reads GRAPHKV_THREADS (positive integer); falls back to
// std::thread::hardware_concurrency(), and to 1 if that is unknown.
std::size_t ThreadCount();

// Splits [0, count) into contiguous chunks and runs body(begin, end) on up to
// `threads` workers. Callers must make each index's work independent of the
// chunking so results do not depend on the thread count.
void ParallelFor(std::size_t count, std::size_t threads,
                 const std::function<void(std::size_t, std::size_t)>& body);

inline void ParallelFor(
    std::size_t count,
    const std::function<void(std::size_t, std::size_t)>& body) {
  ParallelFor(count, ThreadCount(), body);
}

}  // namespace graphkv

#endif  // GRAPHKV_PARALLEL_H_
