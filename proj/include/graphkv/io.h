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

#ifndef GRAPHKV_IO_H_
#define GRAPHKV_IO_H_

// GKT1 tensor files and JSON workload manifests.
//
// GKT1 layout, all integers little-endian:
//   bytes 0-3   "GKT1"
//   u32         version (= 1)
//   u32         ndim
//   u64 x ndim  dims
//   f32 x prod(dims), row-major
//
// Matrices are always written with ndim = 2. On read, ndim 1 is accepted as a
// 1 x len row (score vectors).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphkv/kv_model.h"

namespace graphkv::io {

inline constexpr char kTensorMagic[4] = {'G', 'K', 'T', '1'};
inline constexpr std::uint32_t kTensorVersion = 1;
// Headers declaring more elements than this are rejected before allocating.
inline constexpr std::uint64_t kMaxTensorElements = std::uint64_t{1} << 40;

std::string EncodeTensor(const Matrix& m);
Matrix DecodeTensor(const std::string& bytes);

void write_tensor(const std::filesystem::path& path, const Matrix& m);
Matrix read_tensor(const std::filesystem::path& path);

// Scores travel as 1 x n float32 tensors; -inf survives, values are narrowed
// on write and widened on read.
void WriteScores(const std::filesystem::path& path, const ScoreVector& s);
ScoreVector ReadScores(const std::filesystem::path& path);

struct WorkloadManifest {
  std::filesystem::path keys;
  std::filesystem::path values;
  std::optional<std::filesystem::path> queries;
  std::optional<std::vector<std::size_t>> labels;
  std::optional<nlohmann::json> spec;
};

// Relative tensor paths are resolved against the manifest's directory.
WorkloadManifest ReadManifest(const std::filesystem::path& path);
void WriteManifest(const std::filesystem::path& path,
                   const WorkloadManifest& manifest);

struct LoadedWorkload {
  LayerCache cache;
  std::optional<std::vector<std::size_t>> labels;
  std::optional<nlohmann::json> spec;
};

// Reads the manifest and every referenced tensor; checks label length.
LoadedWorkload LoadWorkload(const std::filesystem::path& manifest_path);

// Whole-file helpers; throw IoError.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& bytes);

}  // namespace graphkv::io

#endif  // GRAPHKV_IO_H_
