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

#ifndef GRAPHKV_COMMANDS_H_
#define GRAPHKV_COMMANDS_H_

// Subcommands of the `graphkv` tool. Exit codes: 0 success, 2 user or
// configuration error, 3 internal invariant failure.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "graphkv/analysis.h"
#include "graphkv/run_config.h"
#include "graphkv/synthetic.h"

namespace graphkv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUser = 2;
inline constexpr int kExitInternal = 3;

// Writes keys.gkt, values.gkt, queries.gkt and manifest.json into out_dir.
// Returns the manifest path.
std::filesystem::path Synth(const ClusterSpec& spec,
                            const std::filesystem::path& out_dir);

// Runs one eviction and writes kept.json, keys_kept.gkt, values_kept.gkt and
// scores.gkt (refined scores) into cfg.output_dir.
void Evict(const RunConfig& cfg);

struct AnalyzeOptions {
  std::filesystem::path manifest;
  // kept.json from Evict; when absent every token is analyzed.
  std::optional<std::filesystem::path> kept;
  // When set, stats.csv, histogram.csv and pca.csv are written here.
  std::optional<std::filesystem::path> out_dir;
  std::size_t bins = kDefaultHistogramBins;
};

// Returns the stats CSV (also written to out_dir/stats.csv when set).
std::string Analyze(const AnalyzeOptions& opts);

// One CSV row per grid cell, in grid order (source_ratio, neighbors, rounds,
// signal, similarity, budget; the last axis varies fastest).
std::string Sweep(const SweepConfig& cfg);

// "tokens,memory_gb" CSV with 3-decimal half-up rounding.
std::string MemCalc(const ModelGeometry& geom,
                    const std::vector<std::uint64_t>& tokens);

inline const std::vector<std::uint64_t> kDefaultTokenCounts = {
    128, 256, 512, 1024, 2048, 16000, 32000, 64000, 128000};

// Full command-line entry point.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace graphkv::cli

#endif  // GRAPHKV_COMMANDS_H_
