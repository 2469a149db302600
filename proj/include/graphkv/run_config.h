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

#ifndef GRAPHKV_RUN_CONFIG_H_
#define GRAPHKV_RUN_CONFIG_H_

// JSON run configuration for the evict and sweep commands.
//
//   {
//     "manifest": "work/manifest.json",
//     "output_dir": "out",
//     "budget": 10,
//     "protected_window": 0,
//     "seed": 0,
//     "scores": null,                      // optional 1 x n GKT1 score file
//     "scorer": {"kind": "window_attention", "window_len": 32,
//                "pool_width": 1, "knorm_sign": "negative"},
//     "refinement": {"source_ratio": 0.3,  // or "source_count": k
//                    "similarity": "key_key", "signal": "decay",
//                    "rounds": 1, "neighbors": {"fixed": 5},
//                    "strength": 1.0}      // null disables refinement
//   }
//
// Unknown keys anywhere are rejected with ConfigError.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphkv/eviction.h"

namespace graphkv {

struct RunConfig {
  std::string manifest;
  std::string output_dir;
  std::size_t budget = 0;
  std::size_t protected_window = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> scores_path;
  ScorerConfig scorer;
  std::optional<GraphRefinement> refinement;

  EvictionPolicy ToPolicy() const;
};

RunConfig ParseRunConfig(const nlohmann::json& j);
nlohmann::json RunConfigToJson(const RunConfig& cfg);

// Grid axes for the sweep command. An empty axis means "use the base value".
struct SweepGrid {
  std::vector<double> source_ratio;
  std::vector<std::size_t> neighbors;
  std::vector<std::size_t> rounds;
  std::vector<SignalKind> signal;
  std::vector<SimilarityKind> similarity;
  std::vector<std::size_t> budget;
};

struct SweepConfig {
  RunConfig base;
  SweepGrid grid;
};

// {"base": RunConfig, "grid": {"source_ratio": [...], "neighbors": [...],
//  "rounds": [...], "signal": [...], "similarity": [...], "budget": [...]}}
SweepConfig ParseSweepConfig(const nlohmann::json& j);

}  // namespace graphkv

#endif  // GRAPHKV_RUN_CONFIG_H_
