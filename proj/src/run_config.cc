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

#include "graphkv/run_config.h"

#include <algorithm>
#include <initializer_list>
#include <string_view>

#include "graphkv/errors.h"
#include "graphkv/io.h"

namespace graphkv {
namespace {

using nlohmann::json;

void RejectUnknownKeys(const json& j, std::string_view where,
                       std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) {
    throw ConfigError(std::string(where) + " must be a JSON object");
  }
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T Get(const json& j, const char* key, std::string_view where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + "." + key + ": " + e.what());
  }
}

template <typename T>
T GetOr(const json& j, const char* key, T fallback, std::string_view where) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  return Get<T>(j, key, where);
}

NeighborPolicy ParseNeighbors(const json& j) {
  if (j.is_number_unsigned()) return FixedNeighbors{j.get<std::size_t>()};
  RejectUnknownKeys(j, "refinement.neighbors", {"fixed", "adaptive"});
  if (j.contains("fixed") == j.contains("adaptive")) {
    throw ConfigError("refinement.neighbors needs exactly one of fixed/adaptive");
  }
  if (j.contains("fixed")) {
    return FixedNeighbors{Get<std::size_t>(j, "fixed", "refinement.neighbors")};
  }
  const json& a = j["adaptive"];
  RejectUnknownKeys(a, "refinement.neighbors.adaptive", {"max", "alpha"});
  AdaptiveNeighbors adaptive;
  adaptive.max_neighbors = GetOr<std::size_t>(a, "max", adaptive.max_neighbors,
                                              "refinement.neighbors.adaptive");
  adaptive.alpha =
      GetOr<double>(a, "alpha", adaptive.alpha, "refinement.neighbors.adaptive");
  return adaptive;
}

json NeighborsToJson(const NeighborPolicy& p) {
  if (const auto* fixed = std::get_if<FixedNeighbors>(&p)) {
    return json{{"fixed", fixed->m}};
  }
  const auto& a = std::get<AdaptiveNeighbors>(p);
  return json{{"adaptive", {{"max", a.max_neighbors}, {"alpha", a.alpha}}}};
}

GraphRefinement ParseRefinement(const json& j) {
  constexpr std::string_view kWhere = "refinement";
  RejectUnknownKeys(j, kWhere,
                    {"source_ratio", "source_count", "similarity", "signal",
                     "rounds", "neighbors", "strength"});
  GraphRefinement r;
  const bool has_ratio = j.contains("source_ratio");
  const bool has_count = j.contains("source_count");
  if (has_ratio && has_count) {
    throw ConfigError("refinement: set source_ratio or source_count, not both");
  }
  try {
    if (has_count) {
      r.sources = SourceSelection::Count(Get<std::size_t>(j, "source_count", kWhere));
    } else if (has_ratio) {
      r.sources = SourceSelection::Ratio(Get<double>(j, "source_ratio", kWhere));
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("refinement: ") + e.what());
  }
  r.similarity = ParseSimilarityKind(
      GetOr<std::string>(j, "similarity", "key_key", kWhere));
  r.propagation.signal =
      ParseSignalKind(GetOr<std::string>(j, "signal", "decay", kWhere));
  r.propagation.rounds = GetOr<std::size_t>(j, "rounds", 1, kWhere);
  if (j.contains("neighbors")) r.propagation.neighbors = ParseNeighbors(j["neighbors"]);
  r.propagation.strength = GetOr<double>(j, "strength", 1.0, kWhere);
  try {
    r.propagation.Validate(1);
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("refinement: ") + e.what());
  }
  return r;
}

ScorerConfig ParseScorer(const json& j) {
  constexpr std::string_view kWhere = "scorer";
  RejectUnknownKeys(j, kWhere, {"kind", "window_len", "pool_width", "knorm_sign"});
  ScorerConfig s;
  s.kind = ParseScorerKind(GetOr<std::string>(j, "kind", "window_attention", kWhere));
  s.window.window_len = GetOr<std::size_t>(j, "window_len", 32, kWhere);
  s.window.pool_width = GetOr<std::size_t>(j, "pool_width", 1, kWhere);
  const std::string sign = GetOr<std::string>(j, "knorm_sign", "negative", kWhere);
  if (sign != "negative" && sign != "positive") {
    throw ConfigError("scorer.knorm_sign must be 'negative' or 'positive'");
  }
  s.knorm_positive = sign == "positive";
  if (s.window.window_len == 0 || s.window.pool_width == 0) {
    throw ConfigError("scorer.window_len and scorer.pool_width must be >= 1");
  }
  return s;
}

template <typename T, typename Parse>
std::vector<T> ParseAxis(const json& grid, const char* key, Parse parse) {
  std::vector<T> out;
  if (!grid.contains(key)) return out;
  const json& axis = grid[key];
  if (!axis.is_array() || axis.empty()) {
    throw ConfigError(std::string("grid.") + key + " must be a non-empty array");
  }
  for (const json& v : axis) {
    try {
      out.push_back(parse(v));
    } catch (const json::exception& e) {
      throw ConfigError(std::string("grid.") + key + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

EvictionPolicy RunConfig::ToPolicy() const {
  EvictionPolicy p;
  p.scorer = scorer;
  p.refinement = refinement;
  p.protected_window = protected_window;
  if (scores_path) p.precomputed_scores = io::ReadScores(*scores_path);
  return p;
}

RunConfig ParseRunConfig(const json& j) {
  constexpr std::string_view kWhere = "config";
  RejectUnknownKeys(j, kWhere,
                    {"manifest", "output_dir", "budget", "protected_window",
                     "seed", "scores", "scorer", "refinement"});
  RunConfig c;
  c.manifest = GetOr<std::string>(j, "manifest", "", kWhere);
  c.output_dir = GetOr<std::string>(j, "output_dir", "", kWhere);
  c.budget = GetOr<std::size_t>(j, "budget", 0, kWhere);
  c.protected_window = GetOr<std::size_t>(j, "protected_window", 0, kWhere);
  c.seed = GetOr<std::uint64_t>(j, "seed", 0, kWhere);
  if (j.contains("scores") && !j["scores"].is_null()) {
    c.scores_path = Get<std::string>(j, "scores", kWhere);
  }
  c.scorer = ParseScorer(j.contains("scorer") ? j["scorer"] : json::object());
  if (j.contains("refinement") && !j["refinement"].is_null()) {
    c.refinement = ParseRefinement(j["refinement"]);
  }
  return c;
}

json RunConfigToJson(const RunConfig& c) {
  json j;
  j["manifest"] = c.manifest;
  j["output_dir"] = c.output_dir;
  j["budget"] = c.budget;
  j["protected_window"] = c.protected_window;
  j["seed"] = c.seed;
  j["scores"] = c.scores_path ? json(*c.scores_path) : json(nullptr);
  j["scorer"] = {{"kind", ScorerKindName(c.scorer.kind)},
                 {"window_len", c.scorer.window.window_len},
                 {"pool_width", c.scorer.window.pool_width},
                 {"knorm_sign", c.scorer.knorm_positive ? "positive" : "negative"}};
  if (c.refinement) {
    const GraphRefinement& r = *c.refinement;
    json rj;
    if (r.sources.count()) {
      rj["source_count"] = *r.sources.count();
    } else {
      rj["source_ratio"] = *r.sources.ratio();
    }
    rj["similarity"] = SimilarityKindName(r.similarity);
    rj["signal"] = SignalKindName(r.propagation.signal);
    rj["rounds"] = r.propagation.rounds;
    rj["neighbors"] = NeighborsToJson(r.propagation.neighbors);
    rj["strength"] = r.propagation.strength;
    j["refinement"] = rj;
  } else {
    j["refinement"] = nullptr;
  }
  return j;
}

SweepConfig ParseSweepConfig(const json& j) {
  RejectUnknownKeys(j, "sweep", {"base", "grid"});
  SweepConfig s;
  s.base = ParseRunConfig(j.contains("base") ? j["base"] : json::object());
  if (!j.contains("grid")) return s;
  const json& g = j["grid"];
  RejectUnknownKeys(g, "grid",
                    {"source_ratio", "neighbors", "rounds", "signal",
                     "similarity", "budget"});
  s.grid.source_ratio = ParseAxis<double>(g, "source_ratio", [](const json& v) {
    const double r = v.get<double>();
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("grid.source_ratio out of (0, 1]");
    return r;
  });
  s.grid.neighbors = ParseAxis<std::size_t>(g, "neighbors", [](const json& v) {
    const auto m = v.get<std::size_t>();
    if (m == 0) throw ConfigError("grid.neighbors entries must be >= 1");
    return m;
  });
  s.grid.rounds = ParseAxis<std::size_t>(g, "rounds", [](const json& v) {
    const auto t = v.get<std::size_t>();
    if (t > kMaxRounds) throw ConfigError("grid.rounds entry too large");
    return t;
  });
  s.grid.signal = ParseAxis<SignalKind>(
      g, "signal", [](const json& v) { return ParseSignalKind(v.get<std::string>()); });
  s.grid.similarity = ParseAxis<SimilarityKind>(g, "similarity", [](const json& v) {
    return ParseSimilarityKind(v.get<std::string>());
  });
  s.grid.budget = ParseAxis<std::size_t>(
      g, "budget", [](const json& v) { return v.get<std::size_t>(); });
  return s;
}

}  // namespace graphkv
