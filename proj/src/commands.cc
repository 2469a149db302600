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

#include "graphkv/commands.h"

#include <cstdio>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "graphkv/errors.h"
#include "graphkv/eviction.h"
#include "graphkv/io.h"
#include "graphkv/parallel.h"

namespace graphkv::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Locale-independent: snprintf runs in the "C" locale unless setlocale is
// called, which this program never does.
std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

fs::path ResolveAgainst(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::vector<TokenIndex> ReadKept(const fs::path& path) {
  try {
    const json j = json::parse(io::ReadFile(path));
    return j.at("kept_indices").get<std::vector<TokenIndex>>();
  } catch (const json::exception& e) {
    throw IoError("kept file " + path.string() + ": " + e.what());
  }
}

json SpecToJson(const ClusterSpec& s) {
  return json{{"seed", s.seed},
              {"clusters", s.clusters},
              {"per_cluster", s.per_cluster},
              {"dim", s.dim},
              {"sigma", s.sigma},
              {"query_count", s.query_count},
              {"query_focus", s.query_focus}};
}

json ReadJsonFile(const fs::path& path) {
  try {
    return json::parse(io::ReadFile(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

struct CellMetrics {
  std::size_t kept = 0;
  std::optional<SimilarityStats> stats;
  std::optional<std::size_t> coverage;
};

CellMetrics EvaluateCell(const io::LoadedWorkload& w, const RunConfig& cfg) {
  const EvictionResult r = evict(w.cache, cfg.budget, cfg.ToPolicy());
  CellMetrics m;
  m.kept = r.kept_indices.size();
  if (r.kept_indices.size() >= 2) {
    m.stats = pairwise_cosine_stats(w.cache.keys, r.kept_indices);
  }
  if (w.labels) m.coverage = cluster_coverage(r.kept_indices, *w.labels);
  return m;
}

}  // namespace

fs::path Synth(const ClusterSpec& spec, const fs::path& out_dir) {
  const ClusterWorkload w = gen_clustered_keys(spec);
  EnsureDir(out_dir);
  io::write_tensor(out_dir / "keys.gkt", w.cache.keys);
  io::write_tensor(out_dir / "values.gkt", w.cache.values);
  io::write_tensor(out_dir / "queries.gkt", *w.cache.queries);
  io::WorkloadManifest m;
  m.keys = "keys.gkt";
  m.values = "values.gkt";
  m.queries = "queries.gkt";
  m.labels = w.labels;
  m.spec = SpecToJson(spec);
  const fs::path manifest = out_dir / "manifest.json";
  io::WriteManifest(manifest, m);
  return manifest;
}

void Evict(const RunConfig& cfg) {
  if (cfg.manifest.empty()) throw ConfigError("no manifest given");
  if (cfg.output_dir.empty()) throw ConfigError("no output_dir given");
  const io::LoadedWorkload w = io::LoadWorkload(cfg.manifest);
  const EvictionResult r = evict(w.cache, cfg.budget, cfg.ToPolicy());
  const fs::path out(cfg.output_dir);
  EnsureDir(out);
  const json kept{{"n", w.cache.num_tokens()},
                  {"budget", cfg.budget},
                  {"kept_indices", r.kept_indices}};
  io::WriteFile(out / "kept.json", kept.dump(2) + "\n");
  io::write_tensor(out / "keys_kept.gkt", r.keys_sub);
  io::write_tensor(out / "values_kept.gkt", r.values_sub);
  io::WriteScores(out / "scores.gkt", r.refined_scores);
}

std::string Analyze(const AnalyzeOptions& opts) {
  const io::LoadedWorkload w = io::LoadWorkload(opts.manifest);
  const Matrix& keys = w.cache.keys;
  std::vector<TokenIndex> subset;
  if (opts.kept) {
    subset = ReadKept(*opts.kept);
  } else {
    subset.resize(keys.rows());
    std::iota(subset.begin(), subset.end(), TokenIndex{0});
  }
  const SimilarityStats stats = pairwise_cosine_stats(keys, subset, opts.bins);

  std::ostringstream csv;
  csv << "subset,tokens,pairs,mean,variance,coverage\n";
  csv << (opts.kept ? "kept" : "all") << ',' << subset.size() << ','
      << stats.pairs << ',' << Num(stats.mean) << ',' << Num(stats.variance)
      << ',';
  if (w.labels) csv << cluster_coverage(subset, *w.labels);
  csv << '\n';

  if (opts.out_dir) {
    EnsureDir(*opts.out_dir);
    io::WriteFile(*opts.out_dir / "stats.csv", csv.str());

    std::ostringstream hist;
    hist << "bin,lower,upper,count\n";
    const double width = 2.0 / static_cast<double>(opts.bins);
    for (std::size_t b = 0; b < opts.bins; ++b) {
      hist << b << ',' << Num(-1.0 + width * b) << ',' << Num(-1.0 + width * (b + 1))
           << ',' << stats.histogram[b] << '\n';
    }
    io::WriteFile(*opts.out_dir / "histogram.csv", hist.str());

    const PcaResult pca = pca_2d(keys);
    std::vector<bool> in_subset(keys.rows(), false);
    for (TokenIndex t : subset) in_subset[t] = true;
    std::ostringstream pts;
    pts << "# explained_variance," << Num(pca.explained_variance[0]) << ','
        << Num(pca.explained_variance[1]) << ",total," << Num(pca.total_variance)
        << '\n';
    pts << "index,pc1,pc2,kept,label\n";
    for (std::size_t i = 0; i < keys.rows(); ++i) {
      pts << i << ',' << Num(pca.coords.at(i, 0)) << ',' << Num(pca.coords.at(i, 1))
          << ',' << (in_subset[i] ? 1 : 0) << ',';
      if (w.labels) pts << (*w.labels)[i];
      pts << '\n';
    }
    io::WriteFile(*opts.out_dir / "pca.csv", pts.str());
  }
  return csv.str();
}

std::string Sweep(const SweepConfig& cfg) {
  const RunConfig& base = cfg.base;
  if (base.manifest.empty()) throw ConfigError("sweep: base.manifest missing");
  const io::LoadedWorkload w = io::LoadWorkload(base.manifest);

  const GraphRefinement base_ref = base.refinement.value_or(GraphRefinement{});
  auto or_base = [](auto axis, auto fallback) {
    using T = typename decltype(axis)::value_type;
    return axis.empty() ? std::vector<T>{fallback} : axis;
  };
  const double base_ratio = base_ref.sources.ratio().value_or(0.3);
  const auto* fixed = std::get_if<FixedNeighbors>(&base_ref.propagation.neighbors);
  const auto ratios = or_base(cfg.grid.source_ratio, base_ratio);
  const auto neighbors = or_base(cfg.grid.neighbors, fixed ? fixed->m : std::size_t{5});
  const auto rounds = or_base(cfg.grid.rounds, base_ref.propagation.rounds);
  const auto signals = or_base(cfg.grid.signal, base_ref.propagation.signal);
  const auto kinds = or_base(cfg.grid.similarity, base_ref.similarity);
  const auto budgets = or_base(cfg.grid.budget, base.budget);

  struct Cell {
    RunConfig run;
    double ratio;
    std::size_t m;
  };
  std::vector<Cell> cells;
  for (double ratio : ratios)
    for (std::size_t m : neighbors)
      for (std::size_t t : rounds)
        for (SignalKind sig : signals)
          for (SimilarityKind kind : kinds)
            for (std::size_t budget : budgets) {
              RunConfig run = base;
              GraphRefinement ref = base_ref;
              // An explicit source_count in the base config wins over ratios.
              if (!base_ref.sources.count()) ref.sources = SourceSelection::Ratio(ratio);
              ref.propagation.neighbors = FixedNeighbors{m};
              ref.propagation.rounds = t;
              ref.propagation.signal = sig;
              ref.similarity = kind;
              run.refinement = ref;
              run.budget = budget;
              cells.push_back({std::move(run), ratio, m});
            }

  std::vector<std::string> rows(cells.size());
  ParallelFor(cells.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Cell& c = cells[i];
      const GraphRefinement& ref = *c.run.refinement;
      const CellMetrics m = EvaluateCell(w, c.run);
      std::ostringstream row;
      row << Num(c.ratio) << ',' << c.m << ',' << ref.propagation.rounds << ','
          << SignalKindName(ref.propagation.signal) << ','
          << SimilarityKindName(ref.similarity) << ',' << c.run.budget << ','
          << m.kept << ',';
      if (m.stats) row << Num(m.stats->mean) << ',' << Num(m.stats->variance);
      else row << ',';
      row << ',';
      if (m.coverage) row << *m.coverage;
      row << '\n';
      rows[i] = row.str();
    }
  });

  std::string csv =
      "source_ratio,neighbors,rounds,signal,similarity,budget,kept,"
      "mean_cosine,variance_cosine,coverage\n";
  for (const std::string& r : rows) csv += r;
  return csv;
}

std::string MemCalc(const ModelGeometry& geom,
                    const std::vector<std::uint64_t>& tokens) {
  geom.Validate();
  std::string csv = "tokens,memory_gb\n";
  for (std::uint64_t t : tokens) {
    csv += std::to_string(t) + "," + FormatGb(kv_memory_gb(geom, t)) + "\n";
  }
  return csv;
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"GraphKV: graph-based token importance refinement for KV-cache eviction",
               "graphkv"};
  app.require_subcommand(1);
  std::uint64_t seed = 42;

  // synth
  ClusterSpec spec;
  std::string synth_out = "synth_out";
  auto* synth = app.add_subcommand("synth", "Generate a clustered synthetic workload");
  synth->add_option("--seed", seed, "RNG seed")->capture_default_str();
  synth->add_option("--clusters", spec.clusters)->capture_default_str();
  synth->add_option("--per-cluster", spec.per_cluster)->capture_default_str();
  synth->add_option("--dim", spec.dim)->capture_default_str();
  synth->add_option("--sigma", spec.sigma)->capture_default_str();
  synth->add_option("--queries", spec.query_count, "Number of query rows")
      ->capture_default_str();
  synth->add_option("--focus", spec.query_focus, "Per-cluster query weights")
      ->delimiter(',');
  synth->add_option("--out", synth_out, "Output directory")->capture_default_str();

  // evict
  std::string evict_config;
  std::optional<std::string> manifest, out_dir, scorer_kind, scores_path,
      similarity, signal;
  std::optional<std::size_t> budget, window, window_len, pool, sources, rounds,
      neighbors;
  std::optional<double> ratio;
  bool no_refine = false;
  auto* evict_cmd = app.add_subcommand("evict", "Select tokens to keep under a budget");
  evict_cmd->add_option("--config", evict_config, "RunConfig JSON file");
  evict_cmd->add_option("--seed", seed);
  evict_cmd->add_option("--manifest", manifest);
  evict_cmd->add_option("--out", out_dir);
  evict_cmd->add_option("--budget", budget);
  evict_cmd->add_option("--window", window, "Protected trailing window");
  evict_cmd->add_option("--scorer", scorer_kind);
  evict_cmd->add_option("--window-len", window_len, "Observation window length");
  evict_cmd->add_option("--pool", pool, "Max-pool width");
  evict_cmd->add_option("--scores", scores_path, "Precomputed 1 x n score tensor");
  evict_cmd->add_option("--ratio", ratio, "Source nodes as fraction of budget");
  evict_cmd->add_option("--sources", sources, "Absolute source node count");
  evict_cmd->add_option("--similarity", similarity);
  evict_cmd->add_option("--signal", signal);
  evict_cmd->add_option("--rounds", rounds);
  evict_cmd->add_option("--neighbors", neighbors, "Fixed neighborhood size");
  evict_cmd->add_flag("--no-refine", no_refine, "Disable graph refinement");

  // analyze
  AnalyzeOptions analyze_opts;
  std::string analyze_manifest;
  std::optional<std::string> analyze_kept, analyze_out;
  auto* analyze = app.add_subcommand("analyze", "Similarity statistics, coverage, PCA");
  analyze->add_option("--seed", seed);
  analyze->add_option("--manifest", analyze_manifest)->required();
  analyze->add_option("--kept", analyze_kept, "kept.json from evict");
  analyze->add_option("--out", analyze_out, "Directory for CSV outputs");
  analyze->add_option("--bins", analyze_opts.bins)->capture_default_str();

  // sweep
  std::string sweep_config;
  std::optional<std::string> sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Evaluate a parameter grid");
  sweep->add_option("--seed", seed);
  sweep->add_option("--config", sweep_config)->required();
  sweep->add_option("--out", sweep_out, "CSV file (default stdout)");

  // memcalc
  ModelGeometry geom;
  std::vector<std::uint64_t> tokens = kDefaultTokenCounts;
  auto* memcalc = app.add_subcommand("memcalc", "KV-cache memory in GiB");
  memcalc->add_option("--seed", seed);
  memcalc->add_option("--layers", geom.layers)->capture_default_str();
  memcalc->add_option("--kv-heads", geom.kv_heads)->capture_default_str();
  memcalc->add_option("--head-dim", geom.head_dim)->capture_default_str();
  memcalc->add_option("--bytes", geom.bytes_per_element, "Bytes per element")
      ->capture_default_str();
  memcalc->add_option("--tokens", tokens)->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUser;
  }

  try {
    if (*synth) {
      spec.seed = seed;
      out << Synth(spec, synth_out).generic_string() << '\n';
    } else if (*evict_cmd) {
      RunConfig cfg;
      fs::path base;
      if (!evict_config.empty()) {
        cfg = ParseRunConfig(ReadJsonFile(evict_config));
        base = fs::path(evict_config).parent_path();
        cfg.manifest = ResolveAgainst(base, cfg.manifest).string();
        cfg.output_dir = ResolveAgainst(base, cfg.output_dir).string();
        if (cfg.scores_path) cfg.scores_path = ResolveAgainst(base, *cfg.scores_path).string();
      }
      if (manifest) cfg.manifest = *manifest;
      if (out_dir) cfg.output_dir = *out_dir;
      if (budget) cfg.budget = *budget;
      if (window) cfg.protected_window = *window;
      if (scores_path) cfg.scores_path = *scores_path;
      if (scorer_kind) cfg.scorer.kind = ParseScorerKind(*scorer_kind);
      if (window_len) cfg.scorer.window.window_len = *window_len;
      if (pool) cfg.scorer.window.pool_width = *pool;
      const bool touches_refinement =
          ratio || sources || similarity || signal || rounds || neighbors;
      if (touches_refinement && !cfg.refinement) cfg.refinement = GraphRefinement{};
      if (cfg.refinement) {
        GraphRefinement& r = *cfg.refinement;
        if (ratio) r.sources = SourceSelection::Ratio(*ratio);
        if (sources) r.sources = SourceSelection::Count(*sources);
        if (similarity) r.similarity = ParseSimilarityKind(*similarity);
        if (signal) r.propagation.signal = ParseSignalKind(*signal);
        if (rounds) r.propagation.rounds = *rounds;
        if (neighbors) r.propagation.neighbors = FixedNeighbors{*neighbors};
      }
      if (no_refine) cfg.refinement.reset();
      cfg.seed = seed;
      Evict(cfg);
      out << (fs::path(cfg.output_dir) / "kept.json").generic_string() << '\n';
    } else if (*analyze) {
      analyze_opts.manifest = analyze_manifest;
      if (analyze_kept) analyze_opts.kept = *analyze_kept;
      if (analyze_out) analyze_opts.out_dir = *analyze_out;
      out << Analyze(analyze_opts);
    } else if (*sweep) {
      SweepConfig cfg = ParseSweepConfig(ReadJsonFile(sweep_config));
      const fs::path base = fs::path(sweep_config).parent_path();
      cfg.base.manifest = ResolveAgainst(base, cfg.base.manifest).string();
      if (cfg.base.scores_path) {
        cfg.base.scores_path = ResolveAgainst(base, *cfg.base.scores_path).string();
      }
      const std::string csv = Sweep(cfg);
      if (sweep_out) {
        io::WriteFile(*sweep_out, csv);
      } else {
        out << csv;
      }
    } else if (*memcalc) {
      out << MemCalc(geom, tokens);
    }
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUser;
  }
  return kExitOk;
}

}  // namespace graphkv::cli
