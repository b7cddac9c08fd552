// atbench: validate tuning caches, generate synthetic ones, and score
// optimizers against the random-search baseline.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atbench/atbench.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 2;
constexpr int kExitUsage = 64;

void print_counts(const atbench::ValidationReport& r) {
  std::cout << "cartesian=" << r.cartesian_size << " constrained=" << r.constrained_size
            << " dims=" << r.dims << '\n';
}

int cmd_validate(const std::string& path, std::optional<std::uint64_t> cartesian,
                 std::optional<std::uint64_t> constrained, std::optional<std::size_t> dims) {
  const atbench::TuningCache cache = atbench::load_cache(path);
  std::optional<atbench::ExpectedCounts> expected;
  if (cartesian || constrained || dims) {
    const auto& sp = cache.space();
    expected = atbench::ExpectedCounts{cartesian.value_or(sp.cartesian_size()),
                                       constrained.value_or(sp.constrained_size()), dims.value_or(sp.dims())};
  }
  const auto report = atbench::validate_cache(cache, expected);
  std::cout << "cache " << cache.metadata().id() << '\n';
  print_counts(report);
  for (const auto& flag : report.flags) {
    std::cout << "mismatch: " << flag << '\n';
  }
  std::cout << (report.ok() ? "valid" : "invalid") << '\n';
  return report.ok() ? kExitOk : kExitData;
}

int cmd_stats(const std::string& path, double cutoff) {
  const atbench::TuningCache cache = atbench::load_cache(path);
  const auto& s = cache.stats();
  std::cout << "cache " << cache.metadata().id() << '\n';
  print_counts(atbench::validate_cache(cache));
  std::cout << "optimum=" << atbench::format_shortest(s.optimum)
            << " median=" << atbench::format_shortest(s.median)
            << " mean_eval_cost=" << atbench::format_shortest(s.mean_eval_cost) << '\n';
  std::cout << "cutoff=" << atbench::format_shortest(cutoff) << " budget=";
  try {
    std::cout << atbench::format_shortest(atbench::compute_budget(cache, cutoff)) << '\n';
  } catch (const atbench::DegenerateSpace&) {
    std::cout << "degenerate\n";
  }
  return kExitOk;
}

int cmd_gen_synthetic(const std::string& kind, int dims, int points, std::uint64_t seed, const std::string& out) {
  const auto cache = atbench::synth_cache(atbench::parse_synth_kind(kind), dims, points, seed);
  atbench::write_cache(cache, out);
  std::cout << "wrote " << out << " (" << cache.space().constrained_size() << " valid of "
            << cache.space().cartesian_size() << ")\n";
  return kExitOk;
}

int cmd_run(atbench::ExperimentConfig config, const std::vector<std::string>& algo_texts) {
  for (const auto& text : algo_texts) {
    config.algorithms.push_back(atbench::AlgorithmSpec::parse(text));
  }
  std::vector<atbench::TuningCache> caches;
  for (const auto& path : config.cache_paths) {
    try {
      caches.push_back(atbench::load_cache(path));
    } catch (const atbench::DataError& e) {
      throw atbench::DataError(path + ": " + e.what());
    }
  }
  const auto result = atbench::run_experiment(config, caches);
  atbench::write_artifacts(result, config.output_dir);
  for (const auto& label : result.algorithm_order) {
    const auto& agg = result.aggregates.at(label);
    std::cout << label << " score=" << atbench::format_shortest(agg.score)
              << " ci95=" << atbench::format_shortest(agg.score_ci_half_width) << '\n';
  }
  std::cout << "wrote " << config.output_dir << "/report.csv, curve.csv, traces/\n";
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated benchmarking of auto-tuning optimizers on exhaustive tuning caches"};
  app.require_subcommand(1);

  std::string cache_path;
  std::optional<std::uint64_t> expect_cartesian, expect_constrained;
  std::optional<std::size_t> expect_dims;
  auto* validate = app.add_subcommand("validate", "Check that a cache is well-formed and exhaustive");
  validate->add_option("cache", cache_path, "Cache file")->required();
  validate->add_option("--expect-cartesian", expect_cartesian, "Expected Cartesian size");
  validate->add_option("--expect-constrained", expect_constrained, "Expected constrained size");
  validate->add_option("--expect-dims", expect_dims, "Expected number of parameters");

  double stats_cutoff = atbench::kDefaultCutoff;
  auto* stats = app.add_subcommand("stats", "Print search-space statistics and the derived budget");
  stats->add_option("cache", cache_path, "Cache file")->required();
  stats->add_option("--cutoff", stats_cutoff, "Budget cutoff fraction")->check(CLI::Range(0.0, 1.0));

  std::string kind, out_path;
  int dims = 0, points = 0;
  std::uint64_t synth_seed = 0;
  auto* gen = app.add_subcommand("gen-synthetic", "Write a synthetic exhaustive cache");
  gen->add_option("--kind", kind, "bowl | rugged | uniform_random")->required();
  gen->add_option("--dims", dims, "Number of parameters")->required();
  gen->add_option("--points", points, "Values per parameter")->required();
  gen->add_option("--seed", synth_seed, "Random seed");
  gen->add_option("--out", out_path, "Output file")->required();

  atbench::ExperimentConfig config;
  std::vector<std::string> algo_texts;
  auto* run = app.add_subcommand("run", "Run optimizers on caches and score them");
  run->add_option("--cache", config.cache_paths, "Cache files")->required();
  run->add_option("--algo", algo_texts, "Algorithm as NAME[,key=value...]")->required();
  run->add_option("--repeats", config.repeats, "Runs per (cache, algorithm)");
  run->add_option("--seed", config.master_seed, "Master seed");
  run->add_option("--cutoff", config.cutoff, "Budget cutoff fraction");
  run->add_option("--points", config.grid_points, "Time sampling points");
  run->add_option("--workers", config.workers, "Concurrent runs");
  run->add_option("--out", config.output_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*validate) {
      return cmd_validate(cache_path, expect_cartesian, expect_constrained, expect_dims);
    }
    if (*stats) {
      return cmd_stats(cache_path, stats_cutoff);
    }
    if (*gen) {
      return cmd_gen_synthetic(kind, dims, points, synth_seed, out_path);
    }
    return cmd_run(config, algo_texts);
  } catch (const atbench::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const atbench::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}
