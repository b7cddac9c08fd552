#ifndef ATBENCH_EXPERIMENT_HPP
#define ATBENCH_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "atbench/cache.hpp"
#include "atbench/methodology.hpp"
#include "atbench/registry.hpp"

namespace atbench {

/// A batch of (space, algorithm) pairs, each run `repeats` times.
struct ExperimentConfig {
  std::vector<std::string> cache_paths;
  std::vector<AlgorithmSpec> algorithms;
  std::size_t repeats = 100;
  std::uint64_t master_seed = 0;
  double cutoff = kDefaultCutoff;
  std::size_t grid_points = kDefaultGridPoints;
  std::string output_dir = "out";
  std::size_t workers = 1;
};

struct SpaceSetup {
  const TuningCache* cache = nullptr;
  double budget_seconds = 0.0;
  BaselineCurve baseline;
};

struct PairResult {
  std::string cache_id;
  std::string algorithm;
  double budget_seconds = 0.0;
  std::vector<Trace> traces;  // ordered by run_id
  PerformanceCurve curve;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<PairResult> pairs;                    // algorithm-major, caches by id
  std::map<std::string, AggregateReport> aggregates; // keyed by algorithm label
  std::vector<std::string> algorithm_order;
};

/// Runs every (space, algorithm, run) triple, up to `config.workers` at a
/// time. Output ordering never depends on scheduling.
inline ExperimentResult run_experiment(const ExperimentConfig& config, const std::vector<TuningCache>& caches) {
  if (config.repeats < 1) {
    throw UsageError("repeats must be at least 1");
  }
  if (config.algorithms.empty() || caches.empty()) {
    throw UsageError("an experiment needs at least one cache and one algorithm");
  }
  std::map<std::string, SpaceSetup> spaces;
  for (const auto& cache : caches) {
    const std::string id = cache.metadata().id();
    if (spaces.contains(id)) {
      throw UsageError("two caches share the identifier '" + id + "'");
    }
    SpaceSetup s;
    s.cache = &cache;
    try {
      s.budget_seconds = compute_budget(cache, config.cutoff);
      s.baseline = baseline_curve(cache, TimeGrid::equidistant(s.budget_seconds, config.grid_points));
    } catch (const DataError& e) {
      throw DataError("cache '" + id + "': " + e.what());
    }
    spaces.emplace(id, std::move(s));
  }
  ExperimentResult result;
  result.config = config;
  for (const auto& algo : config.algorithms) {
    find_algorithm(algo.name);
    const std::string label = algo.label();
    if (std::find(result.algorithm_order.begin(), result.algorithm_order.end(), label) !=
        result.algorithm_order.end()) {
      throw UsageError("algorithm '" + label + "' listed twice");
    }
    result.algorithm_order.push_back(label);
    for (const auto& [id, s] : spaces) {
      PairResult p;
      p.cache_id = id;
      p.algorithm = label;
      p.budget_seconds = s.budget_seconds;
      p.traces.resize(config.repeats);
      result.pairs.push_back(std::move(p));
    }
  }

  // one task per (pair, run)
  const std::size_t per_pair = config.repeats;
  const std::size_t total = result.pairs.size() * per_pair;
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::size_t first_error_task = total;
  auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      const std::size_t pi = task / per_pair;
      const std::size_t run = task % per_pair;
      PairResult& pair = result.pairs[pi];
      const AlgorithmSpec& algo = config.algorithms[pi / spaces.size()];
      try {
        pair.traces[run] = run_optimizer(algo, *spaces.at(pair.cache_id).cache, pair.budget_seconds,
                                         derive_seed(config.master_seed, run), run, config.master_seed);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (task < first_error_task) {
          first_error_task = task;
          first_error = std::current_exception();
        }
      }
    }
  };
  const std::size_t nthreads = std::max<std::size_t>(1, std::min(config.workers, total));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < nthreads; ++i) {
      threads.emplace_back(worker);
    }
    for (auto& t : threads) {
      t.join();
    }
  }
  if (first_error) {
    const PairResult& bad = result.pairs[first_error_task / per_pair];
    try {
      std::rethrow_exception(first_error);
    } catch (const UsageError& e) {
      throw UsageError("(" + bad.cache_id + ", " + bad.algorithm + "): " + e.what());
    } catch (const Error& e) {
      throw DataError("(" + bad.cache_id + ", " + bad.algorithm + "): " + e.what());
    }
  }

  std::map<std::string, std::map<std::string, PerformanceCurve>> by_algo;
  for (auto& pair : result.pairs) {
    const SpaceSetup& s = spaces.at(pair.cache_id);
    pair.curve = performance_curve(pair.traces, s.baseline, s.cache->stats().optimum);
    by_algo[pair.algorithm][pair.cache_id] = pair.curve;
  }
  for (const auto& [label, curves] : by_algo) {
    result.aggregates.emplace(label, aggregate(curves));
  }
  return result;
}

inline const char* kReportHeader = "algorithm,cache_id,score,ci95_half_width,repeats,budget_seconds,cutoff";
inline const char* kCurveHeader = "algorithm,t_fraction,mean_score,ci95_low,ci95_high,spaces,repeats";

// Quotes a field holding a comma or quote; labels with overrides contain commas.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char ch : s) {
    out += ch == '"' ? "\"\"" : std::string(1, ch);
  }
  return out + "\"";
}

/// report.csv: one row per (algorithm, cache), then an `ALL` row per
/// algorithm holding the aggregate score.
inline std::string report_csv(const ExperimentResult& r) {
  std::ostringstream out;
  out << kReportHeader << '\n';
  for (const auto& label : r.algorithm_order) {
    for (const auto& pair : r.pairs) {
      if (pair.algorithm != label) {
        continue;
      }
      const AggregateReport single = aggregate({{pair.cache_id, pair.curve}});
      out << csv_field(label) << ',' << csv_field(pair.cache_id) << ',' << format_full(single.score) << ','
          << format_full(single.score_ci_half_width) << ',' << r.config.repeats << ','
          << format_full(pair.budget_seconds) << ',' << format_full(r.config.cutoff) << '\n';
    }
    const AggregateReport& agg = r.aggregates.at(label);
    out << csv_field(label) << ",ALL," << format_full(agg.score) << ',' << format_full(agg.score_ci_half_width) << ','
        << r.config.repeats << ",," << format_full(r.config.cutoff) << '\n';
  }
  return out.str();
}

inline std::string curve_csv(const ExperimentResult& r) {
  std::ostringstream out;
  out << kCurveHeader << '\n';
  for (const auto& label : r.algorithm_order) {
    const AggregateReport& agg = r.aggregates.at(label);
    for (std::size_t i = 0; i < agg.curve.size(); ++i) {
      out << csv_field(label) << ',' << format_full(agg.fractions[i]) << ',' << format_full(agg.curve[i]) << ','
          << format_full(agg.ci_low[i]) << ',' << format_full(agg.ci_high[i]) << ',' << agg.per_space.size()
          << ',' << r.config.repeats << '\n';
    }
  }
  return out.str();
}

inline std::string sanitize_filename(std::string s) {
  for (char& ch : s) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.')) {
      ch = '_';
    }
  }
  return s;
}

inline std::string traces_text(const ExperimentResult& r, const PairResult& pair) {
  std::ostringstream out;
  out << "# cache_id=" << pair.cache_id << " algorithm=" << pair.algorithm
      << " budget_seconds=" << format_full(pair.budget_seconds) << " master_seed=" << r.config.master_seed
      << " repeats=" << r.config.repeats << '\n';
  out << "run_id,completion_time,config,objective,fresh\n";
  for (const auto& t : pair.traces) {
    write_trace_records(out, t);
  }
  return out.str();
}

/// Writes report.csv, curve.csv and traces/<cache>__<algorithm>.csv.
inline void write_artifacts(const ExperimentResult& r, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "traces");
  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) {
      throw UsageError("cannot write '" + p.string() + "'");
    }
    out << text;
  };
  write(fs::path(dir) / "report.csv", report_csv(r));
  write(fs::path(dir) / "curve.csv", curve_csv(r));
  for (const auto& pair : r.pairs) {
    write(fs::path(dir) / "traces" / (sanitize_filename(pair.cache_id + "__" + pair.algorithm) + ".csv"),
          traces_text(r, pair));
  }
}

} // namespace atbench

#endif // ATBENCH_EXPERIMENT_HPP
