#ifndef ATBENCH_METHODOLOGY_HPP
#define ATBENCH_METHODOLOGY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "atbench/cache.hpp"
#include "atbench/error.hpp"
#include "atbench/evaluator.hpp"
#include "atbench/optimizers/baselines.hpp"

namespace atbench {

inline constexpr std::size_t kDefaultGridPoints = 50;
inline constexpr double kDefaultCutoff = 0.95;

/// Equidistant sampling times in (0, budget], ending exactly at the budget.
struct TimeGrid {
  double budget = 0.0;
  std::vector<double> points;

  static TimeGrid equidistant(double budget, std::size_t count = kDefaultGridPoints) {
    if (!(budget > 0.0) || count == 0) {
      throw UsageError("time grid needs a positive budget and at least one point");
    }
    TimeGrid g;
    g.budget = budget;
    g.points.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
      g.points.push_back(i == count ? budget : budget * static_cast<double>(i) / static_cast<double>(count));
    }
    return g;
  }

  std::size_t size() const { return points.size(); }

  /// Sampling times as fractions of the budget.
  std::vector<double> fractions() const {
    std::vector<double> f;
    f.reserve(points.size());
    for (std::size_t i = 1; i <= points.size(); ++i) {
      f.push_back(static_cast<double>(i) / static_cast<double>(points.size()));
    }
    return f;
  }
};

/// Expected minimum of n draws without replacement from the ascending list
/// `sorted`: sum_i v_(i) * C(N-i, n-1) / C(N, n). The binomial ratio is
/// carried by recurrence, so nothing overflows.
inline double expected_min_after_n(std::span<const double> sorted, std::size_t n) {
  const std::size_t N = sorted.size();
  if (n < 1 || n > N) {
    throw OutOfRange("expected_min_after_n: n = " + std::to_string(n) + " outside [1, " +
                     std::to_string(N) + "]");
  }
  // p_1 = n / N, p_{i+1} = p_i * (N - i - n + 1) / (N - i)
  double p = static_cast<double>(n) / static_cast<double>(N);
  double sum = 0.0;
  for (std::size_t i = 1; i <= N - n + 1; ++i) {
    sum += sorted[i - 1] * p;
    if (i < N) {
      p *= static_cast<double>(N - i - n + 1) / static_cast<double>(N - i);
    }
  }
  return sum;
}

/// Draws random search is credited with by time t: max(1, floor(t / mean
/// cost)), capped at the number of valid configurations.
inline std::size_t baseline_draws(const TuningCache& cache, double t) {
  const auto& s = cache.stats();
  const double raw = std::floor(t / s.mean_eval_cost);
  const auto N = static_cast<double>(s.value_distribution.size());
  return static_cast<std::size_t>(std::clamp(raw, 1.0, N));
}

inline double analytic_baseline_at(const TuningCache& cache, double t) {
  return expected_min_after_n(cache.stats().value_distribution, baseline_draws(cache, t));
}

/// Expected best-so-far of random search at each grid time.
struct BaselineCurve {
  TimeGrid grid;
  std::vector<double> values;
};

inline BaselineCurve baseline_curve(const TuningCache& cache, const TimeGrid& grid) {
  BaselineCurve b{grid, {}};
  b.values.reserve(grid.size());
  for (double t : grid.points) {
    b.values.push_back(analytic_baseline_at(cache, t));
  }
  return b;
}

/// The baseline estimated by simulation: `runs` seeded random-search runs
/// using the true per-entry evaluation costs. A run with nothing completed
/// at t is credited with its first draw, mirroring the analytic n >= 1.
inline BaselineCurve monte_carlo_baseline(const TuningCache& cache, const TimeGrid& grid, std::size_t runs,
                                          std::uint64_t seed) {
  if (runs == 0) {
    throw UsageError("monte_carlo_baseline: runs must be positive");
  }
  BaselineCurve b{grid, std::vector<double>(grid.size(), 0.0)};
  for (std::size_t r = 0; r < runs; ++r) {
    BudgetedEvaluator ev(cache, grid.budget, r, seed);
    Rng rng(derive_seed(seed, r));
    run_random_search(ev, cache.space(), rng);
    const Trace& trace = ev.trace();
    const auto series = best_so_far_series(trace, grid.points);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      b.values[i] += series[i] ? *series[i] : trace.events.front().objective;
    }
  }
  for (double& v : b.values) {
    v /= static_cast<double>(runs);
  }
  return b;
}

/// Budget in seconds: the earliest time at which the analytic baseline gets
/// within `cutoff` of the way from the median to the optimum. Found by
/// bisection to 1e-6 s; if a single draw already suffices, one mean
/// evaluation time is returned.
inline double compute_budget(const TuningCache& cache, double cutoff = kDefaultCutoff) {
  if (!(cutoff > 0.0 && cutoff <= 1.0)) {
    throw OutOfRange("cutoff must lie in (0, 1]");
  }
  const auto& s = cache.stats();
  if (!(s.median > s.optimum)) {
    throw DegenerateSpace("median equals optimum; the space cannot be scored");
  }
  // median - cutoff*(median - optimum), arranged so cutoff 1 gives the optimum exactly
  const double target = s.optimum + (1.0 - cutoff) * (s.median - s.optimum);
  const double c = s.mean_eval_cost;
  const auto N = static_cast<double>(s.value_distribution.size());
  if (analytic_baseline_at(cache, c) <= target) {
    return c;
  }
  double lo = c;
  double hi = (N + 1.0) * c;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (analytic_baseline_at(cache, mid) <= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

inline double confidence_half_width(double stddev, std::size_t runs) {
  if (runs < 2) {
    throw OutOfRange("confidence_half_width needs at least two runs");
  }
  if (stddev < 0.0) {
    throw OutOfRange("standard deviation must be non-negative");
  }
  return 1.96 * stddev / std::sqrt(static_cast<double>(runs));
}

namespace detail {

inline double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) {
    return 0.0;
  }
  double mean = 0.0;
  for (double x : xs) {
    mean += x;
  }
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) {
    ss += (x - mean) * (x - mean);
  }
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

} // namespace detail

/// Baseline-relative performance over time for one space:
/// P_t = (baseline(t) - mean best-so-far(t)) / (baseline(t) - optimum).
/// 0 means parity with random search, 1 means the optimum was found.
struct PerformanceCurve {
  std::vector<double> fractions;             // sampling times as budget fractions
  std::vector<double> values;                // P_t
  std::vector<std::vector<double>> per_run;  // per_run[r][t], same formula per run
  std::size_t run_count = 0;

  double score() const {
    double s = 0.0;
    for (double v : values) {
      s += v;
    }
    return s / static_cast<double>(values.size());
  }
};

/// Runs with no completed evaluation at t contribute the baseline value.
/// Values are not clamped; worse than baseline shows up as negative.
inline PerformanceCurve performance_curve(std::span<const Trace> traces, const BaselineCurve& baseline,
                                          double optimum) {
  if (traces.empty()) {
    throw UsageError("performance_curve needs at least one trace");
  }
  const std::size_t T = baseline.grid.size();
  for (std::size_t i = 0; i < T; ++i) {
    if (baseline.values[i] == optimum) {
      throw DegenerateDenominator("baseline equals the optimum at grid point " + std::to_string(i));
    }
  }
  PerformanceCurve pc;
  pc.fractions = baseline.grid.fractions();
  pc.run_count = traces.size();
  pc.values.assign(T, 0.0);
  std::vector<double> mean_best(T, 0.0);
  for (const auto& trace : traces) {
    const auto series = best_so_far_series(trace, baseline.grid.points);
    std::vector<double> run(T);
    for (std::size_t i = 0; i < T; ++i) {
      const double f = series[i] ? *series[i] : baseline.values[i];
      mean_best[i] += f;
      run[i] = (baseline.values[i] - f) / (baseline.values[i] - optimum);
    }
    pc.per_run.push_back(std::move(run));
  }
  for (std::size_t i = 0; i < T; ++i) {
    const double fbar = mean_best[i] / static_cast<double>(traces.size());
    pc.values[i] = (baseline.values[i] - fbar) / (baseline.values[i] - optimum);
  }
  return pc;
}

/// Mean curve across spaces with a 95% band and the overall score.
struct AggregateReport {
  std::map<std::string, PerformanceCurve> per_space;
  std::vector<double> fractions;
  std::vector<double> curve;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  double score = 0.0;
  double score_ci_half_width = 0.0;
  std::size_t runs = 0;
};

/// Unweighted mean over spaces at each grid index; the score is the mean over
/// grid indices. The band is 1.96 sigma / sqrt(R), with sigma taken across
/// runs of the per-run curves averaged over spaces (run r of every space
/// forms one sample). Fewer than two runs gives a zero-width band.
inline AggregateReport aggregate(const std::map<std::string, PerformanceCurve>& curves) {
  if (curves.empty()) {
    throw UsageError("aggregate needs at least one curve");
  }
  const PerformanceCurve& first = curves.begin()->second;
  const std::size_t T = first.values.size();
  const std::size_t R = first.per_run.size();
  for (const auto& [id, c] : curves) {
    if (c.values.size() != T) {
      throw GridMismatch("curve '" + id + "' has " + std::to_string(c.values.size()) + " points, expected " +
                         std::to_string(T));
    }
    if (c.per_run.size() != R) {
      throw GridMismatch("curve '" + id + "' has " + std::to_string(c.per_run.size()) + " runs, expected " +
                         std::to_string(R));
    }
  }
  AggregateReport rep;
  rep.per_space = curves;
  rep.fractions = first.fractions;
  rep.runs = R;
  const auto S = static_cast<double>(curves.size());
  rep.curve.assign(T, 0.0);
  for (const auto& [id, c] : curves) {
    for (std::size_t i = 0; i < T; ++i) {
      rep.curve[i] += c.values[i];
    }
  }
  for (double& v : rep.curve) {
    v /= S;
  }
  for (double v : rep.curve) {
    rep.score += v;
  }
  rep.score /= static_cast<double>(T);

  // per-run curves averaged over spaces
  std::vector<std::vector<double>> run_curves(R, std::vector<double>(T, 0.0));
  for (const auto& [id, c] : curves) {
    for (std::size_t r = 0; r < R; ++r) {
      for (std::size_t i = 0; i < T; ++i) {
        run_curves[r][i] += c.per_run[r][i] / S;
      }
    }
  }
  rep.ci_low = rep.curve;
  rep.ci_high = rep.curve;
  if (R >= 2) {
    std::vector<double> column(R);
    for (std::size_t i = 0; i < T; ++i) {
      for (std::size_t r = 0; r < R; ++r) {
        column[r] = run_curves[r][i];
      }
      const double hw = confidence_half_width(detail::sample_stddev(column), R);
      rep.ci_low[i] -= hw;
      rep.ci_high[i] += hw;
    }
    std::vector<double> run_scores(R, 0.0);
    for (std::size_t r = 0; r < R; ++r) {
      for (double v : run_curves[r]) {
        run_scores[r] += v;
      }
      run_scores[r] /= static_cast<double>(T);
    }
    rep.score_ci_half_width = confidence_half_width(detail::sample_stddev(run_scores), R);
  }
  return rep;
}

} // namespace atbench

#endif // ATBENCH_METHODOLOGY_HPP
