#ifndef ATBENCH_EVALUATOR_HPP
#define ATBENCH_EVALUATOR_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "atbench/cache.hpp"
#include "atbench/error.hpp"
#include "atbench/value.hpp"

namespace atbench {

struct TraceEvent {
  double completion_time = 0.0;  // seconds since run start
  Configuration config;
  double objective = 0.0;        // minimization form
  bool fresh = true;             // false for memoized repeats

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// Append-only record of one optimizer run.
struct Trace {
  std::uint64_t run_id = 0;
  std::uint64_t master_seed = 0;
  std::vector<TraceEvent> events;

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Best objective among events completed by time `t`, or nullopt if none has.
inline std::optional<double> best_so_far_at(const Trace& trace, double t) {
  std::optional<double> best;
  for (const auto& e : trace.events) {
    if (e.completion_time > t) {
      break;
    }
    if (!best || e.objective < *best) {
      best = e.objective;
    }
  }
  return best;
}

/// best_so_far_at() sampled at every time in the ascending list `times`.
inline std::vector<std::optional<double>> best_so_far_series(const Trace& trace,
                                                             std::span<const double> times) {
  std::vector<std::optional<double>> out;
  out.reserve(times.size());
  std::optional<double> best;
  std::size_t i = 0;
  for (double t : times) {
    for (; i < trace.events.size() && trace.events[i].completion_time <= t; ++i) {
      if (!best || trace.events[i].objective < *best) {
        best = trace.events[i].objective;
      }
    }
    out.push_back(best);
  }
  return out;
}

/// Writes one record per event: run_id,completion_time,indices,objective,fresh
/// with indices joined by ';'.
inline void write_trace_records(std::ostream& out, const Trace& trace) {
  for (const auto& e : trace.events) {
    out << trace.run_id << ',' << format_full(e.completion_time) << ',';
    for (std::size_t d = 0; d < e.config.size(); ++d) {
      out << (d ? ";" : "") << e.config[d];
    }
    out << ',' << format_full(e.objective) << ',' << (e.fresh ? 1 : 0) << '\n';
  }
}

/// The simulated objective of one run.
///
/// Serves cached objective values and advances a simulated clock by each
/// configuration's evaluation cost. Repeated configurations return the
/// memoized value at zero cost. An evaluation that starts before the budget
/// is exhausted always completes, so the spent fraction may end above 1.
class BudgetedEvaluator {
public:
  /// Consecutive memoized repeats after which a run is considered stalled.
  static constexpr std::uint64_t kDefaultRepeatLimit = 100'000;

  BudgetedEvaluator(const TuningCache& cache, double budget_seconds, std::uint64_t run_id = 0,
                    std::uint64_t master_seed = 0)
      : cache_(&cache), budget_(budget_seconds), seen_(cache.space().constrained_size(), false) {
    if (!(budget_seconds > 0.0)) {
      throw UsageError("budget must be positive");
    }
    trace_.run_id = run_id;
    trace_.master_seed = master_seed;
  }

  const TuningCache& cache() const { return *cache_; }
  const SearchSpace& space() const { return cache_->space(); }
  double budget_seconds() const { return budget_; }
  double spent_seconds() const { return spent_; }
  double budget_spent_fraction() const { return spent_ / budget_; }
  const Trace& trace() const { return trace_; }
  Trace take_trace() { return std::move(trace_); }
  std::size_t distinct_evaluated() const { return distinct_; }

  void set_repeat_limit(std::uint64_t n) { repeat_limit_ = n; }

  bool seen(const Configuration& c) const {
    auto pos = space().position(c);
    return pos && seen_[*pos];
  }

  /// True when no further evaluation should start: the budget is spent, every
  /// valid configuration has been measured, or the run keeps repeating itself.
  bool done() const {
    return budget_spent_fraction() >= 1.0 || distinct_ == seen_.size() ||
           idle_repeats_ >= repeat_limit_;
  }

  double evaluate(const Configuration& c) {
    if (!space().in_range(c)) {
      throw InvalidConfiguration("evaluate: " + to_string(c) + " does not fit the parameter domains");
    }
    auto pos = space().position(c);
    if (!pos) {
      throw InvalidConfiguration("evaluate: configuration " +
                                 TuningCache::describe(space(), c) + " violates the constraints");
    }
    const double value = cache_->objective_at(*pos);
    if (seen_[*pos]) {
      ++idle_repeats_;
      trace_.events.push_back(TraceEvent{spent_, c, value, false});
      return value;
    }
    seen_[*pos] = true;
    ++distinct_;
    idle_repeats_ = 0;
    spent_ += cache_->cost_at(*pos);
    trace_.events.push_back(TraceEvent{spent_, c, value, true});
    return value;
  }

private:
  const TuningCache* cache_;
  double budget_;
  double spent_ = 0.0;
  std::vector<bool> seen_;
  std::size_t distinct_ = 0;
  std::uint64_t idle_repeats_ = 0;
  std::uint64_t repeat_limit_ = kDefaultRepeatLimit;
  Trace trace_;
};

inline double budget_spent_fraction(const BudgetedEvaluator& ev) { return ev.budget_spent_fraction(); }

} // namespace atbench

#endif // ATBENCH_EVALUATOR_HPP
