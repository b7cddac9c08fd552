#ifndef ATBENCH_REGISTRY_HPP
#define ATBENCH_REGISTRY_HPP

#include <charconv>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "atbench/evaluator.hpp"
#include "atbench/optimizers/adaptive_tabu_grey_wolf.hpp"
#include "atbench/optimizers/baselines.hpp"
#include "atbench/optimizers/hybrid_vndx.hpp"

namespace atbench {

using OptimizerFn =
    std::function<Configuration(BudgetedEvaluator&, const SearchSpace&, Rng&, const Hyperparameters&)>;

struct AlgorithmEntry {
  std::string name;
  Hyperparameters defaults;
  OptimizerFn run;
};

/// All optimizers under their stable command-line identifiers.
inline const std::vector<AlgorithmEntry>& algorithm_registry() {
  static const std::vector<AlgorithmEntry> registry = {
      {"random_search", {}, [](auto& ev, const auto& sp, auto& rng, const auto& hp) {
         return run_random_search(ev, sp, rng, hp);
       }},
      {"simulated_annealing", simulated_annealing_defaults(),
       [](auto& ev, const auto& sp, auto& rng, const auto& hp) { return run_simulated_annealing(ev, sp, rng, hp); }},
      {"genetic_algorithm", genetic_algorithm_defaults(),
       [](auto& ev, const auto& sp, auto& rng, const auto& hp) { return run_genetic_algorithm(ev, sp, rng, hp); }},
      {"hybrid_vndx", hybrid_vndx_defaults(),
       [](auto& ev, const auto& sp, auto& rng, const auto& hp) { return run_hybrid_vndx(ev, sp, rng, hp); }},
      {"adaptive_tabu_grey_wolf", adaptive_tabu_grey_wolf_defaults(),
       [](auto& ev, const auto& sp, auto& rng, const auto& hp) {
         return run_adaptive_tabu_grey_wolf(ev, sp, rng, hp);
       }},
  };
  return registry;
}

inline const AlgorithmEntry& find_algorithm(std::string_view name) {
  for (const auto& e : algorithm_registry()) {
    if (e.name == name) {
      return e;
    }
  }
  throw UnknownAlgorithm("unknown algorithm '" + std::string(name) + "'");
}

/// An algorithm identifier with hyperparameter overrides, written on the
/// command line as `name[,key=value...]`.
struct AlgorithmSpec {
  std::string name;
  std::map<std::string, double> overrides;

  static AlgorithmSpec parse(std::string_view text) {
    AlgorithmSpec spec;
    std::size_t start = 0;
    bool first = true;
    while (start <= text.size()) {
      std::size_t comma = text.find(',', start);
      if (comma == std::string_view::npos) {
        comma = text.size();
      }
      const std::string_view part = text.substr(start, comma - start);
      if (first) {
        spec.name = std::string(part);
        first = false;
      } else {
        const auto eq = part.find('=');
        if (eq == std::string_view::npos || eq == 0) {
          throw UsageError("expected key=value in algorithm spec, got '" + std::string(part) + "'");
        }
        const std::string_view v = part.substr(eq + 1);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
        if (ec != std::errc{} || ptr != v.data() + v.size()) {
          throw UsageError("hyperparameter value '" + std::string(v) + "' is not a number");
        }
        spec.overrides[std::string(part.substr(0, eq))] = value;
      }
      start = comma + 1;
    }
    hyperparameters(spec);  // reject unknown names early
    return spec;
  }

  /// The name, followed by overrides in key order.
  std::string label() const {
    std::string out = name;
    for (const auto& [k, v] : overrides) {
      out += "," + k + "=" + format_shortest(v);
    }
    return out;
  }

  static Hyperparameters hyperparameters(const AlgorithmSpec& spec) {
    Hyperparameters hp = find_algorithm(spec.name).defaults;
    hp.merge(spec.overrides);
    return hp;
  }
};

/// One complete run of `algo` on a fresh evaluator; the same inputs always
/// produce the same trace.
inline Trace run_optimizer(const AlgorithmSpec& algo, const TuningCache& cache, double budget_seconds,
                           std::uint64_t seed, std::uint64_t run_id = 0, std::uint64_t master_seed = 0) {
  const AlgorithmEntry& entry = find_algorithm(algo.name);
  const Hyperparameters hp = AlgorithmSpec::hyperparameters(algo);
  BudgetedEvaluator ev(cache, budget_seconds, run_id, master_seed);
  Rng rng(seed);
  entry.run(ev, cache.space(), rng, hp);
  return ev.take_trace();
}

} // namespace atbench

#endif // ATBENCH_REGISTRY_HPP
