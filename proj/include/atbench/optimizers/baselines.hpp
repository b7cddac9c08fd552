#ifndef ATBENCH_OPTIMIZERS_BASELINES_HPP
#define ATBENCH_OPTIMIZERS_BASELINES_HPP

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include "atbench/optimizers/common.hpp"

namespace atbench {

// Reference comparators. Their defaults are reasonable fixed values, not
// tuned settings.

/// Uniform sampling of valid configurations without replacement.
inline Configuration run_random_search(BudgetedEvaluator& ev, const SearchSpace& space, Rng& rng,
                                       const Hyperparameters& = {}) {
  const auto& valid = space.valid_set();
  std::vector<std::size_t> order(valid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Configuration best;
  double best_f = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < order.size() && !ev.done(); ++i) {
    std::swap(order[i], order[i + uniform_index(rng, order.size() - i)]);
    const Configuration& c = valid[order[i]];
    const double f = ev.evaluate(c);
    if (f < best_f) {
      best_f = f;
      best = c;
    }
  }
  return best;
}

inline Hyperparameters simulated_annealing_defaults() {
  return {{"t0", 1.0}, {"cooling", 0.995}, {"restart", 150}};
}

/// Single-state annealer over Hamming neighbors. Objective differences are
/// divided by the range of objectives observed so far, so the temperature
/// scale does not depend on the cache's units.
inline Configuration run_simulated_annealing(BudgetedEvaluator& ev, const SearchSpace& space, Rng& rng,
                                             const Hyperparameters& hp) {
  const double t0 = hp["t0"];
  const double cooling = hp["cooling"];
  const int restart = hp.integer("restart");
  if (!(t0 > 0.0) || !(cooling > 0.0) || restart < 1) {
    throw UsageError("simulated_annealing: invalid hyperparameters");
  }
  Configuration best;
  double best_f = std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  auto evaluate = [&](const Configuration& c) {
    const double f = ev.evaluate(c);
    lo = std::min(lo, f);
    hi = std::max(hi, f);
    const bool improved = f < best_f;
    if (improved) {
      best_f = f;
      best = c;
    }
    return std::pair{f, improved};
  };

  Configuration x = space.random_valid(rng);
  double fx = evaluate(x).first;
  double temperature = t0;
  int stagnation = 0;
  while (!ev.done()) {
    const auto& nb = space.neighbors(x, NeighborhoodKind::Hamming);
    const Configuration y = nb.empty() ? space.random_valid(rng) : nb[uniform_index(rng, nb.size())];
    const auto [fy, improved] = evaluate(y);
    stagnation = improved ? 0 : stagnation + 1;
    const double range = hi - lo;
    const double delta = range > 0.0 ? (fy - fx) / range : 0.0;
    if (sa_accept(delta, std::max(temperature, std::numeric_limits<double>::min()), rng)) {
      x = y;
      fx = fy;
    }
    temperature *= cooling;
    if (stagnation >= restart && !ev.done()) {
      x = space.random_valid(rng);
      fx = evaluate(x).first;
      temperature = t0;
      stagnation = 0;
    }
  }
  return best;
}

inline Hyperparameters genetic_algorithm_defaults() {
  return {{"pop_size", 20},
          {"tournament", 2},
          {"crossover_rate", 0.9},
          {"mutation_rate", 0.1},
          {"elitism", 2}};
}

/// Observer receiving the sorted population objectives of every generation.
using GenerationObserver = std::function<void(const std::vector<Configuration>&, const std::vector<double>&)>;

/// Generational GA with tournament selection, uniform crossover, per-gene
/// resampling mutation, elitism, and repair of every child.
inline Configuration run_genetic_algorithm(BudgetedEvaluator& ev, const SearchSpace& space, Rng& rng,
                                           const Hyperparameters& hp, const GenerationObserver& observe = {}) {
  const int p = hp.integer("pop_size");
  const int tournament = hp.integer("tournament");
  const double cx_rate = hp["crossover_rate"];
  const double mut_rate = hp["mutation_rate"];
  const int elitism = hp.integer("elitism");
  if (p < 2 || tournament < 1 || elitism < 0 || elitism > p) {
    throw UsageError("genetic_algorithm: invalid hyperparameters");
  }
  struct Member {
    Configuration config;
    double f;
  };
  std::vector<Member> pop;
  Configuration best;
  double best_f = std::numeric_limits<double>::infinity();
  auto add = [&](std::vector<Member>& to, Configuration c) {
    const double f = ev.evaluate(c);
    if (f < best_f) {
      best_f = f;
      best = c;
    }
    to.push_back(Member{std::move(c), f});
  };

  for (int i = 0; i < p && !ev.done(); ++i) {
    add(pop, space.random_valid(rng));
  }
  auto select = [&]() -> const Member& {
    const Member* winner = &pop[uniform_index(rng, pop.size())];
    for (int t = 1; t < tournament; ++t) {
      const Member& m = pop[uniform_index(rng, pop.size())];
      if (m.f < winner->f) {
        winner = &m;
      }
    }
    return *winner;
  };

  while (!ev.done()) {
    std::stable_sort(pop.begin(), pop.end(), [](const Member& a, const Member& b) { return a.f < b.f; });
    if (observe) {
      std::vector<Configuration> cs;
      std::vector<double> fs;
      for (const auto& m : pop) {
        cs.push_back(m.config);
        fs.push_back(m.f);
      }
      observe(cs, fs);
    }
    std::vector<Member> next(pop.begin(), pop.begin() + std::min<std::ptrdiff_t>(elitism, std::ssize(pop)));
    while (next.size() < static_cast<std::size_t>(p) && !ev.done()) {
      const Member& a = select();
      const Member& b = select();
      Configuration child = uniform01(rng) < cx_rate ? crossover_uniform(a.config, b.config, rng) : a.config;
      for (std::size_t d = 0; d < child.size(); ++d) {
        if (uniform01(rng) < mut_rate) {
          child[d] = static_cast<Index>(uniform_index(rng, space.domains()[d].size()));
        }
      }
      add(next, space.repair(child));
    }
    if (next.size() < static_cast<std::size_t>(p)) {
      break;
    }
    pop = std::move(next);
  }
  return best;
}

} // namespace atbench

#endif // ATBENCH_OPTIMIZERS_BASELINES_HPP
