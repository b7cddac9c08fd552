#ifndef ATBENCH_OPTIMIZERS_HYBRID_VNDX_HPP
#define ATBENCH_OPTIMIZERS_HYBRID_VNDX_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "atbench/optimizers/common.hpp"

namespace atbench {

/// Variable neighborhood descent with roulette-weighted neighborhoods, a
/// k-NN surrogate screening a small candidate pool, elite recombination, a
/// tabu list and annealing-style acceptance with restarts on stagnation.
///
/// Hyperparameters:
///   k           neighbors averaged by the surrogate            (5)
///   pool_size   candidates screened per iteration              (8)
///   restart     non-improving iterations before a restart      (100)
///   tabu_size   capacity of the tabu list                      (300)
///   elite_size  capacity of the elite set                      (5)
///   t0          initial temperature                            (1.0)
///   cooling     geometric cooling factor per iteration         (0.995)
inline Hyperparameters hybrid_vndx_defaults() {
  return {{"k", 5},        {"pool_size", 8}, {"restart", 100}, {"tabu_size", 300},
          {"elite_size", 5}, {"t0", 1.0},    {"cooling", 0.995}};
}

/// Snapshot handed to an observer after every iteration.
struct VndxIteration {
  std::size_t iteration = 0;
  NeighborhoodKind kind = NeighborhoodKind::Hamming;
  bool accepted = false;
  bool restarted = false;
  double temperature_at_test = 0.0;
  double temperature = 0.0;                // after cooling or restart
  std::size_t iterations_since_restart = 0;
  NeighborhoodWeights weights_before;
  NeighborhoodWeights weights;
  std::size_t pool_size = 0;
  const History* history = nullptr;
  const EliteHeap* elites = nullptr;
  const TabuList* tabu = nullptr;
};

using VndxObserver = std::function<void(const VndxIteration&)>;

inline Configuration run_hybrid_vndx(BudgetedEvaluator& ev, const SearchSpace& space, Rng& rng,
                                     const Hyperparameters& hp, const VndxObserver& observe = {}) {
  const int k = hp.integer("k");
  const int pool_size = hp.integer("pool_size");
  const int restart = hp.integer("restart");
  const int tabu_size = hp.integer("tabu_size");
  const int elite_size = hp.integer("elite_size");
  const double t0 = hp["t0"];
  const double cooling = hp["cooling"];
  if (k < 1 || pool_size < 1 || restart < 1 || tabu_size < 1 || elite_size < 1 || !(t0 > 0.0) ||
      !(cooling > 0.0)) {
    throw UsageError("hybrid_vndx: invalid hyperparameters");
  }

  History history;
  EliteHeap elites(static_cast<std::size_t>(elite_size));
  TabuList tabu(static_cast<std::size_t>(tabu_size));
  double hist_min = std::numeric_limits<double>::infinity();
  double hist_max = -std::numeric_limits<double>::infinity();
  Configuration best;
  double best_f = std::numeric_limits<double>::infinity();

  // Evaluates c, recording fresh results; returns (objective, improved best).
  auto evaluate = [&](const Configuration& c) {
    const bool fresh = !ev.seen(c);
    const double f = ev.evaluate(c);
    if (fresh) {
      history.push(c, f);
      elites.push(c, f);
      hist_min = std::min(hist_min, f);
      hist_max = std::max(hist_max, f);
    }
    const bool improved = f < best_f;
    if (improved) {
      best_f = f;
      best = c;
    }
    return std::pair{f, improved};
  };

  Configuration x = space.random_valid(rng);
  double fx = evaluate(x).first;
  NeighborhoodWeights weights;
  double temperature = t0;
  int stagnation = 0;
  std::size_t since_restart = 0;
  std::size_t iteration = 0;

  while (!ev.done()) {
    const NeighborhoodKind kind = roulette_select(weights, rng);

    std::vector<Configuration> pool = sample_without_replacement(
        space.neighbors(x, kind), static_cast<std::size_t>(std::max(pool_size - 2, 0)), rng);
    if (elites.size() >= 2 && pool.size() < static_cast<std::size_t>(pool_size)) {
      const std::size_t i = uniform_index(rng, elites.size());
      std::size_t j = uniform_index(rng, elites.size() - 1);
      j += j >= i;
      pool.push_back(space.repair(
          crossover_uniform(elites.elites()[i].config, elites.elites()[j].config, rng)));
    }
    while (pool.size() < static_cast<std::size_t>(pool_size)) {
      pool.push_back(space.random_valid(rng));
    }

    const double penalty = history.size() >= 2 ? hist_max - hist_min : 1e9;
    std::size_t pick = 0;
    double pick_score = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const double score = knn_predict(history, pool[i], static_cast<std::size_t>(k)) +
                           (tabu.contains(pool[i]) ? penalty : 0.0);
      if (score < pick_score) {
        pick_score = score;
        pick = i;
      }
    }
    const Configuration candidate = pool[pick];

    const auto [fc, improved] = evaluate(candidate);
    stagnation = improved ? 0 : stagnation + 1;

    VndxIteration it;
    it.iteration = iteration++;
    it.kind = kind;
    it.weights_before = weights;
    it.temperature_at_test = temperature;
    it.pool_size = pool.size();
    it.accepted = sa_accept(fc - fx, std::max(temperature, std::numeric_limits<double>::min()), rng);
    if (it.accepted) {
      x = candidate;
      fx = fc;
      tabu.push(x);
      weights.scale(kind, 1.1);
    } else {
      weights.scale(kind, 0.9);
    }
    temperature *= cooling;
    ++since_restart;

    if (stagnation >= restart && !ev.done()) {
      x = space.random_valid(rng);
      fx = evaluate(x).first;
      temperature = t0;
      stagnation = 0;
      since_restart = 0;
      it.restarted = true;
    }
    if (observe) {
      it.temperature = temperature;
      it.iterations_since_restart = since_restart;
      it.weights = weights;
      it.history = &history;
      it.elites = &elites;
      it.tabu = &tabu;
      observe(it);
    }
  }
  return best;
}

} // namespace atbench

#endif // ATBENCH_OPTIMIZERS_HYBRID_VNDX_HPP
