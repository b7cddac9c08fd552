#ifndef ATBENCH_OPTIMIZERS_ADAPTIVE_TABU_GREY_WOLF_HPP
#define ATBENCH_OPTIMIZERS_ADAPTIVE_TABU_GREY_WOLF_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "atbench/optimizers/common.hpp"

namespace atbench {

/// Hyperparameters:
///   pop_size          population size p                        (8)
///   tabu_factor       tabu length as a multiple of p           (3)
///   shake_rate        probability of shaking a proposal        (0.2)
///   jump_rate         share of shakes that are coordinate jumps (0.15)
///   stagnation_limit  generations without improvement          (80)
///   restart_ratio     share of the population reinitialized    (0.3)
///   t0, lambda, t_min temperature max(t_min, reheat*t0*exp(-lambda*b))
inline Hyperparameters adaptive_tabu_grey_wolf_defaults() {
  return {{"pop_size", 8},        {"tabu_factor", 3},      {"shake_rate", 0.2},
          {"jump_rate", 0.15},    {"stagnation_limit", 80}, {"restart_ratio", 0.3},
          {"t0", 1.0},            {"lambda", 5.0},          {"t_min", 1e-4}};
}

inline constexpr double kMaxReheat = 8.0;

/// Neighborhood used for one-step shakes at budget fraction b: coarse moves
/// in the first third of the budget, strict ones in the last.
inline NeighborhoodKind grey_wolf_schedule(double b) {
  if (b < 1.0 / 3.0) {
    return NeighborhoodKind::Hamming;
  }
  if (b < 2.0 / 3.0) {
    return NeighborhoodKind::Adjacent;
  }
  return NeighborhoodKind::StrictlyAdjacent;
}

inline std::size_t grey_wolf_reinit_count(int pop_size, double restart_ratio) {
  return static_cast<std::size_t>(std::floor(restart_ratio * pop_size));
}

/// Optional instrumentation hooks.
struct GreyWolfObserver {
  /// Population objectives right after each sort (ascending).
  std::function<void(const std::vector<double>&)> on_sort;
  /// Leaders, the individual and its leader-mixed proposal before shaking.
  std::function<void(const Configuration& alpha, const Configuration& beta, const Configuration& delta,
                     const Configuration& x, const Configuration& proposal)>
      on_proposal;
  /// Temperature used at an acceptance test, with the inputs it came from.
  std::function<void(double temperature, double b, double reheat, std::size_t tabu_size)> on_acceptance;
  std::function<void(std::size_t replaced)> on_reinit;
};

namespace detail {

// One move of kind `m` from y. Valid points move within the valid
// neighborhood; infeasible ones move on raw indices and are repaired later.
inline void grey_wolf_step(Configuration& y, NeighborhoodKind m, const SearchSpace& space, Rng& rng) {
  if (space.is_valid(y)) {
    const auto& nb = space.neighbors(y, m);
    if (!nb.empty()) {
      y = nb[uniform_index(rng, nb.size())];
    }
    return;
  }
  const auto& domains = space.domains();
  const std::size_t dims = y.size();
  switch (m) {
  case NeighborhoodKind::Hamming: {
    const std::size_t d = uniform_index(rng, dims);
    const std::size_t n = domains[d].size();
    if (n > 1) {
      const auto v = static_cast<Index>(uniform_index(rng, n - 1));
      y[d] = v >= y[d] ? v + 1 : v;
    }
    break;
  }
  case NeighborhoodKind::StrictlyAdjacent: {
    const std::size_t d = uniform_index(rng, dims);
    const bool down = y[d] > 0;
    const bool up = y[d] + 1 < domains[d].size();
    if (down && up) {
      y[d] = uniform_index(rng, 2) == 0 ? y[d] - 1 : y[d] + 1;
    } else if (down) {
      y[d] -= 1;
    } else if (up) {
      y[d] += 1;
    }
    break;
  }
  case NeighborhoodKind::Adjacent: {
    for (int attempt = 0; attempt < 16; ++attempt) {
      Configuration z = y;
      for (std::size_t d = 0; d < dims; ++d) {
        const long v = static_cast<long>(y[d]) + static_cast<long>(uniform_index(rng, 3)) - 1;
        if (v >= 0 && v < static_cast<long>(domains[d].size())) {
          z[d] = static_cast<Index>(v);
        }
      }
      if (z != y) {
        y = std::move(z);
        break;
      }
    }
    break;
  }
  }
}

} // namespace detail

inline Configuration run_adaptive_tabu_grey_wolf(BudgetedEvaluator& ev, const SearchSpace& space, Rng& rng,
                                                 const Hyperparameters& hp,
                                                 const GreyWolfObserver& observe = {}) {
  const int p = hp.integer("pop_size");
  const int tabu_factor = hp.integer("tabu_factor");
  const double shake_rate = hp["shake_rate"];
  const double jump_rate = hp["jump_rate"];
  const int tau = hp.integer("stagnation_limit");
  const double rho = hp["restart_ratio"];
  const double t0 = hp["t0"];
  const double lambda = hp["lambda"];
  const double t_min = hp["t_min"];
  if (p < 4 || tabu_factor < 1 || tau < 1 || !(t0 > 0.0) || !(t_min > 0.0)) {
    throw UsageError("adaptive_tabu_grey_wolf: invalid hyperparameters (pop_size must be at least 4)");
  }

  struct Member {
    Configuration config;
    double f;
  };
  std::vector<Member> pop;
  TabuList tabu(static_cast<std::size_t>(tabu_factor * p));
  Configuration best;
  double best_f = std::numeric_limits<double>::infinity();
  auto consider = [&](const Configuration& c, double f) {
    if (f < best_f) {
      best_f = f;
      best = c;
      return true;
    }
    return false;
  };

  for (int i = 0; i < p && !ev.done(); ++i) {
    Configuration c = space.random_valid(rng);
    const double f = ev.evaluate(c);
    consider(c, f);
    pop.push_back(Member{std::move(c), f});
  }
  if (pop.size() < static_cast<std::size_t>(p)) {
    return best;
  }

  auto sort_population = [&] {
    std::stable_sort(pop.begin(), pop.end(), [](const Member& a, const Member& b) { return a.f < b.f; });
    if (observe.on_sort) {
      std::vector<double> fs;
      for (const auto& m : pop) {
        fs.push_back(m.f);
      }
      observe.on_sort(fs);
    }
  };

  double b = ev.budget_spent_fraction();
  double reheat = 1.0;
  int stagnation = 0;
  const std::size_t dims = space.dims();

  while (b < 1.0 && !ev.done()) {
    sort_population();
    const Configuration alpha = pop[0].config;
    const Configuration beta = pop[1].config;
    const Configuration delta = pop[2].config;
    bool improved = false;

    for (std::size_t i = 3; i < pop.size() && !ev.done(); ++i) {
      const Configuration& x = pop[i].config;

      Configuration y = x;
      for (std::size_t j = 0; j < dims; ++j) {
        switch (uniform_index(rng, 4)) {
        case 0: y[j] = alpha[j]; break;
        case 1: y[j] = beta[j]; break;
        case 2: y[j] = delta[j]; break;
        default: y[j] = x[j]; break;
        }
      }
      if (observe.on_proposal) {
        observe.on_proposal(alpha, beta, delta, x, y);
      }

      if (uniform01(rng) < shake_rate) {
        if (uniform01(rng) < jump_rate) {
          const Configuration donor = space.random_valid(rng);
          const std::size_t j = uniform_index(rng, dims);
          y[j] = donor[j];
        } else {
          detail::grey_wolf_step(y, grey_wolf_schedule(b), space, rng);
        }
      }

      if (!space.is_valid(y)) {
        Configuration fixed = space.repair(y);
        y = hamming_distance(fixed, y) <= 1 ? std::move(fixed) : space.random_valid(rng);
      }

      for (int retry = 0; retry < 10 && tabu.contains(y); ++retry) {
        const auto& nb = space.neighbors(y, NeighborhoodKind::Hamming);
        Configuration next = nb.empty() ? space.random_valid(rng) : nb[uniform_index(rng, nb.size())];
        if (tabu.contains(next)) {
          next = space.random_valid(rng);
        }
        y = std::move(next);
      }

      const double fy = ev.evaluate(y);
      improved |= consider(y, fy);
      const double temperature = std::max(t_min, reheat * t0 * std::exp(-lambda * b));
      if (observe.on_acceptance) {
        observe.on_acceptance(temperature, b, reheat, tabu.size());
      }
      if (sa_accept(fy - pop[i].f, temperature, rng)) {
        pop[i] = Member{y, fy};
        tabu.push(y);
      }
    }

    if (improved) {
      stagnation = 0;
      reheat = 1.0;
    } else {
      ++stagnation;
    }
    if (stagnation >= tau) {
      sort_population();
      const std::size_t count = grey_wolf_reinit_count(p, rho);
      bool reinit_improved = false;
      for (std::size_t r = 0; r < count && !ev.done(); ++r) {
        Member& m = pop[pop.size() - 1 - r];
        m.config = space.random_valid(rng);
        m.f = ev.evaluate(m.config);
        reinit_improved |= consider(m.config, m.f);
      }
      if (observe.on_reinit) {
        observe.on_reinit(count);
      }
      reheat = reinit_improved ? 1.0 : std::min(kMaxReheat, 2.0 * reheat);
      stagnation = 0;
    }
    b = ev.budget_spent_fraction();
  }
  return best;
}

} // namespace atbench

#endif // ATBENCH_OPTIMIZERS_ADAPTIVE_TABU_GREY_WOLF_HPP
