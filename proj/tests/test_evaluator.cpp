#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "test_support.hpp"

namespace atbench {
namespace {

std::string serialize(const Trace& t) {
  std::ostringstream out;
  write_trace_records(out, t);
  return out.str();
}

const std::vector<std::string>& all_algorithms() {
  static const std::vector<std::string> names = {"random_search", "simulated_annealing", "genetic_algorithm",
                                                 "hybrid_vndx", "adaptive_tabu_grey_wolf"};
  return names;
}

TEST(Evaluator, CostsAddUp) {
  const auto cache = testing::values_cache({5, 6, 7}, {0.5, 0.7, 1.0});
  BudgetedEvaluator ev(cache, 2.4, 0, 0);
  EXPECT_EQ(ev.budget_spent_fraction(), 0.0);
  EXPECT_EQ(ev.evaluate(Configuration{0}), 5.0);
  EXPECT_EQ(ev.evaluate(Configuration{1}), 6.0);
  EXPECT_DOUBLE_EQ(ev.spent_seconds(), 1.2);
  EXPECT_DOUBLE_EQ(ev.budget_spent_fraction(), 0.5);
}

TEST(Evaluator, RepeatsAreFree) {
  const auto cache = testing::values_cache({5, 6, 7}, {0.5, 0.7, 1.0});
  BudgetedEvaluator ev(cache, 10.0, 0, 0);
  const double first = ev.evaluate(Configuration{2});
  const double spent = ev.spent_seconds();
  EXPECT_EQ(ev.evaluate(Configuration{2}), first);
  EXPECT_EQ(ev.spent_seconds(), spent);
  ASSERT_EQ(ev.trace().events.size(), 2u);
  EXPECT_TRUE(ev.trace().events[0].fresh);
  EXPECT_FALSE(ev.trace().events[1].fresh);
  EXPECT_EQ(ev.trace().events[1].completion_time, ev.trace().events[0].completion_time);
  EXPECT_TRUE(ev.seen(Configuration{2}));
  EXPECT_FALSE(ev.seen(Configuration{0}));
  EXPECT_EQ(ev.distinct_evaluated(), 1u);
}

TEST(Evaluator, RejectsInvalidConfigurations) {
  const auto cache = parse_cache(testing::xy_cache_json());
  BudgetedEvaluator ev(cache, 10.0, 0, 0);
  EXPECT_THROW(ev.evaluate(Configuration{2, 2}), InvalidConfiguration);
  EXPECT_THROW(ev.evaluate(Configuration{0, 5}), InvalidConfiguration);
  EXPECT_THROW(BudgetedEvaluator(cache, 0.0, 0, 0), UsageError);
}

TEST(Evaluator, FractionMayExceedOne) {
  const auto cache = testing::values_cache({5, 6}, {1.0, 1.5});
  BudgetedEvaluator ev(cache, 2.4, 0, 0);
  ev.evaluate(Configuration{0});
  EXPECT_FALSE(ev.done());
  ev.evaluate(Configuration{1});
  EXPECT_DOUBLE_EQ(ev.budget_spent_fraction(), 2.5 / 2.4);
  EXPECT_TRUE(ev.done());
}

TEST(Trace, BestSoFarExamples) {
  Trace t;
  t.events = {TraceEvent{0.5, Configuration{0}, 9.0, true}, TraceEvent{1.2, Configuration{1}, 7.0, true}};
  EXPECT_EQ(best_so_far_at(t, 1.0), 9.0);
  EXPECT_EQ(best_so_far_at(t, 1.2), 7.0);
  EXPECT_FALSE(best_so_far_at(t, 0.4).has_value());
  const auto series = best_so_far_series(t, std::vector<double>{0.4, 1.0, 1.2, 5.0});
  EXPECT_FALSE(series[0].has_value());
  EXPECT_EQ(series[1], 9.0);
  EXPECT_EQ(series[2], 7.0);
  EXPECT_EQ(series[3], 7.0);
}

TEST(Trace, SeedDerivation) {
  EXPECT_EQ(derive_seed(0, 0), 0u);
  EXPECT_EQ(derive_seed(5, 1), 5u ^ 0x9E3779B97F4A7C15ULL);
  EXPECT_EQ(derive_seed(7, 3), 7u ^ (3ULL * 0x9E3779B97F4A7C15ULL));
}

TEST(RunOptimizer, SingleValidConfiguration) {
  const auto cache = testing::values_cache({42});
  for (const auto& name : all_algorithms()) {
    const Trace t = run_optimizer(AlgorithmSpec::parse(name), cache, 3.0, 1);
    ASSERT_FALSE(t.events.empty()) << name;
    for (const auto& e : t.events) {
      EXPECT_EQ(e.objective, 42.0);
    }
  }
}

TEST(RunOptimizer, DeterministicBySeed) {
  const auto cache = synth_cache(SynthKind::Rugged, 3, 5, 2);
  const double budget = 0.3 * testing::total_cost(cache);
  for (const auto& name : all_algorithms()) {
    const auto spec = AlgorithmSpec::parse(name);
    EXPECT_EQ(serialize(run_optimizer(spec, cache, budget, 17, 3, 9)),
              serialize(run_optimizer(spec, cache, budget, 17, 3, 9)))
        << name;
    EXPECT_NE(serialize(run_optimizer(spec, cache, budget, 17, 3, 9)),
              serialize(run_optimizer(spec, cache, budget, 18, 3, 9)))
        << name;
  }
}

// Property: every trace respects the evaluator contract.
TEST(RunOptimizerProperty, TracesRespectTheContract) {
  const std::vector<TuningCache> caches = {synth_cache(SynthKind::Bowl, 2, 5, 1),
                                           synth_cache(SynthKind::Rugged, 3, 6, 7),
                                           synth_cache(SynthKind::UniformRandom, 3, 5, 4),
                                           parse_cache(testing::xy_cache_json())};
  for (const auto& cache : caches) {
    const double optimum = cache.stats().optimum;
    for (double share : {0.1, 0.5, 1.5}) {
      const double budget = share * testing::total_cost(cache);
      for (const auto& name : all_algorithms()) {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
          const Trace t = run_optimizer(AlgorithmSpec::parse(name), cache, budget, seed);
          ASSERT_FALSE(t.events.empty());
          double spent = 0.0;
          double best = std::numeric_limits<double>::infinity();
          double prev_time = 0.0;
          std::set<Configuration> distinct;
          const std::size_t stride = std::max<std::size_t>(1, t.events.size() / 200);
          for (std::size_t i = 0; i < t.events.size(); ++i) {
            const auto& e = t.events[i];
            const auto pos = cache.space().position(e.config);
            ASSERT_TRUE(pos.has_value()) << name;
            EXPECT_EQ(e.objective, cache.objective_at(*pos));
            EXPECT_GE(e.objective, optimum);
            EXPECT_GE(e.completion_time, prev_time);
            EXPECT_LT(prev_time, budget) << name << ": evaluation started after the budget ran out";
            if (e.fresh) {
              EXPECT_TRUE(distinct.insert(e.config).second);
              spent += cache.cost_at(*pos);
              EXPECT_EQ(e.completion_time, spent);
            } else {
              EXPECT_TRUE(distinct.contains(e.config));
              EXPECT_EQ(e.completion_time, prev_time);
            }
            prev_time = e.completion_time;
            best = std::min(best, e.objective);
            // the last event at a completion time carries the best-so-far there
            const bool last_at_time = i + 1 == t.events.size() || t.events[i + 1].completion_time > e.completion_time;
            if (last_at_time && i % stride == 0) {
              EXPECT_EQ(*best_so_far_at(t, e.completion_time), best);
            }
          }
          EXPECT_GE(*best_so_far_at(t, budget + 1e9), optimum);
          const bool exhausted = distinct.size() == cache.space().constrained_size();
          std::size_t trailing_repeats = 0;
          while (trailing_repeats < t.events.size() && !t.events[t.events.size() - 1 - trailing_repeats].fresh) {
            ++trailing_repeats;
          }
          const bool stalled = trailing_repeats >= BudgetedEvaluator::kDefaultRepeatLimit;
          EXPECT_TRUE(spent >= budget || exhausted || stalled) << name;
        }
      }
    }
  }
}

TEST(RunOptimizer, RandomSearchNeverRepeatsAndExhausts) {
  const auto cache = synth_cache(SynthKind::UniformRandom, 2, 6, 5);
  const Trace t = run_optimizer(AlgorithmSpec::parse("random_search"), cache, 1e6, 3);
  std::set<Configuration> seen;
  for (const auto& e : t.events) {
    EXPECT_TRUE(e.fresh);
    EXPECT_TRUE(seen.insert(e.config).second);
  }
  EXPECT_EQ(seen.size(), 36u);
  EXPECT_EQ(*best_so_far_at(t, 1e6), cache.stats().optimum);
}

TEST(RunOptimizer, UnknownNamesAndHyperparameters) {
  EXPECT_THROW(AlgorithmSpec::parse("nelder_mead"), UnknownAlgorithm);
  EXPECT_THROW(AlgorithmSpec::parse("hybrid_vndx,kk=3"), UnknownHyperparameter);
  EXPECT_THROW(AlgorithmSpec::parse("hybrid_vndx,k=abc"), UsageError);
  const auto spec = AlgorithmSpec::parse("hybrid_vndx,k=3,t0=2.5");
  EXPECT_EQ(spec.label(), "hybrid_vndx,k=3,t0=2.5");
  EXPECT_EQ(AlgorithmSpec::hyperparameters(spec)["k"], 3.0);
  EXPECT_EQ(AlgorithmSpec::hyperparameters(spec)["pool_size"], 8.0);
}

} // namespace
} // namespace atbench
