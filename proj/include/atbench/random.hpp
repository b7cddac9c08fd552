#ifndef ATBENCH_RANDOM_HPP
#define ATBENCH_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>

namespace atbench {

/// Every run owns one of these; generators are never shared between runs.
using Rng = std::mt19937_64;

/// Uniform integer in [0, n). `n` must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

/// Uniform real in [0, 1).
inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Seed of repeated run `run_id` derived from an experiment's master seed.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_id) {
  return master_seed ^ (run_id * 0x9E3779B97F4A7C15ULL);
}

} // namespace atbench

#endif // ATBENCH_RANDOM_HPP
