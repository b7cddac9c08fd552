#ifndef ATBENCH_OPTIMIZERS_COMMON_HPP
#define ATBENCH_OPTIMIZERS_COMMON_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "atbench/error.hpp"
#include "atbench/evaluator.hpp"
#include "atbench/random.hpp"
#include "atbench/space.hpp"

namespace atbench {

/// Named numeric hyperparameters with fixed defaults. Overrides may only
/// touch names that have a default.
class Hyperparameters {
public:
  Hyperparameters() = default;
  Hyperparameters(std::initializer_list<std::pair<const std::string, double>> defaults)
      : values_(defaults) {}

  double operator[](const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) {
      throw UnknownHyperparameter("no hyperparameter named '" + name + "'");
    }
    return it->second;
  }

  int integer(const std::string& name) const { return static_cast<int>(std::lround((*this)[name])); }

  void set(const std::string& name, double value) {
    auto it = values_.find(name);
    if (it == values_.end()) {
      std::string known;
      for (const auto& [k, v] : values_) {
        known += (known.empty() ? "" : ", ") + k;
      }
      throw UnknownHyperparameter("unknown hyperparameter '" + name + "' (known: " + known + ")");
    }
    it->second = value;
  }

  void merge(const std::map<std::string, double>& overrides) {
    for (const auto& [k, v] : overrides) {
      set(k, v);
    }
  }

  const std::map<std::string, double>& values() const { return values_; }

private:
  std::map<std::string, double> values_;
};

/// Bounded FIFO of recently visited configurations.
class TabuList {
public:
  explicit TabuList(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
      throw UsageError("tabu capacity must be positive");
    }
  }

  void push(const Configuration& c) {
    entries_.push_back(c);
    if (entries_.size() > capacity_) {
      entries_.pop_front();
    }
  }

  bool contains(const Configuration& c) const {
    return std::find(entries_.begin(), entries_.end(), c) != entries_.end();
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::deque<Configuration>& entries() const { return entries_; }

private:
  std::size_t capacity_;
  std::deque<Configuration> entries_;
};

/// The k lowest-objective distinct configurations seen so far, best first.
/// Among equal objectives the earlier insertion ranks higher.
class EliteHeap {
public:
  struct Elite {
    Configuration config;
    double objective;
  };

  explicit EliteHeap(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
      throw UsageError("elite capacity must be positive");
    }
  }

  void push(const Configuration& c, double objective) {
    for (const auto& e : elites_) {
      if (e.config == c) {
        return;
      }
    }
    // insert after every elite that is no worse, which keeps insertion order on ties
    auto at = std::upper_bound(elites_.begin(), elites_.end(), objective,
                               [](double v, const Elite& e) { return v < e.objective; });
    if (static_cast<std::size_t>(at - elites_.begin()) >= capacity_) {
      return;
    }
    elites_.insert(at, Elite{c, objective});
    if (elites_.size() > capacity_) {
      elites_.pop_back();
    }
  }

  std::size_t size() const { return elites_.size(); }
  const std::vector<Elite>& elites() const { return elites_; }

private:
  std::size_t capacity_;
  std::vector<Elite> elites_;
};

/// Every freshly evaluated (configuration, objective) pair, in order.
struct History {
  struct Record {
    Configuration config;
    double objective;
  };
  std::vector<Record> records;

  void push(const Configuration& c, double objective) { records.push_back(Record{c, objective}); }
  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

/// Mean objective of the k Hamming-nearest history records. Equal distances
/// at the cutoff go to earlier records; an empty history predicts 0.
inline double knn_predict(const History& history, const Configuration& query, std::size_t k) {
  if (k == 0) {
    throw UsageError("knn_predict: k must be at least 1");
  }
  if (history.empty()) {
    return 0.0;
  }
  std::vector<std::pair<std::size_t, std::size_t>> ranked;  // (distance, insertion index)
  ranked.reserve(history.size());
  for (std::size_t i = 0; i < history.size(); ++i) {
    ranked.emplace_back(hamming_distance(history.records[i].config, query), i);
  }
  const std::size_t take = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take), ranked.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) {
    sum += history.records[ranked[i].second].objective;
  }
  return sum / static_cast<double>(take);
}

/// Metropolis acceptance. Draws from `rng` only when delta > 0.
inline bool sa_accept(double delta, double temperature, Rng& rng) {
  if (!(temperature > 0.0)) {
    throw UsageError("sa_accept: temperature must be positive");
  }
  if (delta <= 0.0) {
    return true;
  }
  return uniform01(rng) < std::exp(-delta / temperature);
}

/// Selection weights over the neighborhood kinds, clamped to [0.05, 20].
struct NeighborhoodWeights {
  static constexpr double kMin = 0.05;
  static constexpr double kMax = 20.0;

  std::array<double, 3> w{1.0, 1.0, 1.0};

  double& operator[](NeighborhoodKind k) { return w[static_cast<std::size_t>(k)]; }
  double operator[](NeighborhoodKind k) const { return w[static_cast<std::size_t>(k)]; }

  void scale(NeighborhoodKind k, double factor) {
    auto& x = (*this)[k];
    x = std::clamp(x * factor, kMin, kMax);
  }
};

/// Picks a kind with probability proportional to its weight.
inline NeighborhoodKind roulette_select(const NeighborhoodWeights& weights, Rng& rng) {
  const double total = std::accumulate(weights.w.begin(), weights.w.end(), 0.0);
  const double r = uniform01(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.w.size(); ++i) {
    if (!(weights.w[i] > 0.0)) {
      throw UsageError("roulette_select: weights must be positive");
    }
    acc += weights.w[i];
    if (r < acc) {
      return kNeighborhoodKinds[i];
    }
  }
  return kNeighborhoodKinds.back();
}

/// `count` distinct members of `pool` chosen uniformly, in draw order.
inline std::vector<Configuration> sample_without_replacement(const std::vector<Configuration>& pool,
                                                             std::size_t count, Rng& rng) {
  count = std::min(count, pool.size());
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<Configuration> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + uniform_index(rng, idx.size() - i);
    std::swap(idx[i], idx[j]);
    out.push_back(pool[idx[i]]);
  }
  return out;
}

} // namespace atbench

#endif // ATBENCH_OPTIMIZERS_COMMON_HPP
