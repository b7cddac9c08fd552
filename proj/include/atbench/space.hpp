#ifndef ATBENCH_SPACE_HPP
#define ATBENCH_SPACE_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "atbench/constraint.hpp"
#include "atbench/domain.hpp"
#include "atbench/error.hpp"
#include "atbench/random.hpp"
#include "atbench/value.hpp"

namespace atbench {

/// Neighborhood structures, ordered from coarse to strict.
///  - Hamming: exactly one parameter changes, to any other value.
///  - Adjacent: every parameter index moves by at most one, at least one moves.
///  - StrictlyAdjacent: exactly one parameter index moves by exactly one.
/// Indices never wrap around.
enum class NeighborhoodKind : std::uint8_t { Hamming = 0, Adjacent = 1, StrictlyAdjacent = 2 };

inline constexpr std::array<NeighborhoodKind, 3> kNeighborhoodKinds = {
    NeighborhoodKind::Hamming, NeighborhoodKind::Adjacent, NeighborhoodKind::StrictlyAdjacent};

inline std::string_view to_string(NeighborhoodKind k) {
  switch (k) {
  case NeighborhoodKind::Hamming: return "hamming";
  case NeighborhoodKind::Adjacent: return "adjacent";
  case NeighborhoodKind::StrictlyAdjacent: return "strictly_adjacent";
  }
  return "?";
}

/// Number of positions at which `a` and `b` differ.
inline std::size_t hamming_distance(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("hamming_distance: configurations of length " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
  std::size_t n = 0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    n += a[d] != b[d];
  }
  return n;
}

/// Child taking each position from `a` or `b` with equal probability.
/// The result may be infeasible; callers repair it.
inline Configuration crossover_uniform(const Configuration& a, const Configuration& b, Rng& rng) {
  if (a.size() != b.size()) {
    throw LengthMismatch("crossover_uniform: parents of different length");
  }
  Configuration child = a;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t d = 0; d < a.size(); ++d) {
    if (coin(rng)) {
      child[d] = b[d];
    }
  }
  return child;
}

/// A constrained discrete search space with its valid configurations fully
/// enumerated. Immutable after construction; neighbor queries are memoized
/// behind a mutex, so one instance can serve concurrent runs.
class SearchSpace {
public:
  SearchSpace(std::vector<ParamDomain> domains, std::vector<Constraint> constraints)
      : domains_(std::move(domains)), constraints_(std::move(constraints)),
        memo_(std::make_unique<Memo>()) {
    if (domains_.empty()) {
      throw FormatError("search space needs at least one parameter");
    }
    for (std::size_t i = 0; i < domains_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (domains_[i].name() == domains_[j].name()) {
          throw FormatError("parameter '" + domains_[i].name() + "' declared twice");
        }
      }
    }
    enumerate();
  }

  /// Parses the constraint sources against `domains`, then enumerates.
  static SearchSpace build(std::vector<ParamDomain> domains, const std::vector<std::string>& sources) {
    std::vector<Constraint> cs;
    cs.reserve(sources.size());
    for (const auto& s : sources) {
      cs.push_back(parse_constraint(s, domains));
    }
    return SearchSpace(std::move(domains), std::move(cs));
  }

  std::size_t dims() const { return domains_.size(); }
  const std::vector<ParamDomain>& domains() const { return domains_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Configuration>& valid_set() const { return valid_; }
  std::uint64_t cartesian_size() const { return cartesian_; }
  std::size_t constrained_size() const { return valid_.size(); }

  bool in_range(const Configuration& c) const {
    if (c.size() != domains_.size()) {
      return false;
    }
    for (std::size_t d = 0; d < c.size(); ++d) {
      if (c[d] >= domains_[d].size()) {
        return false;
      }
    }
    return true;
  }

  /// Evaluates every constraint directly, without the enumerated set.
  bool satisfies_constraints(const Configuration& c) const {
    require_in_range(c, "satisfies_constraints");
    return std::all_of(constraints_.begin(), constraints_.end(),
                       [&](const Constraint& k) { return k.holds(c.indices); });
  }

  bool is_valid(const Configuration& c) const {
    require_in_range(c, "is_valid");
    return position_.contains(c);
  }

  /// Position of `c` in valid_set(), if valid.
  std::optional<std::size_t> position(const Configuration& c) const {
    auto it = position_.find(c);
    if (it == position_.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  std::vector<Value> values_of(const Configuration& c) const {
    require_in_range(c, "values_of");
    std::vector<Value> out;
    out.reserve(c.size());
    for (std::size_t d = 0; d < c.size(); ++d) {
      out.push_back(domains_[d][c[d]]);
    }
    return out;
  }

  /// Maps per-parameter values to indices; nullopt if a value is not in its domain.
  std::optional<Configuration> from_values(std::span<const Value> values) const {
    if (values.size() != domains_.size()) {
      return std::nullopt;
    }
    Configuration c;
    c.indices.resize(values.size());
    for (std::size_t d = 0; d < values.size(); ++d) {
      auto i = domains_[d].index_of(values[d]);
      if (!i) {
        return std::nullopt;
      }
      c[d] = *i;
    }
    return c;
  }

  /// Valid neighbors of the valid configuration `c`, excluding `c`, sorted.
  /// The returned reference stays valid for the lifetime of the space.
  const std::vector<Configuration>& neighbors(const Configuration& c, NeighborhoodKind kind) const {
    auto pos = position(c);
    if (!pos) {
      throw InvalidConfiguration("neighbors: " + to_string(c) + " is not a valid configuration");
    }
    const std::uint64_t key = static_cast<std::uint64_t>(*pos) * 3 + static_cast<std::uint64_t>(kind);
    {
      std::lock_guard lock(memo_->mutex);
      auto it = memo_->lists.find(key);
      if (it != memo_->lists.end()) {
        return it->second;
      }
    }
    auto list = compute_neighbors(c, kind);
    std::lock_guard lock(memo_->mutex);
    return memo_->lists.try_emplace(key, std::move(list)).first->second;
  }

  /// Uniform draw from valid_set().
  Configuration random_valid(Rng& rng) const { return valid_[uniform_index(rng, valid_.size())]; }

  /// `c` itself when valid; otherwise the valid configuration nearest in
  /// Hamming distance, ties going to the lexicographically smallest.
  Configuration repair(const Configuration& c) const {
    require_in_range(c, "repair");
    if (position_.contains(c)) {
      return c;
    }
    // distance 1 is the best possible for an invalid point: try it first
    std::optional<Configuration> best;
    Configuration probe = c;
    for (std::size_t d = 0; d < c.size(); ++d) {
      for (Index v = 0; v < domains_[d].size(); ++v) {
        if (v == c[d]) {
          continue;
        }
        probe[d] = v;
        if (position_.contains(probe) && (!best || probe < *best)) {
          best = probe;
        }
      }
      probe[d] = c[d];
    }
    if (best) {
      return *best;
    }
    std::size_t best_dist = std::numeric_limits<std::size_t>::max();
    const Configuration* nearest = nullptr;
    for (const auto& v : valid_) {  // sorted, so the first minimum wins ties
      const std::size_t dist = hamming_distance(c, v);
      if (dist < best_dist) {
        best_dist = dist;
        nearest = &v;
      }
    }
    return *nearest;
  }

private:
  struct Memo {
    std::mutex mutex;
    std::unordered_map<std::uint64_t, std::vector<Configuration>> lists;
  };

  void require_in_range(const Configuration& c, std::string_view what) const {
    if (!in_range(c)) {
      throw UsageError(std::string(what) + ": configuration " + to_string(c) +
                       " does not fit the space's parameter domains");
    }
  }

  void enumerate() {
    cartesian_ = 1;
    for (const auto& d : domains_) {
      if (cartesian_ > std::numeric_limits<std::uint64_t>::max() / d.size()) {
        throw TooLarge("search space Cartesian size exceeds 64 bits");
      }
      cartesian_ *= d.size();
    }
    Configuration c;
    c.indices.assign(domains_.size(), 0);
    for (std::uint64_t n = 0; n < cartesian_; ++n) {
      if (std::all_of(constraints_.begin(), constraints_.end(),
                      [&](const Constraint& k) { return k.holds(c.indices); })) {
        valid_.push_back(c);
      }
      // odometer with the last parameter fastest keeps valid_ sorted
      for (std::size_t d = domains_.size(); d-- > 0;) {
        if (++c[d] < domains_[d].size()) {
          break;
        }
        c[d] = 0;
      }
    }
    if (valid_.empty()) {
      throw EmptySpace("no configuration satisfies the constraints");
    }
    position_.reserve(valid_.size());
    for (std::size_t i = 0; i < valid_.size(); ++i) {
      position_.emplace(valid_[i], i);
    }
  }

  std::vector<Configuration> compute_neighbors(const Configuration& c, NeighborhoodKind kind) const {
    std::vector<Configuration> out;
    const std::size_t dims = c.size();
    switch (kind) {
    case NeighborhoodKind::Hamming: {
      Configuration probe = c;
      for (std::size_t d = 0; d < dims; ++d) {
        for (Index v = 0; v < domains_[d].size(); ++v) {
          if (v == c[d]) {
            continue;
          }
          probe[d] = v;
          if (position_.contains(probe)) {
            out.push_back(probe);
          }
        }
        probe[d] = c[d];
      }
      break;
    }
    case NeighborhoodKind::StrictlyAdjacent: {
      Configuration probe = c;
      for (std::size_t d = 0; d < dims; ++d) {
        if (c[d] > 0) {
          probe[d] = c[d] - 1;
          if (position_.contains(probe)) {
            out.push_back(probe);
          }
        }
        if (c[d] + 1 < domains_[d].size()) {
          probe[d] = c[d] + 1;
          if (position_.contains(probe)) {
            out.push_back(probe);
          }
        }
        probe[d] = c[d];
      }
      break;
    }
    case NeighborhoodKind::Adjacent: {
      // 3^dims offsets versus one pass over the valid set: take the cheaper
      double offsets = 1.0;
      for (std::size_t d = 0; d < dims; ++d) {
        offsets *= 3.0;
      }
      if (offsets - 1.0 <= static_cast<double>(valid_.size())) {
        std::vector<int> delta(dims, -1);
        while (true) {
          bool moved = false, inside = true;
          Configuration probe = c;
          for (std::size_t d = 0; d < dims && inside; ++d) {
            const long v = static_cast<long>(c[d]) + delta[d];
            inside = v >= 0 && v < static_cast<long>(domains_[d].size());
            moved |= delta[d] != 0;
            probe[d] = static_cast<Index>(v);
          }
          if (inside && moved && position_.contains(probe)) {
            out.push_back(std::move(probe));
          }
          std::size_t d = dims;
          while (d-- > 0) {
            if (++delta[d] <= 1) {
              break;
            }
            delta[d] = -1;
          }
          if (d == static_cast<std::size_t>(-1)) {
            break;
          }
        }
      } else {
        for (const auto& v : valid_) {
          bool moved = false, close = true;
          for (std::size_t d = 0; d < dims && close; ++d) {
            close = (v[d] > c[d] ? v[d] - c[d] : c[d] - v[d]) <= 1;
            moved |= v[d] != c[d];
          }
          if (close && moved) {
            out.push_back(v);
          }
        }
      }
      break;
    }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<ParamDomain> domains_;
  std::vector<Constraint> constraints_;
  std::vector<Configuration> valid_;
  std::unordered_map<Configuration, std::size_t, ConfigurationHash> position_;
  std::uint64_t cartesian_ = 0;
  std::unique_ptr<Memo> memo_;
};

} // namespace atbench

#endif // ATBENCH_SPACE_HPP
