#ifndef ATBENCH_CACHE_HPP
#define ATBENCH_CACHE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "atbench/error.hpp"
#include "atbench/random.hpp"
#include "atbench/space.hpp"
#include "atbench/value.hpp"

namespace atbench {

enum class Direction { Min, Max };

/// Identifies one (kernel, device, input) measurement set and its objective.
struct CacheMetadata {
  std::string kernel_name;
  std::string device_name;
  std::string input_id;
  std::string objective_name = "time";
  Direction objective_direction = Direction::Min;
  std::string objective_unit = "ms";

  /// Stable identifier used in reports and file names.
  std::string id() const { return kernel_name + "__" + device_name + "__" + input_id; }

  friend bool operator==(const CacheMetadata&, const CacheMetadata&) = default;
};

/// One measured configuration. `objective` is stored as measured (not
/// direction-normalized) and is absent exactly when the entry is invalid.
struct CacheEntry {
  Configuration config;
  bool valid = true;
  std::optional<double> objective;
  double eval_cost_seconds = 0.0;

  friend bool operator==(const CacheEntry&, const CacheEntry&) = default;
};

/// Summary statistics over the valid entries, in minimization form.
struct SpaceStats {
  double optimum = 0.0;
  double median = 0.0;
  double mean_eval_cost = 0.0;
  std::vector<double> value_distribution;  // ascending
};

/// An exhaustive measurement cache for one search space. Immutable once
/// built; safe to share between concurrent runs.
///
/// Objectives with direction "max" are negated internally, so every value
/// returned by objective_at() and stats() is to be minimized.
class TuningCache {
public:
  /// Validates exhaustiveness and constraint consistency of `entries`.
  static TuningCache from_parts(CacheMetadata metadata, std::shared_ptr<const SearchSpace> space,
                                std::vector<CacheEntry> entries) {
    TuningCache c;
    c.metadata_ = std::move(metadata);
    c.space_ = std::move(space);
    const SearchSpace& sp = *c.space_;
    std::sort(entries.begin(), entries.end(),
              [](const CacheEntry& a, const CacheEntry& b) { return a.config < b.config; });
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (entries[i].config == entries[i - 1].config) {
        throw DuplicateEntry("duplicate entry for configuration " + describe(sp, entries[i].config));
      }
    }
    c.objective_.assign(sp.constrained_size(), 0.0);
    c.cost_.assign(sp.constrained_size(), 0.0);
    std::vector<bool> seen(sp.constrained_size(), false);
    for (const auto& e : entries) {
      if (!sp.in_range(e.config)) {
        throw FormatError("entry configuration does not fit the parameter domains");
      }
      const bool satisfied = sp.satisfies_constraints(e.config);
      if (e.valid != satisfied) {
        throw ConstraintMismatch("entry " + describe(sp, e.config) + " is marked " +
                                 (e.valid ? "valid but violates" : "invalid but satisfies") +
                                 " the constraints");
      }
      if (e.valid) {
        if (!e.objective || !std::isfinite(*e.objective)) {
          throw FormatError("valid entry " + describe(sp, e.config) + " lacks a finite objective");
        }
        if (!(e.eval_cost_seconds > 0.0) || !std::isfinite(e.eval_cost_seconds)) {
          throw FormatError("valid entry " + describe(sp, e.config) +
                            " needs a positive eval_cost_seconds");
        }
        const std::size_t pos = *sp.position(e.config);
        seen[pos] = true;
        c.objective_[pos] =
            c.metadata_.objective_direction == Direction::Max ? -*e.objective : *e.objective;
        c.cost_[pos] = e.eval_cost_seconds;
      } else {
        if (e.objective) {
          throw FormatError("invalid entry " + describe(sp, e.config) + " carries an objective");
        }
        if (e.eval_cost_seconds < 0.0) {
          throw FormatError("entry " + describe(sp, e.config) + " has a negative eval_cost_seconds");
        }
      }
    }
    for (std::size_t pos = 0; pos < seen.size(); ++pos) {
      if (!seen[pos]) {
        throw MissingEntry("no measurement for valid configuration " +
                           describe(sp, sp.valid_set()[pos]));
      }
    }
    c.entries_ = std::move(entries);
    c.stats_ = compute_stats(c.objective_, c.cost_);
    return c;
  }

  const CacheMetadata& metadata() const { return metadata_; }
  const SearchSpace& space() const { return *space_; }
  std::shared_ptr<const SearchSpace> shared_space() const { return space_; }
  const std::vector<CacheEntry>& entries() const { return entries_; }
  const SpaceStats& stats() const { return stats_; }

  /// Minimization-form objective of the valid configuration at `pos` in
  /// space().valid_set().
  double objective_at(std::size_t pos) const { return objective_[pos]; }
  double cost_at(std::size_t pos) const { return cost_[pos]; }

  friend bool operator==(const TuningCache& a, const TuningCache& b) {
    if (!(a.metadata_ == b.metadata_) || a.entries_ != b.entries_ ||
        a.space_->domains() != b.space_->domains() ||
        a.space_->constraints().size() != b.space_->constraints().size()) {
      return false;
    }
    for (std::size_t i = 0; i < a.space_->constraints().size(); ++i) {
      if (a.space_->constraints()[i].source() != b.space_->constraints()[i].source()) {
        return false;
      }
    }
    return true;
  }

  static std::string describe(const SearchSpace& sp, const Configuration& c) {
    std::string out = "[";
    for (std::size_t d = 0; d < c.size(); ++d) {
      if (d != 0) {
        out += ", ";
      }
      out += sp.domains()[d].name() + "=";
      out += c[d] < sp.domains()[d].size() ? atbench::to_string(sp.domains()[d][c[d]]) : "?";
    }
    return out + "]";
  }

private:
  static SpaceStats compute_stats(const std::vector<double>& objective, const std::vector<double>& cost) {
    SpaceStats s;
    s.value_distribution = objective;
    std::sort(s.value_distribution.begin(), s.value_distribution.end());
    const auto& v = s.value_distribution;
    const std::size_t n = v.size();
    s.optimum = v.front();
    s.median = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    s.mean_eval_cost = std::accumulate(cost.begin(), cost.end(), 0.0) / static_cast<double>(n);
    return s;
  }

  CacheMetadata metadata_;
  std::shared_ptr<const SearchSpace> space_;
  std::vector<CacheEntry> entries_;
  std::vector<double> objective_;
  std::vector<double> cost_;
  SpaceStats stats_;
};

inline const SpaceStats& space_stats(const TuningCache& cache) { return cache.stats(); }

// ---------------------------------------------------------------------------
// JSON cache format

inline constexpr const char* kCacheSchemaVersion = "1.0";

namespace detail {

inline Value value_from_json(const nlohmann::json& j) {
  if (j.is_boolean()) {
    return j.get<bool>();
  }
  if (j.is_number_integer()) {
    return j.get<std::int64_t>();
  }
  if (j.is_number_float()) {
    return j.get<double>();
  }
  if (j.is_string()) {
    return j.get<std::string>();
  }
  throw FormatError("parameter values must be numbers, booleans or strings, got " + j.dump());
}

inline nlohmann::ordered_json value_to_json(const Value& v) {
  return std::visit([](const auto& x) { return nlohmann::ordered_json(x); }, v);
}

template <typename Json>
const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw FormatError(std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

template <typename Json>
std::string string_field(const Json& j, const char* name) {
  const auto& f = field(j, name);
  if (!f.is_string()) {
    throw FormatError(std::string("field '") + name + "' must be a string");
  }
  return f.template get<std::string>();
}

} // namespace detail

/// Parses the JSON cache document in `text`.
inline TuningCache parse_cache(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("cache is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw FormatError("cache document must be a JSON object");
  }
  const std::string version = detail::string_field(doc, "schema_version");
  if (version != kCacheSchemaVersion) {
    throw SchemaVersionMismatch("cache schema_version '" + version + "', expected '" +
                                kCacheSchemaVersion + "'");
  }
  CacheMetadata meta;
  const auto& m = detail::field(doc, "metadata");
  meta.kernel_name = detail::string_field(m, "kernel_name");
  meta.device_name = detail::string_field(m, "device_name");
  meta.input_id = detail::string_field(m, "input_id");
  const auto& obj = detail::field(m, "objective");
  meta.objective_name = detail::string_field(obj, "name");
  const std::string dir = detail::string_field(obj, "direction");
  if (dir != "min" && dir != "max") {
    throw FormatError("objective direction must be \"min\" or \"max\", got \"" + dir + "\"");
  }
  meta.objective_direction = dir == "max" ? Direction::Max : Direction::Min;
  meta.objective_unit = detail::string_field(obj, "unit");

  std::vector<ParamDomain> domains;
  const auto& params = detail::field(doc, "parameters");
  if (!params.is_array()) {
    throw FormatError("'parameters' must be an array");
  }
  for (const auto& p : params) {
    const auto& vals = detail::field(p, "values");
    if (!vals.is_array()) {
      throw FormatError("parameter 'values' must be an array");
    }
    std::vector<Value> values;
    for (const auto& v : vals) {
      values.push_back(detail::value_from_json(v));
    }
    domains.emplace_back(detail::string_field(p, "name"), std::move(values));
  }
  std::vector<std::string> constraints;
  const auto& cs = detail::field(doc, "constraints");
  if (!cs.is_array()) {
    throw FormatError("'constraints' must be an array");
  }
  for (const auto& c : cs) {
    if (!c.is_string()) {
      throw FormatError("constraints must be strings");
    }
    constraints.push_back(c.get<std::string>());
  }
  auto space = std::make_shared<const SearchSpace>(SearchSpace::build(std::move(domains), constraints));

  std::vector<CacheEntry> entries;
  const auto& es = detail::field(doc, "entries");
  if (!es.is_array()) {
    throw FormatError("'entries' must be an array");
  }
  entries.reserve(es.size());
  for (const auto& e : es) {
    const auto& cfg = detail::field(e, "config");
    if (!cfg.is_array() || cfg.size() != space->dims()) {
      throw FormatError("entry config must list one value per parameter: " + cfg.dump());
    }
    std::vector<Value> values;
    for (const auto& v : cfg) {
      values.push_back(detail::value_from_json(v));
    }
    auto config = space->from_values(values);
    if (!config) {
      throw FormatError("entry config " + cfg.dump() + " uses a value outside its parameter domain");
    }
    CacheEntry entry;
    entry.config = std::move(*config);
    const auto& valid = detail::field(e, "valid");
    if (!valid.is_boolean()) {
      throw FormatError("entry 'valid' must be a boolean");
    }
    entry.valid = valid.get<bool>();
    const auto& objective = detail::field(e, "objective");
    if (objective.is_number()) {
      entry.objective = objective.get<double>();
    } else if (!objective.is_null()) {
      throw FormatError("entry 'objective' must be a number or null");
    }
    const auto& cost = detail::field(e, "eval_cost_seconds");
    if (!cost.is_number()) {
      throw FormatError("entry 'eval_cost_seconds' must be a number");
    }
    entry.eval_cost_seconds = cost.get<double>();
    entries.push_back(std::move(entry));
  }
  return TuningCache::from_parts(std::move(meta), std::move(space), std::move(entries));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw UsageError("cannot open '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline TuningCache load_cache(const std::string& path) { return parse_cache(read_file(path)); }

/// Serializes `cache`; entries are emitted in lexicographic index order.
inline std::string write_cache_string(const TuningCache& cache) {
  using ojson = nlohmann::ordered_json;
  const auto& meta = cache.metadata();
  const SearchSpace& sp = cache.space();
  ojson doc;
  doc["schema_version"] = kCacheSchemaVersion;
  doc["metadata"] = {
      {"kernel_name", meta.kernel_name},
      {"device_name", meta.device_name},
      {"input_id", meta.input_id},
      {"objective",
       {{"name", meta.objective_name},
        {"direction", meta.objective_direction == Direction::Max ? "max" : "min"},
        {"unit", meta.objective_unit}}}};
  ojson params = ojson::array();
  for (const auto& d : sp.domains()) {
    ojson values = ojson::array();
    for (const auto& v : d.values()) {
      values.push_back(detail::value_to_json(v));
    }
    params.push_back({{"name", d.name()}, {"values", std::move(values)}});
  }
  doc["parameters"] = std::move(params);
  ojson constraints = ojson::array();
  for (const auto& c : sp.constraints()) {
    constraints.push_back(c.source());
  }
  doc["constraints"] = std::move(constraints);
  ojson entries = ojson::array();
  for (const auto& e : cache.entries()) {
    ojson cfg = ojson::array();
    for (const auto& v : sp.values_of(e.config)) {
      cfg.push_back(detail::value_to_json(v));
    }
    entries.push_back({{"config", std::move(cfg)},
                       {"valid", e.valid},
                       {"objective", e.objective ? ojson(*e.objective) : ojson(nullptr)},
                       {"eval_cost_seconds", e.eval_cost_seconds}});
  }
  doc["entries"] = std::move(entries);
  return doc.dump(1) + "\n";
}

inline void write_cache(const TuningCache& cache, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw UsageError("cannot write '" + path + "'");
  }
  out << write_cache_string(cache);
}

// ---------------------------------------------------------------------------
// Synthetic caches

enum class SynthKind { Bowl, Rugged, UniformRandom };

inline std::string_view to_string(SynthKind k) {
  switch (k) {
  case SynthKind::Bowl: return "bowl";
  case SynthKind::Rugged: return "rugged";
  case SynthKind::UniformRandom: return "uniform_random";
  }
  return "?";
}

inline SynthKind parse_synth_kind(std::string_view s) {
  if (s == "bowl") return SynthKind::Bowl;
  if (s == "rugged") return SynthKind::Rugged;
  if (s == "uniform_random") return SynthKind::UniformRandom;
  throw UsageError("unknown synthetic kind '" + std::string(s) + "' (bowl, rugged, uniform_random)");
}

inline constexpr std::uint64_t kMaxSynthCombinations = 10'000'000;

/// Index of the bowl minimum along every dimension.
inline Index bowl_center(int points_per_dim) { return static_cast<Index>((points_per_dim - 1) / 2); }

/// Builds a reproducible synthetic cache over `dims` integer parameters
/// p0..p{dims-1}, each taking values 0..points_per_dim-1.
///  - bowl: 1 + sum_d (idx_d - center)^2, unique minimum at the center.
///  - rugged: bowl times a seeded factor in [1, 3]; a generated modular
///    constraint removes roughly a tenth of the configurations.
///  - uniform_random: i.i.d. values in [1, 100].
/// Evaluation costs are drawn from [0.5, 2.0] seconds.
inline TuningCache synth_cache(SynthKind kind, int dims, int points_per_dim, std::uint64_t seed) {
  if (dims < 1 || points_per_dim < 2) {
    throw UsageError("synthetic cache needs dims >= 1 and points >= 2");
  }
  std::uint64_t total = 1;
  for (int d = 0; d < dims; ++d) {
    total *= static_cast<std::uint64_t>(points_per_dim);
    if (total > kMaxSynthCombinations) {
      throw TooLarge("synthetic cache with " + std::to_string(points_per_dim) + "^" +
                     std::to_string(dims) + " combinations exceeds the enumeration limit of " +
                     std::to_string(kMaxSynthCombinations));
    }
  }
  Rng rng(seed);
  std::vector<ParamDomain> domains;
  for (int d = 0; d < dims; ++d) {
    std::vector<Value> values;
    for (int v = 0; v < points_per_dim; ++v) {
      values.emplace_back(std::int64_t{v});
    }
    domains.emplace_back("p" + std::to_string(d), std::move(values));
  }
  std::vector<std::string> constraints;
  if (kind == SynthKind::Rugged) {
    static constexpr std::int64_t coprime[] = {1, 3, 7, 9};
    std::string expr = "(";
    for (int d = 0; d < dims; ++d) {
      expr += (d ? " + " : "") + std::to_string(coprime[uniform_index(rng, 4)]) + "*p" + std::to_string(d);
    }
    expr += " + " + std::to_string(uniform_index(rng, 10)) + ") % 10 != 0";
    constraints.push_back(std::move(expr));
  }
  auto space = std::make_shared<const SearchSpace>(SearchSpace::build(std::move(domains), constraints));

  const Index center = bowl_center(points_per_dim);
  std::uniform_real_distribution<double> noise(1.0, 3.0), uniform(1.0, 100.0), cost(0.5, 2.0);
  std::vector<CacheEntry> entries;
  entries.reserve(space->constrained_size());
  for (const auto& c : space->valid_set()) {
    double bowl = 1.0;
    for (std::size_t d = 0; d < c.size(); ++d) {
      const double off = static_cast<double>(c[d]) - static_cast<double>(center);
      bowl += off * off;
    }
    double value = bowl;
    if (kind == SynthKind::Rugged) {
      value = bowl * noise(rng);
    } else if (kind == SynthKind::UniformRandom) {
      value = uniform(rng);
    }
    entries.push_back(CacheEntry{c, true, value, cost(rng)});
  }
  if (kind == SynthKind::Rugged) {
    // list the excluded points too, so the file is exhaustive over the product
    Configuration c;
    c.indices.assign(static_cast<std::size_t>(dims), 0);
    for (std::uint64_t n = 0; n < space->cartesian_size(); ++n) {
      if (!space->is_valid(c)) {
        entries.push_back(CacheEntry{c, false, std::nullopt, 0.0});
      }
      for (std::size_t d = c.size(); d-- > 0;) {
        if (++c[d] < static_cast<Index>(points_per_dim)) {
          break;
        }
        c[d] = 0;
      }
    }
  }
  CacheMetadata meta;
  meta.kernel_name = "synthetic_" + std::string(to_string(kind));
  meta.device_name = "synthetic";
  meta.input_id = "d" + std::to_string(dims) + "_p" + std::to_string(points_per_dim) + "_s" +
                  std::to_string(seed);
  return TuningCache::from_parts(std::move(meta), std::move(space), std::move(entries));
}

// ---------------------------------------------------------------------------
// Validation against expected characteristics

struct ExpectedCounts {
  std::uint64_t cartesian_size = 0;
  std::uint64_t constrained_size = 0;
  std::size_t dims = 0;
};

struct ValidationReport {
  std::uint64_t cartesian_size = 0;
  std::uint64_t constrained_size = 0;
  std::size_t dims = 0;
  std::vector<std::string> flags;

  bool ok() const { return flags.empty(); }
};

inline ValidationReport validate_cache(const TuningCache& cache,
                                       const std::optional<ExpectedCounts>& expected = std::nullopt) {
  ValidationReport r;
  r.cartesian_size = cache.space().cartesian_size();
  r.constrained_size = cache.space().constrained_size();
  r.dims = cache.space().dims();
  if (expected) {
    auto check = [&](const char* what, std::uint64_t got, std::uint64_t want) {
      if (got != want) {
        r.flags.push_back(std::string(what) + " is " + std::to_string(got) + ", expected " +
                          std::to_string(want));
      }
    };
    check("cartesian size", r.cartesian_size, expected->cartesian_size);
    check("constrained size", r.constrained_size, expected->constrained_size);
    check("dimensions", r.dims, expected->dims);
  }
  return r;
}

} // namespace atbench

#endif // ATBENCH_CACHE_HPP
