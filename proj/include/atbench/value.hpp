#ifndef ATBENCH_VALUE_HPP
#define ATBENCH_VALUE_HPP

#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

namespace atbench {

/// A tunable parameter value as it appears in a cache file.
using Value = std::variant<std::int64_t, double, bool, std::string>;

/// Kind of a parameter domain; domains hold values of a single kind,
/// except that integers and reals mix freely as Real.
enum class ValueKind { Integer, Real, Boolean, String };

inline bool is_numeric(const Value& v) {
  return std::holds_alternative<std::int64_t>(v) ||
         std::holds_alternative<double>(v);
}

inline double as_double(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) {
    return static_cast<double>(*i);
  }
  if (const auto* d = std::get_if<double>(&v)) {
    return *d;
  }
  if (const auto* b = std::get_if<bool>(&v)) {
    return *b ? 1.0 : 0.0;
  }
  return 0.0;
}

/// Value equality as used for domain lookups: numbers compare numerically
/// (so 2 and 2.0 are the same value), other kinds compare exactly.
inline bool same_value(const Value& a, const Value& b) {
  if (is_numeric(a) && is_numeric(b)) {
    return as_double(a) == as_double(b);
  }
  return a == b;
}

/// Shortest decimal string that parses back to exactly `x`.
inline std::string format_shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// 17 significant digits, the fixed-width round-trip form used in CSV output.
inline std::string format_full(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string to_string(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_shortest(x);
        } else {
          return std::to_string(x);
        }
      },
      v);
}

using Index = std::uint32_t;

/// One point of a search space: a domain index per parameter, in parameter
/// declaration order. Ordering is lexicographic over the index vector.
struct Configuration {
  std::vector<Index> indices;

  Configuration() = default;
  explicit Configuration(std::vector<Index> idx) : indices(std::move(idx)) {}
  Configuration(std::initializer_list<Index> idx) : indices(idx) {}

  std::size_t size() const { return indices.size(); }
  Index operator[](std::size_t d) const { return indices[d]; }
  Index& operator[](std::size_t d) { return indices[d]; }

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

inline std::string to_string(const Configuration& c) {
  std::string out = "(";
  for (std::size_t d = 0; d < c.size(); ++d) {
    if (d != 0) {
      out += ',';
    }
    out += std::to_string(c[d]);
  }
  out += ')';
  return out;
}

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept {
    // FNV-1a over the index words
    std::uint64_t h = 1469598103934665603ULL;
    for (Index i : c.indices) {
      h ^= i;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

} // namespace atbench

#endif // ATBENCH_VALUE_HPP
