#ifndef ATBENCH_DOMAIN_HPP
#define ATBENCH_DOMAIN_HPP

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "atbench/error.hpp"
#include "atbench/value.hpp"

namespace atbench {

inline bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
    return false;
  }
  for (char ch : s) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) {
      return false;
    }
  }
  return true;
}

/// The ordered value list of one tunable parameter. Value order defines
/// index adjacency, so it is preserved exactly as declared.
class ParamDomain {
public:
  ParamDomain(std::string name, std::vector<Value> values)
      : name_(std::move(name)), values_(std::move(values)) {
    if (!is_identifier(name_)) {
      throw FormatError("parameter name '" + name_ + "' is not an identifier");
    }
    if (values_.empty()) {
      throw FormatError("parameter '" + name_ + "' has no values");
    }
    kind_ = classify();
    for (std::size_t i = 0; i < values_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (same_value(values_[i], values_[j])) {
          throw FormatError("parameter '" + name_ + "' lists value " +
                            atbench::to_string(values_[i]) + " twice");
        }
      }
    }
  }

  const std::string& name() const { return name_; }
  const std::vector<Value>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  ValueKind kind() const { return kind_; }
  const Value& operator[](std::size_t i) const { return values_[i]; }

  std::optional<Index> index_of(const Value& v) const {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (same_value(values_[i], v)) {
        return static_cast<Index>(i);
      }
    }
    return std::nullopt;
  }

  friend bool operator==(const ParamDomain&, const ParamDomain&) = default;

private:
  ValueKind classify() const {
    bool any_int = false, any_real = false, any_bool = false, any_str = false;
    for (const auto& v : values_) {
      any_int |= std::holds_alternative<std::int64_t>(v);
      any_real |= std::holds_alternative<double>(v);
      any_bool |= std::holds_alternative<bool>(v);
      any_str |= std::holds_alternative<std::string>(v);
    }
    const int kinds = int(any_int || any_real) + int(any_bool) + int(any_str);
    if (kinds != 1) {
      throw FormatError("parameter '" + name_ + "' mixes value kinds");
    }
    if (any_str) {
      return ValueKind::String;
    }
    if (any_bool) {
      return ValueKind::Boolean;
    }
    return any_real ? ValueKind::Real : ValueKind::Integer;
  }

  std::string name_;
  std::vector<Value> values_;
  ValueKind kind_ = ValueKind::Integer;
};

} // namespace atbench

#endif // ATBENCH_DOMAIN_HPP
