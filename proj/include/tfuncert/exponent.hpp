#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "tfuncert/errors.hpp"

namespace tfuncert {

// A Lebesgue-type exponent in (0, ∞]. Infinity is carried as a flag so that
// formulas can treat it symbolically (1/∞ = 0, x^{1/∞} = 1) instead of
// pushing a huge float through pow().
class Exponent {
 public:
  // Implicit so that plain doubles read naturally at call sites.
  Exponent(double value) : value_(value) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(value) || value <= 0.0) {
      throw DomainError("exponent must lie in (0, inf], got " + std::to_string(value));
    }
    infinite_ = std::isinf(value);
  }

  static Exponent infinity() { return Exponent(std::numeric_limits<double>::infinity()); }

  [[nodiscard]] bool is_infinite() const { return infinite_; }
  [[nodiscard]] bool is_finite() const { return !infinite_; }

  // +inf when infinite; callers that need symbolic handling check is_infinite() first.
  [[nodiscard]] double value() const { return value_; }

  [[nodiscard]] double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

  [[nodiscard]] std::string to_string() const;

 private:
  double value_;
  bool infinite_ = false;
};

// Parses "2", "1.5", "inf", "infinity".
Exponent parse_exponent(const std::string& text);

}  // namespace tfuncert
