#pragma once

#include <cstdint>
#include <vector>

namespace imitate {

// Non-decreasing edge cost function, either a polynomial with non-negative
// coefficients or an explicit value table over integer congestions.
// Every admissible function is strictly positive for arguments > 0.
class LatencyFunction {
 public:
  enum class Kind { polynomial, table };

  // Coefficients a0..ad of a0 + a1*x + ... + ad*x^d. All must be >= 0 and at
  // least one > 0.
  static LatencyFunction polynomial(std::vector<double> coefficients);

  // Values at congestions 0..size-1. Must be non-decreasing, values[0] >= 0,
  // values[k] > 0 for k >= 1.
  static LatencyFunction table(std::vector<double> values);

  static LatencyFunction constant(double c) { return polynomial({c}); }
  static LatencyFunction linear(double a) { return polynomial({0.0, a}); }
  static LatencyFunction monomial(double a, int degree);

  Kind kind() const { return kind_; }

  // Value at integer congestion k. Table kind rejects k outside the stored
  // range; polynomial kind rejects only k < 0.
  double eval(std::int64_t k) const;

  // Like eval but a table lookup past the last entry returns the last entry.
  // Only the one-extra-player projections need this.
  double eval_clamped(std::int64_t k) const;

  // Highest exponent with a non-zero coefficient (polynomial kind only).
  int degree() const;

  const std::vector<double>& coefficients() const;
  const std::vector<double>& values() const;
  std::int64_t table_max_arg() const;

 private:
  LatencyFunction(Kind kind, std::vector<double> data)
      : kind_(kind), data_(std::move(data)) {}

  Kind kind_;
  std::vector<double> data_;  // coefficients or table values
};

}  // namespace imitate
