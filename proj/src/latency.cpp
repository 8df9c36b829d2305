#include "imitate/latency.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace imitate {

LatencyFunction LatencyFunction::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) {
    throw std::invalid_argument("latency polynomial needs at least one coefficient");
  }
  bool any_positive = false;
  for (double a : coefficients) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("latency polynomial coefficients must be finite and >= 0");
    }
    if (a > 0.0) any_positive = true;
  }
  if (!any_positive) {
    throw std::invalid_argument("latency function must be positive for congestion > 0");
  }
  return LatencyFunction(Kind::polynomial, std::move(coefficients));
}

LatencyFunction LatencyFunction::table(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("latency table needs at least one entry");
  }
  if (!(values[0] >= 0.0) || !std::isfinite(values[0])) {
    throw std::invalid_argument("latency table entries must be finite and >= 0");
  }
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (!std::isfinite(values[k]) || values[k] < values[k - 1]) {
      throw std::invalid_argument("latency table must be non-decreasing");
    }
    if (!(values[k] > 0.0)) {
      throw std::invalid_argument("latency table must be positive for congestion > 0");
    }
  }
  return LatencyFunction(Kind::table, std::move(values));
}

LatencyFunction LatencyFunction::monomial(double a, int degree) {
  if (degree < 0) throw std::invalid_argument("monomial degree must be >= 0");
  std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1, 0.0);
  coeffs.back() = a;
  return polynomial(std::move(coeffs));
}

double LatencyFunction::eval(std::int64_t k) const {
  if (k < 0) throw std::out_of_range("latency argument " + std::to_string(k) + " < 0");
  if (kind_ == Kind::table) {
    if (static_cast<std::size_t>(k) >= data_.size()) {
      throw std::out_of_range("latency table argument " + std::to_string(k) +
                              " exceeds max congestion " + std::to_string(data_.size() - 1));
    }
    return data_[static_cast<std::size_t>(k)];
  }
  // Horner; avoids std::pow so evaluation is bit-reproducible.
  const double x = static_cast<double>(k);
  double value = 0.0;
  for (std::size_t i = data_.size(); i-- > 0;) {
    value = value * x + data_[i];
  }
  return value;
}

double LatencyFunction::eval_clamped(std::int64_t k) const {
  if (kind_ == Kind::table && k >= static_cast<std::int64_t>(data_.size())) {
    return data_.back();
  }
  return eval(k);
}

int LatencyFunction::degree() const {
  if (kind_ != Kind::polynomial) {
    throw std::logic_error("degree() requires a polynomial latency function");
  }
  for (std::size_t i = data_.size(); i-- > 0;) {
    if (data_[i] != 0.0) return static_cast<int>(i);
  }
  return 0;  // unreachable: validated non-zero
}

const std::vector<double>& LatencyFunction::coefficients() const {
  if (kind_ != Kind::polynomial) {
    throw std::logic_error("coefficients() requires a polynomial latency function");
  }
  return data_;
}

const std::vector<double>& LatencyFunction::values() const {
  if (kind_ != Kind::table) {
    throw std::logic_error("values() requires a table latency function");
  }
  return data_;
}

std::int64_t LatencyFunction::table_max_arg() const {
  if (kind_ != Kind::table) {
    throw std::logic_error("table_max_arg() requires a table latency function");
  }
  return static_cast<std::int64_t>(data_.size()) - 1;
}

}  // namespace imitate
