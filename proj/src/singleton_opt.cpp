#include "imitate/singleton_opt.hpp"

#include <algorithm>
#include <stdexcept>

#include "imitate/equilibrium.hpp"

namespace imitate {

std::vector<double> linear_coefficients(const CongestionGame& g) {
  if (!g.is_singleton()) {
    throw std::invalid_argument("operation requires a singleton game");
  }
  std::vector<double> coefficients;
  coefficients.reserve(static_cast<std::size_t>(g.num_edges()));
  for (const auto& f : g.edges()) {
    if (f.kind() != LatencyFunction::Kind::polynomial) {
      throw std::invalid_argument("operation requires linear latencies a*x");
    }
    const auto& c = f.coefficients();
    if (c.size() < 2 || c[0] != 0.0 || !(c[1] > 0.0) ||
        std::any_of(c.begin() + 2, c.end(), [](double a) { return a != 0.0; })) {
      throw std::invalid_argument("operation requires linear latencies a*x");
    }
    coefficients.push_back(c[1]);
  }
  return coefficients;
}

FractionalOptimum fractional_optimum(const CongestionGame& g) {
  const auto a = linear_coefficients(g);
  FractionalOptimum opt;
  opt.capacity_sum = 0.0;
  for (double coefficient : a) opt.capacity_sum += 1.0 / coefficient;
  const double n = static_cast<double>(g.num_players());
  opt.load.resize(a.size());
  for (std::size_t e = 0; e < a.size(); ++e) {
    opt.load[e] = n / (opt.capacity_sum * a[e]);
    if (opt.load[e] < 1.0) opt.useless.push_back(static_cast<int>(e));
  }
  return opt;
}

double social_cost(const CongestionGame& g, const GameState& s) {
  if (!g.is_singleton()) {
    throw std::invalid_argument("social cost is defined for singleton games");
  }
  const double n = static_cast<double>(g.num_players());
  double cost = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) {
    const std::int64_t congestion = s.x_edge[static_cast<std::size_t>(e)];
    if (congestion == 0) continue;
    cost += (static_cast<double>(congestion) / n) * g.edge(e).eval(congestion);
  }
  return cost;
}

bool stable_cost_bounds_check(const CongestionGame& g, const GameState& s) {
  const auto a = linear_coefficients(g);
  const FractionalOptimum opt = fractional_optimum(g);
  if (!opt.useless.empty()) {
    throw std::invalid_argument("cost bounds require no useless links");
  }
  for (std::int64_t congestion : s.x_edge) {
    if (congestion < 1) {
      throw std::invalid_argument("cost bounds require every link in use");
    }
  }
  const double a_max = *std::max_element(a.begin(), a.end());
  if (!is_imitation_stable(g, s, a_max)) {
    throw std::invalid_argument("cost bounds require a state stable up to a_max");
  }
  const double optimum = static_cast<double>(g.num_players()) / opt.capacity_sum;
  const double cost = social_cost(g, s);
  const double tolerance = 1e-9 * optimum;
  return cost >= optimum - tolerance && cost <= 3.0 * optimum + tolerance;
}

}  // namespace imitate
