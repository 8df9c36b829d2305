#include "imitate/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace imitate {

double virtual_gain(const CongestionGame& g, const GameState& s, const MigrationVector& mv) {
  mv.validate_feasible(g, s);
  double total = 0.0;
  for (const auto& move : mv.sorted_moves()) {
    const double gain = latency_after_move(g, s, move.from, move.to) - path_latency(g, s, move.from);
    total += static_cast<double>(move.count) * gain;
  }
  return total;
}

double error_terms(const CongestionGame& g, const GameState& s, const MigrationVector& mv) {
  mv.validate_feasible(g, s);
  const auto delta = mv.delta_per_edge(g);
  double total = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) {
    const std::int64_t x_e = s.x_edge[static_cast<std::size_t>(e)];
    const std::int64_t d = delta[static_cast<std::size_t>(e)];
    const LatencyFunction& f = g.edge(e);
    if (d > 0) {
      const double first_arrival = f.eval(x_e + 1);
      for (std::int64_t u = x_e + 1; u <= x_e + d; ++u) {
        total += f.eval(u) - first_arrival;
      }
    } else if (d < 0) {
      const double before = f.eval(x_e);
      for (std::int64_t u = x_e + d + 1; u <= x_e; ++u) {
        total += before - f.eval(u);
      }
    }
  }
  return total;
}

double potential_change(const CongestionGame& g, const GameState& s, const MigrationVector& mv) {
  mv.validate_feasible(g, s);
  const auto delta = mv.delta_per_edge(g);
  double total = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) {
    const std::int64_t x_e = s.x_edge[static_cast<std::size_t>(e)];
    const std::int64_t d = delta[static_cast<std::size_t>(e)];
    const LatencyFunction& f = g.edge(e);
    if (d > 0) {
      for (std::int64_t u = x_e + 1; u <= x_e + d; ++u) total += f.eval(u);
    } else if (d < 0) {
      for (std::int64_t u = x_e + d + 1; u <= x_e; ++u) total -= f.eval(u);
    }
  }
  return total;
}

PotentialDecomposition decompose(const CongestionGame& g, const GameState& s,
                                 const MigrationVector& mv) {
  PotentialDecomposition result;
  result.virtual_gain = virtual_gain(g, s, mv);
  result.error_sum = error_terms(g, s, mv);
  result.true_gain = potential_change(g, s, mv);

  const double bound = result.virtual_gain + result.error_sum;
  const double scale = std::max({1.0, std::fabs(result.true_gain), std::fabs(bound)});
  if (result.true_gain > bound + 1e-9 * scale) {
    throw std::logic_error("potential decomposition bound violated; implementation bug");
  }
  return result;
}

}  // namespace imitate
