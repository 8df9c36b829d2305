#include "imitate/equilibrium.hpp"

#include <stdexcept>

namespace imitate {

void EquilibriumParams::validate() const {
  if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("delta must be in [0,1]");
  // epsilon = 0 keeps the thresholds well-defined (strictly above / below the
  // averages); convergence guarantees need epsilon > 0.
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  if (nu && *nu < 0.0) throw std::invalid_argument("nu must be >= 0");
}

bool is_imitation_stable(const CongestionGame& g, const GameState& s, double nu) {
  for (const auto& group : g.groups()) {
    for (int from : group) {
      if (s.x[static_cast<std::size_t>(from)] < 1) continue;
      const double origin_latency = path_latency(g, s, from);
      for (int to : group) {
        if (to == from || s.x[static_cast<std::size_t>(to)] < 1) continue;
        if (origin_latency > latency_after_move(g, s, from, to) + nu) return false;
      }
    }
  }
  return true;
}

bool is_nash(const CongestionGame& g, const GameState& s) {
  for (const auto& group : g.groups()) {
    for (int from : group) {
      if (s.x[static_cast<std::size_t>(from)] < 1) continue;
      const double origin_latency = path_latency(g, s, from);
      for (int to : group) {
        if (to == from) continue;
        if (latency_after_move(g, s, from, to) < origin_latency) return false;
      }
    }
  }
  return true;
}

PathClasses classify_paths(const CongestionGame& g, const GameState& s,
                           const EquilibriumParams& eq, double default_nu) {
  eq.validate();
  const double nu = eq.nu.value_or(default_nu);
  const Averages av = averages(g, s);
  const double expensive_above = (1.0 + eq.epsilon) * av.l_av_plus + nu;
  const double cheap_below = (1.0 - eq.epsilon) * av.l_av - nu;

  PathClasses classes;
  for (int p = 0; p < g.num_strategies(); ++p) {
    const double latency = path_latency(g, s, p);
    if (latency > expensive_above) {
      classes.expensive.push_back(p);
    } else if (latency < cheap_below) {
      classes.cheap.push_back(p);
    }
  }
  return classes;
}

double deviating_fraction(const CongestionGame& g, const GameState& s,
                          const EquilibriumParams& eq, double default_nu) {
  const PathClasses classes = classify_paths(g, s, eq, default_nu);
  std::int64_t deviating = 0;
  for (int p : classes.expensive) deviating += s.x[static_cast<std::size_t>(p)];
  for (int p : classes.cheap) deviating += s.x[static_cast<std::size_t>(p)];
  return static_cast<double>(deviating) / static_cast<double>(g.num_players());
}

bool is_approx_equilibrium(const CongestionGame& g, const GameState& s,
                           const EquilibriumParams& eq, double default_nu) {
  return deviating_fraction(g, s, eq, default_nu) <= eq.delta;
}

}  // namespace imitate
