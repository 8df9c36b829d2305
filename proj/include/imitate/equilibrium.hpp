#pragma once

#include <optional>
#include <vector>

#include "imitate/game.hpp"

namespace imitate {

// Approximation parameters: at most a delta fraction of players may sit on
// paths deviating by more than an epsilon fraction (plus slack nu) from the
// average latencies.
struct EquilibriumParams {
  double delta = 0.1;
  double epsilon = 0.1;
  std::optional<double> nu;  // defaults to the game's slope bound at use sites

  void validate() const;
};

// True iff no player can improve by more than nu by adopting another used
// path. Restricted games compare only same-group pairs.
bool is_imitation_stable(const CongestionGame& g, const GameState& s, double nu);

// True iff no player can strictly improve by switching to any strategy it is
// allowed to use.
bool is_nash(const CongestionGame& g, const GameState& s);

struct PathClasses {
  std::vector<int> expensive;  // latency above (1+eps)*l_av_plus + nu
  std::vector<int> cheap;      // latency below (1-eps)*l_av - nu
};

PathClasses classify_paths(const CongestionGame& g, const GameState& s,
                           const EquilibriumParams& eq, double default_nu);

// Fraction of players on expensive or cheap paths.
double deviating_fraction(const CongestionGame& g, const GameState& s,
                          const EquilibriumParams& eq, double default_nu);

bool is_approx_equilibrium(const CongestionGame& g, const GameState& s,
                           const EquilibriumParams& eq, double default_nu);

}  // namespace imitate
