#pragma once

#include <vector>

#include "imitate/game.hpp"

namespace imitate {

// Static parameters of a game's latency functions used by the protocols:
// elasticity bound d, low-congestion slope bounds nu, global slope bound
// beta, and the extreme single-edge / path latencies.
struct ElasticityBounds {
  double d;                   // elasticity bound, clamped to >= 1
  std::vector<double> nu_e;   // per edge: max step over congestions 1..ceil(d)
  std::vector<double> nu_p;   // per strategy: sum of nu_e over its edges
  double nu;                  // max over strategies of nu_p
  double beta;                // max single-player latency step anywhere
  double ell_min;             // min over edges of l_e(1)
  double ell_max;             // max over strategies of its latency with all n players
};

// Polynomial edges bound the elasticity by their degree; table edges fall
// back to the discrete difference-quotient surrogate max (l(x)-l(x-1))*x/l(x).
ElasticityBounds compute_bounds(const CongestionGame& g);

}  // namespace imitate
