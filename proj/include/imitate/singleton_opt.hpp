#pragma once

#include <vector>

#include "imitate/game.hpp"

namespace imitate {

// Closed-form fractional optimum of a parallel-links game with latencies
// a_e * x: every link carries n / (capacity_sum * a_e) players and all links
// share the latency n / capacity_sum.
struct FractionalOptimum {
  std::vector<double> load;     // optimal fractional players per link
  double capacity_sum;          // sum over links of 1/a_e
  std::vector<int> useless;     // links whose fractional load is below one player
};

// Requires a singleton game with strictly linear latencies (zero offsets).
FractionalOptimum fractional_optimum(const CongestionGame& g);

// Coefficients a_e of a linear singleton game; throws otherwise.
std::vector<double> linear_coefficients(const CongestionGame& g);

// Average player latency of a singleton game; coincides with l_av.
double social_cost(const CongestionGame& g, const GameState& s);

// Deterministic cost bounds at a state where no player can gain more than the
// largest coefficient: social cost within [n/capacity_sum, 3n/capacity_sum].
// Requires no useless links and every link in use.
bool stable_cost_bounds_check(const CongestionGame& g, const GameState& s);

}  // namespace imitate
