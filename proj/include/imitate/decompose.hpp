#pragma once

#include "imitate/game.hpp"
#include "imitate/migration.hpp"

namespace imitate {

// Split of one round's potential change: each mover priced as if it migrated
// alone (virtual gain) plus the per-edge concurrency correction (error sum).
// The true gain never exceeds their sum.
struct PotentialDecomposition {
  double virtual_gain;
  double error_sum;
  double true_gain;
};

// Sum over ordered pairs of count * (target latency after a lone move minus
// origin latency). Non-positive for protocol-generated vectors.
double virtual_gain(const CongestionGame& g, const GameState& s, const MigrationVector& mv);

// Sum over edges of the stacking cost of concurrent arrivals (or departures);
// each edge term is >= 0 by monotonicity.
double error_terms(const CongestionGame& g, const GameState& s, const MigrationVector& mv);

// Exact potential change induced by the vector.
double potential_change(const CongestionGame& g, const GameState& s, const MigrationVector& mv);

// Computes all three quantities and verifies the bound
// true_gain <= virtual_gain + error_sum up to floating tolerance; a violation
// indicates an implementation bug and throws.
PotentialDecomposition decompose(const CongestionGame& g, const GameState& s,
                                 const MigrationVector& mv);

}  // namespace imitate
