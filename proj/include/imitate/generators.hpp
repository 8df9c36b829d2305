#pragma once

#include <cstdint>
#include <vector>

#include "imitate/game.hpp"

namespace imitate {

// Two-strategy-per-player game family behind the sequential lower bound: base
// player i either keeps its own link or shares one pairwise link with every
// other base player. The tripled variant replaces each base player by three
// copies with an offset on the private links.
struct ThresholdGameSpec {
  int n_base = 0;
  std::vector<std::vector<double>> a;  // symmetric positive weights, a[i][j] for i != j
  bool tripled = false;

  void validate() const;
  double row_sum(int i) const;  // sum over j != i of a[i][j]
};

ThresholdGameSpec random_threshold_spec(int n_base, int a_max, std::uint64_t seed, bool tripled);

// Edges 0..n_base-1 are the private links, followed by the pairwise links in
// lexicographic (i,j) order. Strategy 2i keeps the private link, strategy
// 2i+1 the pairwise links; both form group i.
CongestionGame build_threshold_game(const ThresholdGameSpec& spec);

// Canonical start for the tripled variant: first copy on the private
// strategy, second on the shared strategy, third as directed per base player
// (true = shared strategy). Non-tripled games place their single player as
// directed.
GameState threshold_initial_state(const CongestionGame& g, const ThresholdGameSpec& spec,
                                  const std::vector<bool>& third_on_shared);

// True iff some base player's copies all sit on the same strategy; the
// dynamics must never produce this from the canonical start.
bool threshold_triples_coincide(const CongestionGame& g, const GameState& s);

// Two parallel links, one at constant latency c and one at x^exponent, with
// initial_on_curve players on the second. The latency gap
// c - initial_on_curve^exponent must be positive.
struct OvershootInstance {
  CongestionGame game;
  GameState state;
  double gap;
};

OvershootInstance build_overshoot_pair(double c, int exponent, std::int64_t n,
                                       std::int64_t initial_on_curve);

// m identical unit-slope links with n = 2m players in configuration
// (3, 1, 2, 2, ...): exactly one improving move exists and a sampling
// protocol needs order n rounds in expectation to find it.
struct SamplingLowerBoundInstance {
  CongestionGame game;
  GameState state;
};

SamplingLowerBoundInstance build_sampling_lowerbound(int m);

// Random parallel-links game with polynomial latencies: coefficients of
// x^1..x^degree drawn uniformly from [coeff_min, coeff_max], no offset, plus
// a uniform random initial assignment.
struct RandomSingletonInstance {
  CongestionGame game;
  GameState state;
};

RandomSingletonInstance random_singleton(int m, std::int64_t n, double coeff_min,
                                         double coeff_max, int degree, std::uint64_t seed);

}  // namespace imitate
