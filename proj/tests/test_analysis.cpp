#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "imitate/bounds.hpp"
#include "imitate/decompose.hpp"
#include "imitate/equilibrium.hpp"
#include "imitate/generators.hpp"
#include "imitate/martingale.hpp"
#include "imitate/network.hpp"
#include "imitate/rng.hpp"
#include "imitate/singleton_opt.hpp"

using namespace imitate;
using testutil::close;

namespace {

// Independent double loop over used ordered pairs.
bool oracle_stable(const CongestionGame& g, const GameState& s, double nu) {
  for (int from = 0; from < g.num_strategies(); ++from) {
    if (s.x[static_cast<std::size_t>(from)] < 1) continue;
    for (int to = 0; to < g.num_strategies(); ++to) {
      if (to == from || s.x[static_cast<std::size_t>(to)] < 1) continue;
      if (g.group_of_strategy(from) != g.group_of_strategy(to)) continue;
      const double origin = testutil::oracle_path_latency(g, s.x, from);
      if (origin > testutil::oracle_latency_after_move(g, s.x, from, to) + nu) return false;
    }
  }
  return true;
}

// True iff no single move strictly lowers the potential.
bool oracle_single_move_local_min(const CongestionGame& g, const std::vector<std::int64_t>& x) {
  const double phi = testutil::oracle_potential(g, x);
  for (int from = 0; from < g.num_strategies(); ++from) {
    if (x[static_cast<std::size_t>(from)] < 1) continue;
    for (int to = 0; to < g.num_strategies(); ++to) {
      if (to == from) continue;
      std::vector<std::int64_t> moved = x;
      moved[static_cast<std::size_t>(from)] -= 1;
      moved[static_cast<std::size_t>(to)] += 1;
      if (testutil::oracle_potential(g, moved) < phi - 1e-12 * std::max(1.0, phi)) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("imitation stability detector") {
  auto g = singleton_game({LatencyFunction::linear(1.0), LatencyFunction::linear(1.0)}, 4);

  auto lopsided = make_state(g, {4, 0});
  CHECK(is_imitation_stable(g, lopsided, 0.0));  // one-strategy support

  auto near = make_state(g, {3, 1});
  CHECK(!is_imitation_stable(g, near, 0.5));  // gain 1 beats slack 0.5
  CHECK(is_imitation_stable(g, near, 1.0));

  std::mt19937 rng(6);
  for (int trial = 0; trial < 150; ++trial) {
    auto game = testutil::random_small_game(rng, 4, 10, 2, false);
    auto state = testutil::random_state_for(game, rng);
    const double nu = (trial % 3) * 0.75;
    CHECK(is_imitation_stable(game, state, nu) == oracle_stable(game, state, nu));
  }
}

TEST_CASE("nash detector and potential minima") {
  auto g = singleton_game({LatencyFunction::linear(1.0), LatencyFunction::linear(1.0)}, 4);
  CHECK(is_nash(g, make_state(g, {2, 2})));
  CHECK(!is_nash(g, make_state(g, {3, 1})));

  // Nash states coincide with single-move local minima of the potential.
  std::mt19937 rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    auto game = testutil::random_small_game(rng, 3, 6, 2, false);
    testutil::for_each_state(game, [&](const std::vector<std::int64_t>& x) {
      auto state = make_state(game, x);
      CHECK(is_nash(game, state) == !oracle_single_move_local_min(game, x));
    });
  }

  // On linear parallel links the potential is separable convex, so every
  // Nash state attains the global minimum.
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<LatencyFunction> links;
    const int m = 2 + static_cast<int>(rng() % 2);
    for (int e = 0; e < m; ++e) {
      links.push_back(LatencyFunction::linear(1.0 + static_cast<double>(rng() % 5)));
    }
    auto game = singleton_game(std::move(links), 6);
    double min_phi = std::numeric_limits<double>::infinity();
    testutil::for_each_state(game, [&](const std::vector<std::int64_t>& x) {
      min_phi = std::min(min_phi, testutil::oracle_potential(game, x));
    });
    testutil::for_each_state(game, [&](const std::vector<std::int64_t>& x) {
      if (is_nash(game, make_state(game, x))) {
        CHECK(close(testutil::oracle_potential(game, x), min_phi));
      }
    });
  }
}

TEST_CASE("path classification thresholds") {
  auto g = singleton_game({LatencyFunction::linear(1.0), LatencyFunction::linear(1.0)}, 4);

  // Equal latencies: both sets empty.
  auto balanced = make_state(g, {2, 2});
  EquilibriumParams eq{0.1, 0.1, 0.0};
  auto classes = classify_paths(g, balanced, eq, 0.0);
  CHECK(classes.expensive.empty());
  CHECK(classes.cheap.empty());

  // (3,1): l_av = 2.5, l_av_plus = 3.5. With eps = 0.1 and nu = 0 the
  // expensive cut is 3.85 (nothing above), the cheap cut 2.25 (link 2).
  auto skewed = make_state(g, {3, 1});
  classes = classify_paths(g, skewed, eq, 0.0);
  CHECK(classes.expensive.empty());
  CHECK(classes.cheap == std::vector<int>{1});

  // Degenerate eps = 0: strictly-above / strictly-below cuts.
  EquilibriumParams degenerate{0.0, 0.0, 0.0};
  classes = classify_paths(g, skewed, degenerate, 0.0);
  CHECK(classes.expensive.empty());  // 3 < 3.5
  CHECK(classes.cheap == std::vector<int>{1});

  CHECK_THROWS_AS(classify_paths(g, skewed, EquilibriumParams{-0.1, 0.1, 0.0}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("approximate equilibrium detector") {
  auto g = singleton_game({LatencyFunction::linear(1.0), LatencyFunction::linear(1.0)}, 4);
  auto skewed = make_state(g, {3, 1});

  CHECK(is_approx_equilibrium(g, skewed, EquilibriumParams{1.0, 0.01, 0.0}, 0.0));
  CHECK(!is_approx_equilibrium(g, skewed, EquilibriumParams{0.0, 1e-6, 0.0}, 0.0));

  // Nash states of small instances are approximate equilibria at the game's
  // own slope slack, and their used paths sit inside [l_av, l_av_plus].
  std::mt19937 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    auto game = testutil::random_small_game(rng, 3, 6, 2, false);
    const auto bounds = compute_bounds(game);
    testutil::for_each_state(game, [&](const std::vector<std::int64_t>& x) {
      auto state = make_state(game, x);
      if (!is_nash(game, state)) return;
      CHECK(is_approx_equilibrium(game, state, EquilibriumParams{0.0, 1e-9, std::nullopt},
                                  bounds.nu));
      const auto av = averages(game, state);
      for (int p = 0; p < game.num_strategies(); ++p) {
        if (state.x[static_cast<std::size_t>(p)] == 0) continue;
        const double lat = path_latency(game, state, p);
        CHECK(lat >= (1.0 - 1e-9) * av.l_av - bounds.nu - 1e-9);
        CHECK(lat <= (1.0 + 1e-9) * av.l_av_plus + bounds.nu + 1e-9);
      }
    });
  }
}

TEST_CASE("virtual gain") {
  auto g = singleton_game({LatencyFunction::linear(1.0), LatencyFunction::linear(1.0)}, 4);
  auto s = make_state(g, {3, 1});

  MigrationVector none;
  CHECK(virtual_gain(g, s, none) == 0.0);

  // A lone mover's virtual gain is the exact potential change.
  MigrationVector one;
  one.add(0, 1);
  CHECK(close(virtual_gain(g, s, one), potential_change(g, s, one)));

  MigrationVector infeasible;
  infeasible.add(1, 0, 2);
  CHECK_THROWS_AS(virtual_gain(g, s, infeasible), std::invalid_argument);

  // Protocol vectors price every move at a gain beyond nu.
  auto inst = random_singleton(4, 80, 1.0, 4.0, 2, 55);
  DynamicsEngine engine(inst.game);
  ProtocolParams params;
  params.lambda = 0.5;
  params.seed = 2;
  GameState state = inst.state;
  for (std::int64_t round = 1; round <= 40; ++round) {
    const auto mv = engine.imitation_round(state, params, round);
    if (!mv.empty()) {
      CHECK(virtual_gain(inst.game, state, mv) <=
            -static_cast<double>(mv.total_moves()) * engine.bounds().nu + 1e-9);
    }
    apply(inst.game, state, mv);
  }
}

TEST_CASE("error terms") {
  auto g = singleton_game({LatencyFunction::linear(1.0), LatencyFunction::linear(1.0),
                           LatencyFunction::linear(1.0)},
                          8);

  // Net change of at most one player per edge leaves no error.
  auto s = make_state(g, {4, 3, 1});
  MigrationVector single;
  single.add(0, 1);
  CHECK(error_terms(g, s, single) == 0.0);

  // Three arrivals on an empty unit-slope link: (1-1)+(2-1)+(3-1) = 3.
  auto empty_target = make_state(g, {5, 3, 0});
  MigrationVector inflow;
  inflow.add(0, 2, 2);
  inflow.add(1, 2, 1);
  CHECK(error_terms(g, empty_target, inflow) == 3.0);

  // Two departures from congestion five: (5-4)+(5-5) = 1.
  auto crowded = make_state(g, {5, 2, 1});
  MigrationVector outflow;
  outflow.add(0, 1, 1);
  outflow.add(0, 2, 1);
  CHECK(error_terms(g, crowded, outflow) == 1.0);
}

TEST_CASE("potential decomposition") {
  auto g = singleton_game({LatencyFunction::linear(1.0), LatencyFunction::linear(1.0)}, 4);
  auto s = make_state(g, {3, 1});

  const auto zero = decompose(g, s, MigrationVector{});
  CHECK(zero.virtual_gain == 0.0);
  CHECK(zero.error_sum == 0.0);
  CHECK(zero.true_gain == 0.0);

  MigrationVector one;
  one.add(0, 1);
  const auto single = decompose(g, s, one);
  CHECK(close(single.virtual_gain, single.true_gain));
  CHECK(single.error_sum == 0.0);

  // Randomized inequality check across instances and feasible vectors.
  std::mt19937 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    auto game = testutil::random_small_game(rng, 6, 20, 3, true);
    auto state = testutil::random_state_for(game, rng);
    auto mv = testutil::random_feasible_migration(game, state, rng);
    const auto parts = decompose(game, state, mv);  // throws on violation
    CHECK(parts.error_sum >= -1e-12);
    // Cross-check the true gain against the from-scratch potential.
    GameState after = state;
    apply(game, after, mv);
    CHECK(close(parts.true_gain, testutil::oracle_potential(game, after.x) -
                                     testutil::oracle_potential(game, state.x)));
  }
}

namespace {

// Exact one-round expectation by enumerating every joint player decision.
// Kept independent: own sampling weights, own migration rule, own potential.
struct ExactOracle {
  const CongestionGame& g;
  double lambda;
  double d;
  double nu;  // negative means no threshold

  double expected_potential_change(const std::vector<std::int64_t>& x) const {
    std::vector<int> path_of_player;
    for (int p = 0; p < g.num_strategies(); ++p) {
      for (std::int64_t k = 0; k < x[static_cast<std::size_t>(p)]; ++k) {
        path_of_player.push_back(p);
      }
    }
    const double phi0 = testutil::oracle_potential(g, x);
    double expectation = 0.0;
    std::vector<std::int64_t> outcome = x;

    std::function<void(std::size_t, double)> recurse = [&](std::size_t player, double prob) {
      if (prob == 0.0) return;
      if (player == path_of_player.size()) {
        expectation += prob * (testutil::oracle_potential(g, outcome) - phi0);
        return;
      }
      const int from = path_of_player[player];
      const double origin = testutil::oracle_path_latency(g, x, from);
      double stay = 1.0;
      for (int to = 0; to < g.num_strategies(); ++to) {
        const double sample_prob = static_cast<double>(x[static_cast<std::size_t>(to)]) /
                                   static_cast<double>(g.num_players());
        if (sample_prob == 0.0 || to == from) continue;
        const double gain = origin - testutil::oracle_latency_after_move(g, x, from, to);
        if (!(gain > std::max(nu, 0.0))) continue;
        const double mu = (lambda / d) * gain / origin;
        const double move_prob = sample_prob * mu;
        stay -= move_prob;
        outcome[static_cast<std::size_t>(from)] -= 1;
        outcome[static_cast<std::size_t>(to)] += 1;
        recurse(player + 1, prob * move_prob);
        outcome[static_cast<std::size_t>(from)] += 1;
        outcome[static_cast<std::size_t>(to)] -= 1;
      }
      recurse(player + 1, prob * stay);
    };
    recurse(0, 1.0);
    return expectation;
  }
};

}  // namespace

TEST_CASE("martingale report") {
  auto g = singleton_game({LatencyFunction::linear(1.0), LatencyFunction::linear(1.0)}, 4);

  // Stable input: every replay leaves the potential untouched.
  auto stable = make_state(g, {2, 2});
  ProtocolParams params;
  params.lambda = 0.5;
  params.nu_guard = false;
  auto report = martingale_test(g, stable, params, 500);
  CHECK(report.input_stable);
  CHECK(report.mean_dphi == 0.0);
  CHECK(report.stderr_dphi == 0.0);

  // (3,1): Monte-Carlo agrees with the exact enumerated expectation and the
  // decrease shows up within three standard errors.
  auto skewed = make_state(g, {3, 1});
  report = martingale_test(g, skewed, params, 20000);
  CHECK(!report.input_stable);
  CHECK(report.supermartingale_ok);
  CHECK(report.halved_bound_ok);

  const ExactOracle oracle{g, params.lambda, 1.0, -1.0};
  const double exact = oracle.expected_potential_change({3, 1});
  CHECK(exact < 0.0);
  CHECK(std::fabs(report.mean_dphi - exact) <= 3.0 * report.stderr_dphi);
}

TEST_CASE("martingale bound on a polynomial instance") {
  auto inst = random_singleton(4, 120, 1.0, 4.0, 2, 31);
  ProtocolParams params;
  params.seed = 8;
  const auto report = martingale_test(inst.game, inst.state, params, 4000);
  CHECK(!report.input_stable);
  CHECK(report.supermartingale_ok);
  CHECK(report.halved_bound_ok);
}

TEST_CASE("fractional optimum") {
  auto identical = singleton_game({LatencyFunction::linear(2.0), LatencyFunction::linear(2.0),
                                   LatencyFunction::linear(2.0), LatencyFunction::linear(2.0)},
                                  12);
  auto opt = fractional_optimum(identical);
  for (double load : opt.load) CHECK(close(load, 3.0));

  auto pair = singleton_game({LatencyFunction::linear(1.0), LatencyFunction::linear(2.0)}, 3);
  opt = fractional_optimum(pair);
  CHECK(close(opt.capacity_sum, 1.5));
  CHECK(close(opt.load[0], 2.0));
  CHECK(close(opt.load[1], 1.0));
  CHECK(opt.useless.empty());

  auto skew = singleton_game({LatencyFunction::linear(1.0), LatencyFunction::linear(100.0)}, 5);
  opt = fractional_optimum(skew);
  CHECK(opt.useless == std::vector<int>{1});

  // All links share the optimal latency n / capacity_sum.
  CounterRng rng(3, 0, 0);
  std::vector<LatencyFunction> links;
  for (int e = 0; e < 10; ++e) links.push_back(LatencyFunction::linear(0.5 + rng.next_double()));
  auto random_game = singleton_game(std::move(links), 5000);
  opt = fractional_optimum(random_game);
  const double target = 5000.0 / opt.capacity_sum;
  for (int e = 0; e < 10; ++e) {
    CHECK(std::fabs(linear_coefficients(random_game)[static_cast<std::size_t>(e)] *
                        opt.load[static_cast<std::size_t>(e)] -
                    target) <= 1e-9 * target);
  }

  // Non-singleton and non-linear games are rejected.
  CongestionGame path_game({LatencyFunction::linear(1.0), LatencyFunction::linear(1.0)},
                           {{0, 1}, {0}}, 2);
  CHECK_THROWS_AS(fractional_optimum(path_game), std::invalid_argument);
  auto quad = singleton_game({LatencyFunction::monomial(1.0, 2)}, 2);
  CHECK_THROWS_AS(fractional_optimum(quad), std::invalid_argument);
  auto affine = singleton_game({LatencyFunction::polynomial({1.0, 1.0})}, 2);
  CHECK_THROWS_AS(fractional_optimum(affine), std::invalid_argument);
}

TEST_CASE("social cost") {
  auto g = singleton_game({LatencyFunction::linear(1.0), LatencyFunction::linear(1.0)}, 6);
  CHECK(social_cost(g, make_state(g, {6, 0})) == 6.0);
  CHECK(social_cost(g, make_state(g, {3, 3})) == 3.0);  // n/m on identical unit links

  std::mt19937 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = random_singleton(5, 40, 1.0, 3.0, 2, 600 + trial);
    CHECK(close(social_cost(inst.game, inst.state), averages(inst.game, inst.state).l_av));
  }

  CongestionGame path_game({LatencyFunction::linear(1.0), LatencyFunction::linear(1.0)},
                           {{0, 1}, {0}}, 2);
  CHECK_THROWS_AS(social_cost(path_game, make_state(path_game, {1, 1})),
                  std::invalid_argument);
}

TEST_CASE("stable-state cost bounds") {
  auto g = singleton_game({LatencyFunction::linear(1.0), LatencyFunction::linear(2.0),
                           LatencyFunction::linear(4.0)},
                          7);
  // Integral rounding of the fractional optimum: equal latencies of 4.
  auto rounded = make_state(g, {4, 2, 1});
  REQUIRE(is_imitation_stable(g, rounded, 4.0));
  CHECK(stable_cost_bounds_check(g, rounded));

  // The optimal integral state can only cost more than the fractional one.
  const auto opt = fractional_optimum(g);
  CHECK(social_cost(g, rounded) >=
        static_cast<double>(g.num_players()) / opt.capacity_sum - 1e-9);

  auto emptied = make_state(g, {5, 2, 0});
  CHECK_THROWS_AS(stable_cost_bounds_check(g, emptied), std::invalid_argument);

  auto useless = singleton_game({LatencyFunction::linear(1.0), LatencyFunction::linear(100.0)},
                                5);
  CHECK_THROWS_AS(stable_cost_bounds_check(useless, make_state(useless, {4, 1})),
                  std::invalid_argument);
}
