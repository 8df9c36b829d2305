#pragma once

// Shared test utilities: brute-force oracles kept independent of the library
// code paths they check, plus random instance generators.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "imitate/game.hpp"
#include "imitate/migration.hpp"
#include "imitate/network.hpp"

namespace testutil {

using imitate::CongestionGame;
using imitate::GameState;
using imitate::LatencyFunction;
using imitate::MigrationVector;

inline bool close(double a, double b, double rel = 1e-9) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= rel * scale;
}

// ---- oracles ----

inline std::vector<std::int64_t> oracle_congestions(const CongestionGame& g,
                                                    const std::vector<std::int64_t>& x) {
  std::vector<std::int64_t> congestion(static_cast<std::size_t>(g.num_edges()), 0);
  for (int e = 0; e < g.num_edges(); ++e) {
    for (int p = 0; p < g.num_strategies(); ++p) {
      for (int edge : g.strategy(p)) {
        if (edge == e) congestion[static_cast<std::size_t>(e)] += x[static_cast<std::size_t>(p)];
      }
    }
  }
  return congestion;
}

inline double oracle_potential(const CongestionGame& g, const std::vector<std::int64_t>& x) {
  const auto congestion = oracle_congestions(g, x);
  double total = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) {
    for (std::int64_t i = 1; i <= congestion[static_cast<std::size_t>(e)]; ++i) {
      total += g.edge(e).eval(i);
    }
  }
  return total;
}

inline double oracle_path_latency(const CongestionGame& g, const std::vector<std::int64_t>& x,
                                  int path) {
  const auto congestion = oracle_congestions(g, x);
  double total = 0.0;
  for (int e : g.strategy(path)) total += g.edge(e).eval(congestion[static_cast<std::size_t>(e)]);
  return total;
}

// Latency of `to` in the explicitly reconstructed state x + 1_to - 1_from.
inline double oracle_latency_after_move(const CongestionGame& g,
                                        const std::vector<std::int64_t>& x, int from, int to) {
  std::vector<std::int64_t> moved = x;
  moved[static_cast<std::size_t>(from)] -= 1;
  moved[static_cast<std::size_t>(to)] += 1;
  return oracle_path_latency(g, moved, to);
}

// Enumerates every split of n players over the strategies.
inline void for_each_state(const CongestionGame& g,
                           const std::function<void(const std::vector<std::int64_t>&)>& fn) {
  std::vector<std::int64_t> x(static_cast<std::size_t>(g.num_strategies()), 0);
  const int last = g.num_strategies() - 1;
  std::function<void(int, std::int64_t)> rec = [&](int p, std::int64_t remaining) {
    if (p == last) {
      x[static_cast<std::size_t>(p)] = remaining;
      fn(x);
      return;
    }
    for (std::int64_t k = 0; k <= remaining; ++k) {
      x[static_cast<std::size_t>(p)] = k;
      rec(p + 1, remaining - k);
    }
  };
  rec(0, g.num_players());
}

// ---- random instances ----

inline LatencyFunction random_latency(std::mt19937& rng, int max_degree, std::int64_t n,
                                      bool allow_table) {
  std::uniform_int_distribution<int> degree_dist(0, max_degree);
  std::uniform_real_distribution<double> coeff_dist(0.0, 4.0);
  if (allow_table && rng() % 4 == 0) {
    std::vector<double> values(static_cast<std::size_t>(n) + 1);
    values[0] = coeff_dist(rng) * 0.25;
    std::uniform_real_distribution<double> step(0.01, 2.0);
    for (std::size_t k = 1; k < values.size(); ++k) values[k] = values[k - 1] + step(rng);
    return LatencyFunction::table(std::move(values));
  }
  const int degree = degree_dist(rng);
  std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
  double sum = 0.0;
  for (double& a : coeffs) {
    a = coeff_dist(rng);
    sum += a;
  }
  if (sum == 0.0) coeffs.back() += 0.5;
  return LatencyFunction::polynomial(std::move(coeffs));
}

inline CongestionGame random_small_game(std::mt19937& rng, int max_m = 6,
                                        std::int64_t max_n = 12, int max_degree = 3,
                                        bool allow_table = true) {
  std::uniform_int_distribution<int> m_dist(1, max_m);
  std::uniform_int_distribution<std::int64_t> n_dist(1, max_n);
  const int m = m_dist(rng);
  const std::int64_t n = n_dist(rng);

  std::vector<LatencyFunction> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) edges.push_back(random_latency(rng, max_degree, n, allow_table));

  const bool singleton = rng() % 2 == 0 || m == 1;
  if (singleton) return imitate::singleton_game(std::move(edges), n);

  // Small path-style strategy sets: random non-empty subsets, deduplicated by
  // the game's canonicalization.
  std::uniform_int_distribution<int> count_dist(2, std::max(2, m));
  const int num_strategies = count_dist(rng);
  std::vector<std::vector<int>> strategies;
  for (int p = 0; p < num_strategies; ++p) {
    std::vector<int> strat;
    for (int e = 0; e < m; ++e) {
      if (rng() % 2 == 0) strat.push_back(e);
    }
    if (strat.empty()) strat.push_back(static_cast<int>(rng() % m));
    strategies.push_back(std::move(strat));
  }
  return CongestionGame(std::move(edges), std::move(strategies), n);
}

inline GameState random_state_for(const CongestionGame& g, std::mt19937& rng) {
  std::vector<std::int64_t> x(static_cast<std::size_t>(g.num_strategies()), 0);
  std::uniform_int_distribution<int> pick(0, g.num_strategies() - 1);
  for (std::int64_t i = 0; i < g.num_players(); ++i) {
    ++x[static_cast<std::size_t>(pick(rng))];
  }
  return imitate::make_state(g, std::move(x));
}

inline MigrationVector random_feasible_migration(const CongestionGame& g, const GameState& s,
                                                 std::mt19937& rng) {
  MigrationVector mv;
  if (g.num_strategies() < 2) return mv;
  for (int from = 0; from < g.num_strategies(); ++from) {
    std::int64_t available = s.x[static_cast<std::size_t>(from)];
    if (available == 0) continue;
    std::uniform_int_distribution<std::int64_t> movers_dist(0, available);
    std::int64_t movers = movers_dist(rng);
    const int group = g.group_of_strategy(from);
    std::vector<int> targets;
    for (int to : g.groups()[static_cast<std::size_t>(group)]) {
      if (to != from) targets.push_back(to);
    }
    if (targets.empty()) continue;
    std::uniform_int_distribution<std::size_t> target_dist(0, targets.size() - 1);
    while (movers > 0) {
      std::uniform_int_distribution<std::int64_t> chunk_dist(1, movers);
      const std::int64_t chunk = chunk_dist(rng);
      mv.add(from, targets[target_dist(rng)], chunk);
      movers -= chunk;
    }
  }
  return mv;
}

}  // namespace testutil
