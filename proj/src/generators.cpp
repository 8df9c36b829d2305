#include "imitate/generators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "imitate/network.hpp"
#include "imitate/protocol.hpp"
#include "imitate/rng.hpp"

namespace imitate {

void ThresholdGameSpec::validate() const {
  if (n_base < 2) throw std::invalid_argument("threshold game needs at least two base players");
  if (static_cast<int>(a.size()) != n_base) {
    throw std::invalid_argument("weight matrix must be n_base x n_base");
  }
  for (int i = 0; i < n_base; ++i) {
    if (static_cast<int>(a[static_cast<std::size_t>(i)].size()) != n_base) {
      throw std::invalid_argument("weight matrix must be n_base x n_base");
    }
    for (int j = 0; j < n_base; ++j) {
      if (i == j) continue;
      const double w = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!(w > 0.0)) throw std::invalid_argument("pair weights must be positive");
      if (w != a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) {
        throw std::invalid_argument("pair weights must be symmetric");
      }
    }
  }
}

double ThresholdGameSpec::row_sum(int i) const {
  double sum = 0.0;
  for (int j = 0; j < n_base; ++j) {
    if (j != i) sum += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return sum;
}

ThresholdGameSpec random_threshold_spec(int n_base, int a_max, std::uint64_t seed, bool tripled) {
  if (a_max < 1) throw std::invalid_argument("a_max must be >= 1");
  ThresholdGameSpec spec;
  spec.n_base = n_base;
  spec.tripled = tripled;
  spec.a.assign(static_cast<std::size_t>(n_base),
                std::vector<double>(static_cast<std::size_t>(n_base), 0.0));
  CounterRng rng(seed, 0, 0);
  for (int i = 0; i < n_base; ++i) {
    for (int j = i + 1; j < n_base; ++j) {
      const double w = static_cast<double>(1 + rng.next_below(a_max));
      spec.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = w;
      spec.a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = w;
    }
  }
  spec.validate();
  return spec;
}

CongestionGame build_threshold_game(const ThresholdGameSpec& spec) {
  spec.validate();
  const int nb = spec.n_base;

  std::vector<LatencyFunction> edges;
  // Private links first: slope half the row sum, plus an offset of 1.5 row
  // sums in the tripled variant.
  for (int i = 0; i < nb; ++i) {
    const double row = spec.row_sum(i);
    const double offset = spec.tripled ? 1.5 * row : 0.0;
    edges.push_back(LatencyFunction::polynomial({offset, 0.5 * row}));
  }
  // Pairwise links in lexicographic order.
  std::vector<std::vector<int>> pair_edge(static_cast<std::size_t>(nb),
                                          std::vector<int>(static_cast<std::size_t>(nb), -1));
  for (int i = 0; i < nb; ++i) {
    for (int j = i + 1; j < nb; ++j) {
      pair_edge[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          static_cast<int>(edges.size());
      pair_edge[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          static_cast<int>(edges.size());
      edges.push_back(
          LatencyFunction::linear(spec.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
    }
  }

  std::vector<std::vector<int>> strategies;
  StrategyRestriction restriction;
  for (int i = 0; i < nb; ++i) {
    strategies.push_back({i});  // keep the private link
    std::vector<int> shared;
    for (int j = 0; j < nb; ++j) {
      if (j != i) shared.push_back(pair_edge[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    strategies.push_back(std::move(shared));
    restriction.group_of_strategy.push_back(i);
    restriction.group_of_strategy.push_back(i);
  }

  const std::int64_t n = spec.tripled ? 3LL * nb : nb;
  return CongestionGame(std::move(edges), std::move(strategies), n,
                        CongestionGame::Kind::explicit_game, std::move(restriction));
}

GameState threshold_initial_state(const CongestionGame& g, const ThresholdGameSpec& spec,
                                  const std::vector<bool>& third_on_shared) {
  if (static_cast<int>(third_on_shared.size()) != spec.n_base) {
    throw std::invalid_argument("need one placement choice per base player");
  }
  std::vector<std::int64_t> x(static_cast<std::size_t>(g.num_strategies()), 0);
  for (int i = 0; i < spec.n_base; ++i) {
    const std::size_t keep = static_cast<std::size_t>(2 * i);
    const std::size_t share = keep + 1;
    if (spec.tripled) {
      x[keep] += 1;
      x[share] += 1;
      x[third_on_shared[static_cast<std::size_t>(i)] ? share : keep] += 1;
    } else {
      x[third_on_shared[static_cast<std::size_t>(i)] ? share : keep] += 1;
    }
  }
  return make_state(g, std::move(x));
}

bool threshold_triples_coincide(const CongestionGame& g, const GameState& s) {
  for (const auto& group : g.groups()) {
    for (int p : group) {
      if (s.x[static_cast<std::size_t>(p)] >= 3) return true;
    }
  }
  return false;
}

OvershootInstance build_overshoot_pair(double c, int exponent, std::int64_t n,
                                       std::int64_t initial_on_curve) {
  if (!(c > 0.0)) throw std::invalid_argument("constant latency must be positive");
  if (exponent < 1) throw std::invalid_argument("exponent must be >= 1");
  if (initial_on_curve < 0 || initial_on_curve > n) {
    throw std::invalid_argument("initial curve load must be within 0..n");
  }
  const double gap = c - std::pow(static_cast<double>(initial_on_curve), exponent);
  if (!(gap > 0.0)) {
    throw std::invalid_argument("initial latency gap must be positive, got " +
                                std::to_string(gap));
  }
  OvershootInstance inst{
      singleton_game({LatencyFunction::constant(c), LatencyFunction::monomial(1.0, exponent)}, n),
      GameState{},
      gap};
  inst.state = make_state(inst.game, {n - initial_on_curve, initial_on_curve});
  return inst;
}

SamplingLowerBoundInstance build_sampling_lowerbound(int m) {
  if (m < 3) throw std::invalid_argument("sampling lower bound instance needs m >= 3");
  std::vector<LatencyFunction> links;
  links.reserve(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) links.push_back(LatencyFunction::linear(1.0));
  SamplingLowerBoundInstance inst{singleton_game(std::move(links), 2LL * m), GameState{}};
  std::vector<std::int64_t> x(static_cast<std::size_t>(m), 2);
  x[0] = 3;
  x[1] = 1;
  inst.state = make_state(inst.game, std::move(x));
  return inst;
}

RandomSingletonInstance random_singleton(int m, std::int64_t n, double coeff_min,
                                         double coeff_max, int degree, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("need at least one link and one player");
  if (degree < 1) throw std::invalid_argument("degree must be >= 1");
  if (!(coeff_min > 0.0) || coeff_max < coeff_min) {
    throw std::invalid_argument("coefficient range must satisfy 0 < min <= max");
  }
  CounterRng rng(seed, 1, 0);
  std::vector<LatencyFunction> links;
  links.reserve(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) {
    std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1, 0.0);
    for (int k = 1; k <= degree; ++k) {
      coeffs[static_cast<std::size_t>(k)] =
          coeff_min + (coeff_max - coeff_min) * rng.next_double();
    }
    links.push_back(LatencyFunction::polynomial(std::move(coeffs)));
  }
  RandomSingletonInstance inst{singleton_game(std::move(links), n), GameState{}};
  inst.state = random_uniform_state(inst.game, seed);
  return inst;
}

}  // namespace imitate
