#include "imitate/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "imitate/decompose.hpp"
#include "imitate/rng.hpp"

namespace imitate {

double strict_lambda() { return 1.0 / (2.0 * std::exp(8.0) + 8.0); }

void ProtocolParams::validate() const {
  if (!(lambda > 0.0) || lambda > 1.0) throw std::invalid_argument("lambda must be in (0,1]");
  if (round_limit < 0) throw std::invalid_argument("round limit must be >= 0");
}

double imitation_migration_prob(double origin, double target_after, double d, double nu,
                                double lambda) {
  if (!(origin > 0.0)) throw std::invalid_argument("origin latency must be positive");
  if (!(origin > target_after + nu)) return 0.0;
  return (lambda / d) * (origin - target_after) / origin;
}

double exploration_migration_prob(double origin, double target_after,
                                  std::int64_t num_strategies, double ell_min, double beta,
                                  std::int64_t n, double lambda) {
  if (!(origin > 0.0)) throw std::invalid_argument("origin latency must be positive");
  if (!(origin > target_after)) return 0.0;
  const double scale =
      lambda * (static_cast<double>(num_strategies) * ell_min) / (beta * static_cast<double>(n));
  return std::min(1.0, scale * (origin - target_after) / origin);
}

// ---- Engine ----

DynamicsEngine::DynamicsEngine(const CongestionGame& g) : game_(&g), bounds_(compute_bounds(g)) {
  const std::int64_t n = g.num_players();
  values_.resize(static_cast<std::size_t>(g.num_edges()));
  prefix_.resize(static_cast<std::size_t>(g.num_edges()));
  for (int e = 0; e < g.num_edges(); ++e) {
    auto& vals = values_[static_cast<std::size_t>(e)];
    auto& pre = prefix_[static_cast<std::size_t>(e)];
    vals.resize(static_cast<std::size_t>(n) + 2);
    pre.resize(static_cast<std::size_t>(n) + 1);
    pre[0] = 0.0;
    for (std::int64_t k = 0; k <= n; ++k) {
      vals[static_cast<std::size_t>(k)] = g.edge(e).eval(k);
      if (k >= 1) pre[static_cast<std::size_t>(k)] = pre[static_cast<std::size_t>(k - 1)] +
                                                     vals[static_cast<std::size_t>(k)];
    }
    vals[static_cast<std::size_t>(n) + 1] = g.edge(e).eval_clamped(n + 1);
  }
}

double DynamicsEngine::strategy_latency(const GameState& s, int p) const {
  double total = 0.0;
  for (int e : game_->strategy(p)) {
    total += values_[static_cast<std::size_t>(e)]
                    [static_cast<std::size_t>(s.x_edge[static_cast<std::size_t>(e)])];
  }
  return total;
}

double DynamicsEngine::after_move_latency(const GameState& s, int from, int to) const {
  if (from == to) return strategy_latency(s, to);
  const auto& origin = game_->strategy(from);
  double total = 0.0;
  for (int e : game_->strategy(to)) {
    const bool shared = std::binary_search(origin.begin(), origin.end(), e);
    const std::int64_t k = s.x_edge[static_cast<std::size_t>(e)] + (shared ? 0 : 1);
    total += values_[static_cast<std::size_t>(e)][static_cast<std::size_t>(k)];
  }
  return total;
}

double DynamicsEngine::potential(const GameState& s) const {
  double total = 0.0;
  for (int e = 0; e < game_->num_edges(); ++e) {
    total += prefix_[static_cast<std::size_t>(e)]
                    [static_cast<std::size_t>(s.x_edge[static_cast<std::size_t>(e)])];
  }
  return total;
}

Averages DynamicsEngine::state_averages(const GameState& s) const {
  const double n = static_cast<double>(game_->num_players());
  double l_av = 0.0;
  double l_av_plus = 0.0;
  for (int p = 0; p < game_->num_strategies(); ++p) {
    const std::int64_t players = s.x[static_cast<std::size_t>(p)];
    if (players == 0) continue;
    double lat = 0.0;
    double lat_plus = 0.0;
    for (int e : game_->strategy(p)) {
      const std::int64_t k = s.x_edge[static_cast<std::size_t>(e)];
      lat += values_[static_cast<std::size_t>(e)][static_cast<std::size_t>(k)];
      lat_plus += values_[static_cast<std::size_t>(e)][static_cast<std::size_t>(k + 1)];
    }
    const double weight = static_cast<double>(players) / n;
    l_av += weight * lat;
    l_av_plus += weight * lat_plus;
  }
  return {l_av, l_av_plus};
}

double DynamicsEngine::max_used_latency(const GameState& s) const {
  double max_latency = 0.0;
  for (int p = 0; p < game_->num_strategies(); ++p) {
    if (s.x[static_cast<std::size_t>(p)] == 0) continue;
    max_latency = std::max(max_latency, strategy_latency(s, p));
  }
  return max_latency;
}

// Snapshot-derived lookup tables for one round: the canonical player layout
// (players packed by ascending strategy id) and per-group sampling prefixes.
struct DynamicsEngine::RoundContext {
  std::vector<std::int64_t> offset;                 // strategy -> first player index
  std::vector<double> latency;                      // strategy -> current latency
  std::vector<std::vector<std::int64_t>> group_cum; // per group: cumulative players
  std::vector<std::int64_t> group_total;

  RoundContext(const DynamicsEngine& engine, const GameState& s) {
    const CongestionGame& g = engine.game();
    const int num_strategies = g.num_strategies();
    offset.resize(static_cast<std::size_t>(num_strategies) + 1, 0);
    latency.resize(static_cast<std::size_t>(num_strategies));
    for (int p = 0; p < num_strategies; ++p) {
      offset[static_cast<std::size_t>(p) + 1] =
          offset[static_cast<std::size_t>(p)] + s.x[static_cast<std::size_t>(p)];
      // Only origins are looked up, and origins are always used strategies.
      latency[static_cast<std::size_t>(p)] =
          s.x[static_cast<std::size_t>(p)] > 0 ? engine.strategy_latency(s, p) : 0.0;
    }
    const auto& groups = g.groups();
    group_cum.resize(groups.size());
    group_total.resize(groups.size());
    for (std::size_t gid = 0; gid < groups.size(); ++gid) {
      auto& cum = group_cum[gid];
      cum.resize(groups[gid].size());
      std::int64_t running = 0;
      for (std::size_t j = 0; j < groups[gid].size(); ++j) {
        running += s.x[static_cast<std::size_t>(groups[gid][j])];
        cum[j] = running;
      }
      group_total[gid] = running;
    }
  }

  // Strategy of the player at canonical index `i`.
  int strategy_of_player(std::int64_t i) const {
    const auto it = std::upper_bound(offset.begin(), offset.end(), i);
    return static_cast<int>(it - offset.begin()) - 1;
  }

  // Strategy of the `t`-th player of a group (canonical group order).
  int group_member_strategy(const std::vector<int>& group_strategies,
                            const std::vector<std::int64_t>& cum, std::int64_t t) const {
    const auto it = std::upper_bound(cum.begin(), cum.end(), t);
    return group_strategies[static_cast<std::size_t>(it - cum.begin())];
  }
};

struct DynamicsEngine::PlayerDecision {
  int from;
  int to;
};

void DynamicsEngine::process_players(const GameState& s, const RoundContext& rc,
                                     const ProtocolParams& params, std::int64_t round_index,
                                     std::int64_t begin, std::int64_t end,
                                     std::vector<PlayerDecision>& out) const {
  const CongestionGame& g = *game_;
  const double d_eff = params.elasticity_damping ? bounds_.d : 1.0;
  const double nu_eff = params.nu_guard ? bounds_.nu : 0.0;
  const bool singleton = g.is_singleton();

  int p = rc.strategy_of_player(begin);
  std::int64_t next_boundary = rc.offset[static_cast<std::size_t>(p) + 1];

  for (std::int64_t i = begin; i < end; ++i) {
    while (i >= next_boundary) {
      ++p;
      next_boundary = rc.offset[static_cast<std::size_t>(p) + 1];
    }
    const int gid = g.group_of_strategy(p);
    const auto& group_strategies = g.groups()[static_cast<std::size_t>(gid)];
    CounterRng rng(params.seed, static_cast<std::uint64_t>(round_index),
                   static_cast<std::uint64_t>(i));

    bool imitation_arm = params.protocol == Protocol::imitation;
    if (params.protocol == Protocol::combined) {
      imitation_arm = rng.next_double() < 0.5;
    }

    int q;
    if (imitation_arm) {
      const std::int64_t t = rng.next_below(rc.group_total[static_cast<std::size_t>(gid)]);
      q = rc.group_member_strategy(group_strategies, rc.group_cum[static_cast<std::size_t>(gid)],
                                   t);
    } else {
      const std::int64_t t =
          rng.next_below(static_cast<std::int64_t>(group_strategies.size()));
      q = group_strategies[static_cast<std::size_t>(t)];
    }
    if (q == p) continue;

    const double origin = rc.latency[static_cast<std::size_t>(p)];
    const double target_after =
        singleton ? values_[static_cast<std::size_t>(q)][static_cast<std::size_t>(
                        s.x_edge[static_cast<std::size_t>(q)] + 1)]
                  : after_move_latency(s, p, q);
    const double mu =
        imitation_arm
            ? imitation_migration_prob(origin, target_after, d_eff, nu_eff, params.lambda)
            : exploration_migration_prob(origin, target_after,
                                         static_cast<std::int64_t>(group_strategies.size()),
                                         bounds_.ell_min, bounds_.beta, g.num_players(),
                                         params.lambda);
    if (mu > 0.0 && rng.next_double() < mu) {
      out.push_back({p, q});
    }
  }
}

MigrationVector DynamicsEngine::concurrent_round(const GameState& s, const ProtocolParams& params,
                                                 std::int64_t round_index, int threads) const {
  params.validate();
  const std::int64_t n = game_->num_players();
  const RoundContext rc(*this, s);

  std::vector<std::vector<PlayerDecision>> decisions;
  const bool parallel = threads > 1 && n >= 8192LL * threads;
  if (!parallel) {
    decisions.resize(1);
    process_players(s, rc, params, round_index, 0, n, decisions[0]);
  } else {
    decisions.resize(static_cast<std::size_t>(threads));
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      const std::int64_t begin = n * t / threads;
      const std::int64_t end = n * (t + 1) / threads;
      workers.emplace_back([&, t, begin, end] {
        process_players(s, rc, params, round_index, begin, end,
                        decisions[static_cast<std::size_t>(t)]);
      });
    }
    for (auto& w : workers) w.join();
  }

  MigrationVector mv;
  for (const auto& chunk : decisions) {
    for (const auto& decision : chunk) mv.add(decision.from, decision.to);
  }
  return mv;
}

MigrationVector DynamicsEngine::imitation_round(const GameState& s, const ProtocolParams& p,
                                                std::int64_t round_index, int threads) const {
  ProtocolParams params = p;
  params.protocol = Protocol::imitation;
  return concurrent_round(s, params, round_index, threads);
}

MigrationVector DynamicsEngine::exploration_round(const GameState& s, const ProtocolParams& p,
                                                  std::int64_t round_index, int threads) const {
  ProtocolParams params = p;
  params.protocol = Protocol::exploration;
  return concurrent_round(s, params, round_index, threads);
}

MigrationVector DynamicsEngine::combined_round(const GameState& s, const ProtocolParams& p,
                                               std::int64_t round_index, int threads) const {
  ProtocolParams params = p;
  params.protocol = Protocol::combined;
  return concurrent_round(s, params, round_index, threads);
}

MigrationVector DynamicsEngine::sequential_round(const GameState& s, const ProtocolParams& params,
                                                 std::int64_t round_index) const {
  const CongestionGame& g = *game_;
  // Strictly improving ordered pairs of used strategies, weighted by the
  // number of (player, sampled player) combinations realizing them.
  struct Candidate {
    int from;
    int to;
    std::int64_t weight;
  };
  std::vector<Candidate> candidates;
  std::int64_t total_weight = 0;
  for (const auto& group : g.groups()) {
    for (int from : group) {
      const std::int64_t on_origin = s.x[static_cast<std::size_t>(from)];
      if (on_origin < 1) continue;
      const double origin = strategy_latency(s, from);
      for (int to : group) {
        if (to == from) continue;
        const std::int64_t on_target = s.x[static_cast<std::size_t>(to)];
        if (on_target < 1) continue;
        if (after_move_latency(s, from, to) < origin) {
          const std::int64_t weight = on_origin * on_target;
          candidates.push_back({from, to, weight});
          total_weight += weight;
        }
      }
    }
  }
  MigrationVector mv;
  if (total_weight == 0) return mv;
  CounterRng rng(params.seed, static_cast<std::uint64_t>(round_index), 0);
  std::int64_t pick = rng.next_below(total_weight);
  for (const auto& candidate : candidates) {
    if (pick < candidate.weight) {
      mv.add(candidate.from, candidate.to);
      return mv;
    }
    pick -= candidate.weight;
  }
  mv.add(candidates.back().from, candidates.back().to);  // unreachable
  return mv;
}

MigrationVector DynamicsEngine::round(const GameState& s, const ProtocolParams& p,
                                      std::int64_t round_index, int threads) const {
  if (p.protocol == Protocol::sequential) return sequential_round(s, p, round_index);
  return concurrent_round(s, p, round_index, threads);
}

int DynamicsEngine::sample_imitation_target(const GameState& s, std::uint64_t seed,
                                            std::int64_t round_index, std::int64_t player) const {
  const RoundContext rc(*this, s);
  const int p = rc.strategy_of_player(player);
  const int gid = game_->group_of_strategy(p);
  const auto& group_strategies = game_->groups()[static_cast<std::size_t>(gid)];
  CounterRng rng(seed, static_cast<std::uint64_t>(round_index),
                 static_cast<std::uint64_t>(player));
  const std::int64_t t = rng.next_below(rc.group_total[static_cast<std::size_t>(gid)]);
  return rc.group_member_strategy(group_strategies, rc.group_cum[static_cast<std::size_t>(gid)],
                                  t);
}

GameState random_uniform_state(const CongestionGame& g, std::uint64_t seed) {
  if (g.restriction()) {
    throw std::invalid_argument("uniform initialization requires a symmetric strategy space");
  }
  std::vector<std::int64_t> x(static_cast<std::size_t>(g.num_strategies()), 0);
  const std::int64_t num_strategies = g.num_strategies();
  for (std::int64_t i = 0; i < g.num_players(); ++i) {
    CounterRng rng(seed, 0, static_cast<std::uint64_t>(i));
    ++x[static_cast<std::size_t>(rng.next_below(num_strategies))];
  }
  return make_state(g, std::move(x));
}

// ---- Run loop ----

namespace {

double default_stability_nu(const ProtocolParams& params, const ElasticityBounds& bounds) {
  if (params.protocol == Protocol::sequential) return 0.0;
  return params.nu_guard ? bounds.nu : 0.0;
}

bool stop_satisfied(const CongestionGame& g, const GameState& s, const StopRule& stop,
                    double stable_nu, double default_nu) {
  switch (stop.kind) {
    case StopKind::imitation_stable:
      return is_imitation_stable(g, s, stable_nu);
    case StopKind::nash:
      return is_nash(g, s);
    case StopKind::approx:
      return is_approx_equilibrium(g, s, stop.eq, default_nu);
    case StopKind::round_limit:
      return false;
  }
  return false;
}

}  // namespace

RunResult run(const DynamicsEngine& engine, GameState state, const ProtocolParams& params,
              const RunOptions& options) {
  params.validate();
  const CongestionGame& g = engine.game();
  validate_state(g, state);

  const double stable_nu = options.stop.nu.value_or(default_stability_nu(params, engine.bounds()));
  const double default_nu = engine.bounds().nu;

  RunResult result;
  Trace& trace = result.trace;
  std::int64_t migrations_last = 0;

  for (std::int64_t t = 0;; ++t) {
    if (options.record_rows) {
      const Averages av = engine.state_averages(state);
      TraceRow row;
      row.round = t;
      row.potential = engine.potential(state);
      row.l_av = av.l_av;
      row.l_av_plus = av.l_av_plus;
      row.max_used_latency = engine.max_used_latency(state);
      row.migrations = migrations_last;
      row.unsat_fraction = deviating_fraction(g, state, options.trace_eq, default_nu);
      trace.rows.push_back(row);
    }
    if (options.observer) options.observer(t, state);

    if (stop_satisfied(g, state, options.stop, stable_nu, default_nu)) {
      trace.converged = true;
      trace.rounds = t;
      break;
    }
    if (t >= params.round_limit) {
      trace.converged = false;
      trace.rounds = t;
      break;
    }

    MigrationVector mv = engine.round(state, params, t + 1, options.threads);
    if (options.audit_checks) {
      decompose(g, state, mv);  // throws if the decomposition bound fails
      const Averages av = engine.state_averages(state);
      const double phi = engine.potential(state);
      if (static_cast<double>(g.num_players()) * av.l_av_plus < phi - 1e-9 * std::max(1.0, phi)) {
        throw std::logic_error("potential exceeded n * l_av_plus; implementation bug");
      }
    }
    migrations_last = mv.total_moves();
    apply(g, state, mv);
    if (options.record_audit) trace.audit.push_back(std::move(mv));
  }

  result.final_state = std::move(state);
  return result;
}

RunResult run(const CongestionGame& g, GameState initial, const ProtocolParams& params,
              const RunOptions& options) {
  DynamicsEngine engine(g);
  return run(engine, std::move(initial), params, options);
}

}  // namespace imitate
