#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "imitate/bounds.hpp"
#include "imitate/equilibrium.hpp"
#include "imitate/game.hpp"
#include "imitate/migration.hpp"

namespace imitate {

enum class Protocol { imitation, exploration, combined, sequential };

// Loose default; converges far faster than the strict preset and still keeps
// concurrent rounds from overshooting in practice.
inline constexpr double kLambdaDefault = 1.0 / 512.0;

// Conservative damping constant under which every step of the convergence
// analysis goes through.
double strict_lambda();

struct ProtocolParams {
  Protocol protocol = Protocol::imitation;
  double lambda = kLambdaDefault;
  bool nu_guard = true;            // require gains above the slope bound nu
  bool elasticity_damping = true;  // divide the imitation probability by d
  std::uint64_t seed = 1;
  std::int64_t round_limit = 100000;

  void validate() const;
};

// Probability that a player on a path with latency `origin` adopts a sampled
// path whose latency after the lone move would be `target_after`:
// (lambda/d) * relative gain, and zero unless the gain exceeds nu.
double imitation_migration_prob(double origin, double target_after, double d, double nu,
                                double lambda);

// Uniform-sampling variant: the elasticity cannot damp overshooting when
// empty paths can be sampled, so the probability scales with
// num_strategies * ell_min / (beta * n) instead, clamped to 1.
double exploration_migration_prob(double origin, double target_after,
                                  std::int64_t num_strategies, double ell_min, double beta,
                                  std::int64_t n, double lambda);

// Executes protocol rounds over immutable state snapshots. Player decisions
// are keyed by (seed, round, player) counter streams, so a round's migration
// vector is a pure function of its inputs, independent of evaluation order
// and thread count.
class DynamicsEngine {
 public:
  explicit DynamicsEngine(const CongestionGame& g);

  const CongestionGame& game() const { return *game_; }
  const ElasticityBounds& bounds() const { return bounds_; }

  MigrationVector round(const GameState& s, const ProtocolParams& p, std::int64_t round_index,
                        int threads = 1) const;

  MigrationVector imitation_round(const GameState& s, const ProtocolParams& p,
                                  std::int64_t round_index, int threads = 1) const;
  MigrationVector exploration_round(const GameState& s, const ProtocolParams& p,
                                    std::int64_t round_index, int threads = 1) const;
  MigrationVector combined_round(const GameState& s, const ProtocolParams& p,
                                 std::int64_t round_index, int threads = 1) const;

  // One uniformly sampled strictly improving imitation move, if any exists.
  MigrationVector sequential_round(const GameState& s, const ProtocolParams& p,
                                   std::int64_t round_index) const;

  // Path sampled by `player` under imitation in a given round; test hook for
  // the proportional-sampling property.
  int sample_imitation_target(const GameState& s, std::uint64_t seed, std::int64_t round_index,
                              std::int64_t player) const;

  // Table-backed evaluations; values match the direct game-level functions.
  double potential(const GameState& s) const;
  Averages state_averages(const GameState& s) const;
  double strategy_latency(const GameState& s, int p) const;
  double max_used_latency(const GameState& s) const;

 private:
  struct RoundContext;
  struct PlayerDecision;

  double after_move_latency(const GameState& s, int from, int to) const;
  void process_players(const GameState& s, const RoundContext& rc, const ProtocolParams& p,
                       std::int64_t round_index, std::int64_t begin, std::int64_t end,
                       std::vector<PlayerDecision>& out) const;
  MigrationVector concurrent_round(const GameState& s, const ProtocolParams& p,
                                   std::int64_t round_index, int threads) const;

  const CongestionGame* game_;
  ElasticityBounds bounds_;
  std::vector<std::vector<double>> values_;  // per edge: latency at 0..n+1
  std::vector<std::vector<double>> prefix_;  // per edge: summed latency 1..k
};

// Uniform random strategy per player, keyed by (seed, round 0, player).
GameState random_uniform_state(const CongestionGame& g, std::uint64_t seed);

enum class StopKind { imitation_stable, nash, approx, round_limit };

struct StopRule {
  StopKind kind = StopKind::imitation_stable;
  std::optional<double> nu;  // stability slack; defaults to the protocol's threshold
  EquilibriumParams eq;      // approx-equilibrium parameters
};

struct TraceRow {
  std::int64_t round;
  double potential;
  double l_av;
  double l_av_plus;
  double max_used_latency;
  std::int64_t migrations;
  double unsat_fraction;
};

struct Trace {
  std::vector<TraceRow> rows;
  bool converged = false;
  std::int64_t rounds = 0;
  std::vector<MigrationVector> audit;  // per-round vectors when recording is on
};

struct RunOptions {
  StopRule stop;
  EquilibriumParams trace_eq;  // parameters behind the unsat_fraction column
  int threads = 1;
  bool record_rows = true;
  bool record_audit = false;
  bool audit_checks = false;  // per-round decomposition-bound and n*l_av_plus >= potential checks
  std::function<void(std::int64_t round, const GameState&)> observer;
};

struct RunResult {
  Trace trace;
  GameState final_state;
};

RunResult run(const DynamicsEngine& engine, GameState initial, const ProtocolParams& params,
              const RunOptions& options);
RunResult run(const CongestionGame& g, GameState initial, const ProtocolParams& params,
              const RunOptions& options);

}  // namespace imitate
