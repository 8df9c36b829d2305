#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "imitate/latency.hpp"

namespace imitate {

// Partition of the strategy set used by two-strategy threshold games: each
// player may only use the strategies of its group and only samples players of
// the same group. Symmetric games have no restriction (single implicit group).
struct StrategyRestriction {
  std::vector<int> group_of_strategy;  // strategy index -> group id (0..G-1)

  int num_groups() const;
  std::vector<std::vector<int>> strategies_by_group() const;
};

// Symmetric congestion game: m edges with latency functions, a shared set of
// strategies (edge subsets), and n players.
class CongestionGame {
 public:
  enum class Kind { network_derived, singleton, explicit_game };

  CongestionGame(std::vector<LatencyFunction> edges,
                 std::vector<std::vector<int>> strategies, std::int64_t n,
                 Kind kind = Kind::explicit_game,
                 std::optional<StrategyRestriction> restriction = std::nullopt);

  const std::vector<LatencyFunction>& edges() const { return edges_; }
  const LatencyFunction& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  const std::vector<std::vector<int>>& strategies() const { return strategies_; }
  const std::vector<int>& strategy(int p) const { return strategies_[static_cast<std::size_t>(p)]; }

  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_strategies() const { return static_cast<int>(strategies_.size()); }
  std::int64_t num_players() const { return n_; }
  Kind kind() const { return kind_; }

  // Structural test: every strategy is a single edge and no edge repeats.
  bool is_singleton() const { return singleton_; }

  const std::optional<StrategyRestriction>& restriction() const { return restriction_; }
  int num_groups() const { return num_groups_; }
  int group_of_strategy(int p) const;
  const std::vector<std::vector<int>>& groups() const { return groups_; }

 private:
  std::vector<LatencyFunction> edges_;
  std::vector<std::vector<int>> strategies_;
  std::int64_t n_;
  Kind kind_;
  bool singleton_;
  std::optional<StrategyRestriction> restriction_;
  int num_groups_;
  std::vector<std::vector<int>> groups_;  // strategies per group
};

// Players per strategy plus the derived per-edge congestions. The two vectors
// are kept consistent by construction and by apply().
struct GameState {
  std::vector<std::int64_t> x;       // per strategy
  std::vector<std::int64_t> x_edge;  // per edge: sum of x over strategies containing it
};

GameState make_state(const CongestionGame& g, std::vector<std::int64_t> players_per_strategy);

// Recomputes per-edge congestions from scratch.
std::vector<std::int64_t> edge_congestions(const CongestionGame& g,
                                           const std::vector<std::int64_t>& x);

void validate_state(const CongestionGame& g, const GameState& s);

// ---- Scalar quantities of a state ----

double path_latency(const CongestionGame& g, const GameState& s, int path);

// Latency of `path` with one extra player on every one of its edges.
double path_latency_plus(const CongestionGame& g, const GameState& s, int path);

// Latency of `to` after a single player moved from `from` to `to`; shared
// edges keep their congestion. Requires at least one player on `from`.
double latency_after_move(const CongestionGame& g, const GameState& s, int from, int to);

struct Averages {
  double l_av;       // player-weighted mean path latency
  double l_av_plus;  // same with each used path priced one player heavier
};

Averages averages(const CongestionGame& g, const GameState& s);

// Sum over edges e of l_e(1) + ... + l_e(x_e). Single-player improvements
// decrease it by exactly the mover's latency gain.
double rosenthal_potential(const CongestionGame& g, const GameState& s);

double max_used_path_latency(const CongestionGame& g, const GameState& s);

}  // namespace imitate
