#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "imitate/game.hpp"

namespace imitate {

// One round's realized moves: non-negative counts per ordered strategy pair
// (from, to), from != to. Feasible against a state when no origin loses more
// players than it has.
class MigrationVector {
 public:
  struct Move {
    int from;
    int to;
    std::int64_t count;
  };

  void add(int from, int to, std::int64_t count = 1);
  std::int64_t count(int from, int to) const;
  bool empty() const { return moves_.empty(); }
  std::int64_t total_moves() const;

  // Entries sorted by (from, to); the canonical iteration order.
  std::vector<Move> sorted_moves() const;

  // Net change per strategy: arrivals minus departures.
  std::vector<std::int64_t> delta_per_strategy(int num_strategies) const;

  // Net change per edge induced by the per-strategy deltas.
  std::vector<std::int64_t> delta_per_edge(const CongestionGame& g) const;

  // Total departures per origin strategy.
  std::vector<std::int64_t> departures_per_strategy(int num_strategies) const;

  void validate_feasible(const CongestionGame& g, const GameState& s) const;

  void merge(const MigrationVector& other);

 private:
  static std::uint64_t key(int from, int to) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 32) |
           static_cast<std::uint32_t>(to);
  }

  std::unordered_map<std::uint64_t, std::int64_t> moves_;
};

// Applies a feasible migration vector in place, keeping edge congestions
// consistent.
void apply(const CongestionGame& g, GameState& s, const MigrationVector& mv);

}  // namespace imitate
