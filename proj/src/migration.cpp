#include "imitate/migration.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace imitate {

void MigrationVector::add(int from, int to, std::int64_t count) {
  if (from == to) throw std::invalid_argument("migration requires distinct origin and target");
  if (count < 0) throw std::invalid_argument("migration counts must be >= 0");
  if (count == 0) return;
  moves_[key(from, to)] += count;
}

std::int64_t MigrationVector::count(int from, int to) const {
  const auto it = moves_.find(key(from, to));
  return it == moves_.end() ? 0 : it->second;
}

std::int64_t MigrationVector::total_moves() const {
  std::int64_t total = 0;
  for (const auto& [_, count] : moves_) total += count;
  return total;
}

std::vector<MigrationVector::Move> MigrationVector::sorted_moves() const {
  std::vector<Move> moves;
  moves.reserve(moves_.size());
  for (const auto& [packed, count] : moves_) {
    moves.push_back({static_cast<int>(packed >> 32), static_cast<int>(packed & 0xffffffffu), count});
  }
  std::sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  return moves;
}

std::vector<std::int64_t> MigrationVector::delta_per_strategy(int num_strategies) const {
  std::vector<std::int64_t> delta(static_cast<std::size_t>(num_strategies), 0);
  for (const auto& [packed, count] : moves_) {
    const int from = static_cast<int>(packed >> 32);
    const int to = static_cast<int>(packed & 0xffffffffu);
    if (from < 0 || from >= num_strategies || to < 0 || to >= num_strategies) {
      throw std::invalid_argument("migration references invalid strategy index");
    }
    delta[static_cast<std::size_t>(from)] -= count;
    delta[static_cast<std::size_t>(to)] += count;
  }
  return delta;
}

std::vector<std::int64_t> MigrationVector::delta_per_edge(const CongestionGame& g) const {
  const auto per_strategy = delta_per_strategy(g.num_strategies());
  std::vector<std::int64_t> delta(static_cast<std::size_t>(g.num_edges()), 0);
  for (int p = 0; p < g.num_strategies(); ++p) {
    const std::int64_t d = per_strategy[static_cast<std::size_t>(p)];
    if (d == 0) continue;
    for (int e : g.strategy(p)) delta[static_cast<std::size_t>(e)] += d;
  }
  return delta;
}

std::vector<std::int64_t> MigrationVector::departures_per_strategy(int num_strategies) const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(num_strategies), 0);
  for (const auto& [packed, count] : moves_) {
    const int from = static_cast<int>(packed >> 32);
    if (from < 0 || from >= num_strategies) {
      throw std::invalid_argument("migration references invalid strategy index");
    }
    out[static_cast<std::size_t>(from)] += count;
  }
  return out;
}

void MigrationVector::validate_feasible(const CongestionGame& g, const GameState& s) const {
  const auto departures = departures_per_strategy(g.num_strategies());
  for (int p = 0; p < g.num_strategies(); ++p) {
    if (departures[static_cast<std::size_t>(p)] > s.x[static_cast<std::size_t>(p)]) {
      throw std::invalid_argument("infeasible migration: strategy " + std::to_string(p) +
                                  " loses more players than it has");
    }
  }
  if (g.restriction()) {
    for (const auto& move : sorted_moves()) {
      if (g.group_of_strategy(move.from) != g.group_of_strategy(move.to)) {
        throw std::invalid_argument("migration crosses strategy groups");
      }
    }
  }
}

void MigrationVector::merge(const MigrationVector& other) {
  for (const auto& [packed, count] : other.moves_) moves_[packed] += count;
}

void apply(const CongestionGame& g, GameState& s, const MigrationVector& mv) {
  mv.validate_feasible(g, s);
  const auto per_strategy = mv.delta_per_strategy(g.num_strategies());
  for (int p = 0; p < g.num_strategies(); ++p) {
    const std::int64_t d = per_strategy[static_cast<std::size_t>(p)];
    if (d == 0) continue;
    s.x[static_cast<std::size_t>(p)] += d;
    for (int e : g.strategy(p)) s.x_edge[static_cast<std::size_t>(e)] += d;
  }
}

}  // namespace imitate
