#include "imitate/game.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace imitate {

int StrategyRestriction::num_groups() const {
  int max_group = -1;
  for (int gid : group_of_strategy) max_group = std::max(max_group, gid);
  return max_group + 1;
}

std::vector<std::vector<int>> StrategyRestriction::strategies_by_group() const {
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(num_groups()));
  for (std::size_t p = 0; p < group_of_strategy.size(); ++p) {
    const int gid = group_of_strategy[p];
    if (gid < 0) throw std::invalid_argument("restriction group ids must be >= 0");
    groups[static_cast<std::size_t>(gid)].push_back(static_cast<int>(p));
  }
  for (const auto& members : groups) {
    if (members.empty()) throw std::invalid_argument("restriction group ids must be contiguous");
  }
  return groups;
}

CongestionGame::CongestionGame(std::vector<LatencyFunction> edges,
                               std::vector<std::vector<int>> strategies, std::int64_t n,
                               Kind kind, std::optional<StrategyRestriction> restriction)
    : edges_(std::move(edges)),
      strategies_(std::move(strategies)),
      n_(n),
      kind_(kind),
      restriction_(std::move(restriction)) {
  if (edges_.empty()) throw std::invalid_argument("game needs at least one edge");
  if (strategies_.empty()) throw std::invalid_argument("game needs at least one strategy");
  if (n_ < 1) throw std::invalid_argument("game needs at least one player");

  const int m = num_edges();
  for (auto& strat : strategies_) {
    if (strat.empty()) throw std::invalid_argument("strategies must be non-empty edge sets");
    std::sort(strat.begin(), strat.end());
    strat.erase(std::unique(strat.begin(), strat.end()), strat.end());
    for (int e : strat) {
      if (e < 0 || e >= m) {
        throw std::invalid_argument("strategy references invalid edge id " + std::to_string(e));
      }
    }
  }

  // Table latencies must cover every congestion a state can produce.
  for (const auto& f : edges_) {
    if (f.kind() == LatencyFunction::Kind::table && f.table_max_arg() != n_) {
      throw std::invalid_argument("table latency must have exactly n+1 entries");
    }
  }

  singleton_ = true;
  std::set<int> seen;
  for (const auto& strat : strategies_) {
    if (strat.size() != 1 || !seen.insert(strat[0]).second) {
      singleton_ = false;
      break;
    }
  }
  if (kind_ == Kind::singleton && !singleton_) {
    throw std::invalid_argument("singleton game requires distinct single-edge strategies");
  }

  if (restriction_) {
    if (restriction_->group_of_strategy.size() != strategies_.size()) {
      throw std::invalid_argument("restriction must cover every strategy");
    }
    groups_ = restriction_->strategies_by_group();
    num_groups_ = static_cast<int>(groups_.size());
  } else {
    groups_.resize(1);
    groups_[0].resize(strategies_.size());
    for (int p = 0; p < num_strategies(); ++p) groups_[0][static_cast<std::size_t>(p)] = p;
    num_groups_ = 1;
  }
}

int CongestionGame::group_of_strategy(int p) const {
  if (!restriction_) return 0;
  return restriction_->group_of_strategy[static_cast<std::size_t>(p)];
}

std::vector<std::int64_t> edge_congestions(const CongestionGame& g,
                                           const std::vector<std::int64_t>& x) {
  std::vector<std::int64_t> congestion(static_cast<std::size_t>(g.num_edges()), 0);
  for (int p = 0; p < g.num_strategies(); ++p) {
    const std::int64_t players = x[static_cast<std::size_t>(p)];
    if (players == 0) continue;
    for (int e : g.strategy(p)) congestion[static_cast<std::size_t>(e)] += players;
  }
  return congestion;
}

GameState make_state(const CongestionGame& g, std::vector<std::int64_t> players_per_strategy) {
  if (static_cast<int>(players_per_strategy.size()) != g.num_strategies()) {
    throw std::invalid_argument("state must assign players to every strategy");
  }
  std::int64_t total = 0;
  for (std::int64_t count : players_per_strategy) {
    if (count < 0) throw std::invalid_argument("player counts must be >= 0");
    total += count;
  }
  if (total != g.num_players()) {
    throw std::invalid_argument("state must place exactly n players, got " +
                                std::to_string(total));
  }
  GameState s;
  s.x_edge = edge_congestions(g, players_per_strategy);
  s.x = std::move(players_per_strategy);
  return s;
}

void validate_state(const CongestionGame& g, const GameState& s) {
  GameState rebuilt = make_state(g, s.x);
  if (rebuilt.x_edge != s.x_edge) {
    throw std::logic_error("state edge congestions inconsistent with strategy counts");
  }
}

double path_latency(const CongestionGame& g, const GameState& s, int path) {
  if (path < 0 || path >= g.num_strategies()) {
    throw std::invalid_argument("invalid path index " + std::to_string(path));
  }
  double total = 0.0;
  for (int e : g.strategy(path)) {
    total += g.edge(e).eval(s.x_edge[static_cast<std::size_t>(e)]);
  }
  return total;
}

double path_latency_plus(const CongestionGame& g, const GameState& s, int path) {
  if (path < 0 || path >= g.num_strategies()) {
    throw std::invalid_argument("invalid path index " + std::to_string(path));
  }
  double total = 0.0;
  for (int e : g.strategy(path)) {
    total += g.edge(e).eval_clamped(s.x_edge[static_cast<std::size_t>(e)] + 1);
  }
  return total;
}

double latency_after_move(const CongestionGame& g, const GameState& s, int from, int to) {
  if (from < 0 || from >= g.num_strategies() || to < 0 || to >= g.num_strategies()) {
    throw std::invalid_argument("invalid path index");
  }
  if (s.x[static_cast<std::size_t>(from)] < 1) {
    throw std::invalid_argument("latency_after_move requires a player on the origin path");
  }
  if (from == to) return path_latency(g, s, to);
  const auto& origin = g.strategy(from);
  double total = 0.0;
  for (int e : g.strategy(to)) {
    const bool shared = std::binary_search(origin.begin(), origin.end(), e);
    const std::int64_t congestion = s.x_edge[static_cast<std::size_t>(e)] + (shared ? 0 : 1);
    total += g.edge(e).eval(congestion);
  }
  return total;
}

Averages averages(const CongestionGame& g, const GameState& s) {
  const double n = static_cast<double>(g.num_players());
  double l_av = 0.0;
  double l_av_plus = 0.0;
  for (int p = 0; p < g.num_strategies(); ++p) {
    const std::int64_t players = s.x[static_cast<std::size_t>(p)];
    if (players == 0) continue;
    const double weight = static_cast<double>(players) / n;
    l_av += weight * path_latency(g, s, p);
    l_av_plus += weight * path_latency_plus(g, s, p);
  }
  return {l_av, l_av_plus};
}

double rosenthal_potential(const CongestionGame& g, const GameState& s) {
  double total = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) {
    const std::int64_t congestion = s.x_edge[static_cast<std::size_t>(e)];
    for (std::int64_t i = 1; i <= congestion; ++i) {
      total += g.edge(e).eval(i);
    }
  }
  return total;
}

double max_used_path_latency(const CongestionGame& g, const GameState& s) {
  double max_latency = 0.0;
  for (int p = 0; p < g.num_strategies(); ++p) {
    if (s.x[static_cast<std::size_t>(p)] == 0) continue;
    max_latency = std::max(max_latency, path_latency(g, s, p));
  }
  return max_latency;
}

}  // namespace imitate
