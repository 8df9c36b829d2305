#include "imitate/network.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace imitate {

void validate_network(const Network& net) {
  if (net.num_vertices < 1) throw std::invalid_argument("network needs at least one vertex");
  auto check_vertex = [&](int v, const char* what) {
    if (v < 0 || v >= net.num_vertices) {
      throw std::invalid_argument(std::string("invalid ") + what + " vertex");
    }
  };
  check_vertex(net.source, "source");
  check_vertex(net.sink, "sink");
  for (const auto& arc : net.edges) {
    check_vertex(arc.tail, "edge tail");
    check_vertex(arc.head, "edge head");
  }
}

std::vector<std::vector<int>> enumerate_paths(const Network& net, std::size_t cap) {
  validate_network(net);

  std::vector<std::vector<int>> out_edges(static_cast<std::size_t>(net.num_vertices));
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    out_edges[static_cast<std::size_t>(net.edges[e].tail)].push_back(static_cast<int>(e));
  }
  // Ascending edge ids per vertex so the walk order is deterministic.
  for (auto& ids : out_edges) std::sort(ids.begin(), ids.end());

  std::set<std::vector<int>> canonical;
  std::vector<int> walk;
  std::vector<bool> visited(static_cast<std::size_t>(net.num_vertices), false);

  auto dfs = [&](auto&& self, int vertex) -> void {
    if (vertex == net.sink) {
      std::vector<int> edge_set = walk;
      std::sort(edge_set.begin(), edge_set.end());
      canonical.insert(std::move(edge_set));
      if (canonical.size() > cap) {
        throw std::runtime_error("path enumeration exceeded cap of " + std::to_string(cap) +
                                 "; raise the cap or supply explicit strategies");
      }
      return;
    }
    visited[static_cast<std::size_t>(vertex)] = true;
    for (int e : out_edges[static_cast<std::size_t>(vertex)]) {
      const int head = net.edges[static_cast<std::size_t>(e)].head;
      if (visited[static_cast<std::size_t>(head)]) continue;
      walk.push_back(e);
      self(self, head);
      walk.pop_back();
    }
    visited[static_cast<std::size_t>(vertex)] = false;
  };

  if (net.source == net.sink) {
    throw std::invalid_argument("source and sink must differ");
  }
  dfs(dfs, net.source);

  if (canonical.empty()) {
    throw std::runtime_error("network has no source-sink path");
  }
  return {canonical.begin(), canonical.end()};
}

CongestionGame game_from_network(const Network& net, std::vector<LatencyFunction> latencies,
                                 std::int64_t n, std::size_t cap) {
  if (latencies.size() != net.edges.size()) {
    throw std::invalid_argument("need one latency function per network edge");
  }
  auto strategies = enumerate_paths(net, cap);
  return CongestionGame(std::move(latencies), std::move(strategies), n,
                        CongestionGame::Kind::network_derived);
}

CongestionGame singleton_game(std::vector<LatencyFunction> latencies, std::int64_t n) {
  if (latencies.empty()) throw std::invalid_argument("singleton game needs at least one link");
  std::vector<std::vector<int>> strategies(latencies.size());
  for (std::size_t i = 0; i < latencies.size(); ++i) {
    strategies[i] = {static_cast<int>(i)};
  }
  return CongestionGame(std::move(latencies), std::move(strategies), n,
                        CongestionGame::Kind::singleton);
}

}  // namespace imitate
