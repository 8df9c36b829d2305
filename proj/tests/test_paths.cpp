#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "imitate/bounds.hpp"
#include "imitate/network.hpp"
#include "imitate/rng.hpp"

using namespace imitate;

namespace {

// Independent vertex-walk enumerator used as the oracle.
void oracle_walks(const Network& net, int vertex, std::vector<bool>& visited,
                  std::vector<int>& walk, std::set<std::vector<int>>& found) {
  if (vertex == net.sink) {
    std::vector<int> sorted = walk;
    std::sort(sorted.begin(), sorted.end());
    found.insert(sorted);
    return;
  }
  visited[static_cast<std::size_t>(vertex)] = true;
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    if (net.edges[e].tail != vertex) continue;
    if (visited[static_cast<std::size_t>(net.edges[e].head)]) continue;
    walk.push_back(static_cast<int>(e));
    oracle_walks(net, net.edges[e].head, visited, walk, found);
    walk.pop_back();
  }
  visited[static_cast<std::size_t>(vertex)] = false;
}

std::set<std::vector<int>> oracle_paths(const Network& net) {
  std::set<std::vector<int>> found;
  std::vector<bool> visited(static_cast<std::size_t>(net.num_vertices), false);
  std::vector<int> walk;
  oracle_walks(net, net.source, visited, walk, found);
  return found;
}

bool edge_set_connects(const Network& net, const std::vector<int>& edge_set) {
  // Follows the unique outgoing edge of the set from the source.
  int vertex = net.source;
  std::vector<bool> used(edge_set.size(), false);
  for (std::size_t step = 0; step < edge_set.size(); ++step) {
    bool advanced = false;
    for (std::size_t i = 0; i < edge_set.size(); ++i) {
      if (used[i]) continue;
      if (net.edges[static_cast<std::size_t>(edge_set[i])].tail == vertex) {
        vertex = net.edges[static_cast<std::size_t>(edge_set[i])].head;
        used[i] = true;
        advanced = true;
        break;
      }
    }
    if (!advanced) return false;
  }
  return vertex == net.sink;
}

}  // namespace

TEST_CASE("two parallel links enumerate to two singleton paths") {
  Network net{2, {{0, 1}, {0, 1}}, 0, 1};
  const auto paths = enumerate_paths(net);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0] == std::vector<int>{0});
  CHECK(paths[1] == std::vector<int>{1});
}

TEST_CASE("two-hop grid matches the walk oracle") {
  // s -> a -> t and s -> b -> t.
  Network net{4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, 0, 3};
  const auto paths = enumerate_paths(net);
  REQUIRE(paths.size() == 2);
  for (const auto& path : paths) CHECK(path.size() == 2);

  const auto expected = oracle_paths(net);
  CHECK(std::set<std::vector<int>>(paths.begin(), paths.end()) == expected);
}

TEST_CASE("diamond with shortcut matches the walk oracle") {
  Network net{4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}, 0, 3};
  const auto paths = enumerate_paths(net);
  const auto expected = oracle_paths(net);
  CHECK(std::set<std::vector<int>>(paths.begin(), paths.end()) == expected);
  CHECK(paths.size() == 4);

  // Determinism and ordering.
  const auto again = enumerate_paths(net);
  CHECK(paths == again);
  CHECK(std::is_sorted(paths.begin(), paths.end()));

  // Every returned edge set walks from source to sink.
  for (const auto& path : paths) CHECK(edge_set_connects(net, path));
}

TEST_CASE("disconnected network is an error") {
  Network net{3, {{0, 1}}, 0, 2};
  CHECK_THROWS_AS(enumerate_paths(net), std::runtime_error);
}

TEST_CASE("path explosion trips the cap") {
  // Layered graph with 2^10 paths.
  Network net{0, {}, 0, 0};
  const int layers = 10;
  net.num_vertices = layers + 1;
  for (int l = 0; l < layers; ++l) {
    net.edges.push_back({l, l + 1});
    net.edges.push_back({l, l + 1});
  }
  net.source = 0;
  net.sink = layers;
  CHECK_THROWS_AS(enumerate_paths(net, 100), std::runtime_error);
  CHECK(enumerate_paths(net, 1 << 10).size() == 1 << 10);
}

TEST_CASE("network-derived game wires edges and strategies together") {
  Network net{2, {{0, 1}, {0, 1}}, 0, 1};
  auto g = game_from_network(net, {LatencyFunction::linear(1.0), LatencyFunction::linear(2.0)},
                             4);
  CHECK(g.kind() == CongestionGame::Kind::network_derived);
  CHECK(g.is_singleton());
  CHECK(g.num_strategies() == 2);
}

TEST_CASE("singleton game construction") {
  auto solo = singleton_game({LatencyFunction::linear(1.0)}, 3);
  CHECK(solo.num_strategies() == 1);
  CHECK(solo.is_singleton());

  auto pair = singleton_game({LatencyFunction::linear(1.0), LatencyFunction::linear(2.0)}, 3);
  CongestionGame explicit_pair({LatencyFunction::linear(1.0), LatencyFunction::linear(2.0)},
                               {{0}, {1}}, 3);
  CHECK(pair.strategies() == explicit_pair.strategies());

  // Large random-coefficient construction passes the bounds computation.
  CounterRng rng(17, 0, 0);
  std::vector<LatencyFunction> links;
  for (int e = 0; e < 100; ++e) {
    links.push_back(LatencyFunction::linear(0.5 + rng.next_double() * 3.0));
  }
  auto big = singleton_game(std::move(links), 10000);
  const auto b = compute_bounds(big);
  CHECK(b.d == 1.0);
  CHECK(b.ell_min > 0.0);
  CHECK(b.nu > 0.0);
}
