#pragma once

#include <cstdint>
#include <vector>

#include "imitate/game.hpp"

namespace imitate {

// Directed multigraph with a designated source and sink. Edge ids are the
// positions in `edges` and double as the game's edge ids.
struct Network {
  struct Arc {
    int tail;
    int head;
  };

  int num_vertices;
  std::vector<Arc> edges;
  int source;
  int sink;
};

void validate_network(const Network& net);

// All simple source-sink paths as canonical sorted edge-id sets, ordered
// lexicographically. Distinct walks over the same edge set collapse to one
// strategy. Throws if no path exists or more than `cap` paths are found.
std::vector<std::vector<int>> enumerate_paths(const Network& net, std::size_t cap = 1000000);

// Game over the network's paths.
CongestionGame game_from_network(const Network& net, std::vector<LatencyFunction> latencies,
                                 std::int64_t n, std::size_t cap = 1000000);

// Parallel-links game: strategy i = {edge i}.
CongestionGame singleton_game(std::vector<LatencyFunction> latencies, std::int64_t n);

}  // namespace imitate
