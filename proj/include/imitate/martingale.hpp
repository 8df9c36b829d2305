#pragma once

#include <cstdint>

#include "imitate/protocol.hpp"

namespace imitate {

// Monte-Carlo check that one imitation round decreases the potential in
// expectation and that the decrease is at least half the virtual gain.
struct MartingaleReport {
  std::int64_t replays = 0;
  bool input_stable = false;     // claims are vacuous at a stable input state
  double mean_dphi = 0.0;
  double stderr_dphi = 0.0;
  double mean_virtual = 0.0;
  double mean_slack = 0.0;       // mean of dphi - virtual/2
  double stderr_slack = 0.0;
  bool supermartingale_ok = false;  // mean_dphi + 3*stderr_dphi < 0
  bool halved_bound_ok = false;     // mean_slack <= 3*stderr_slack
};

MartingaleReport martingale_test(const CongestionGame& g, const GameState& s,
                                 const ProtocolParams& params, std::int64_t replays);

MartingaleReport martingale_test(const DynamicsEngine& engine, const GameState& s,
                                 const ProtocolParams& params, std::int64_t replays);

}  // namespace imitate
