#include "imitate/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace imitate {

ElasticityBounds compute_bounds(const CongestionGame& g) {
  const std::int64_t n = g.num_players();
  const int m = g.num_edges();

  double d = 1.0;
  for (int e = 0; e < m; ++e) {
    const LatencyFunction& f = g.edge(e);
    if (!(f.eval(1) > 0.0)) {
      throw std::invalid_argument("invalid game: latency at congestion 1 must be positive");
    }
    if (f.kind() == LatencyFunction::Kind::polynomial) {
      d = std::max(d, static_cast<double>(f.degree()));
    } else {
      double prev = f.eval(0);
      for (std::int64_t x = 1; x <= n; ++x) {
        const double cur = f.eval(x);
        d = std::max(d, (cur - prev) * static_cast<double>(x) / cur);
        prev = cur;
      }
    }
  }

  ElasticityBounds b;
  b.d = d;
  b.nu_e.resize(static_cast<std::size_t>(m));
  b.beta = 0.0;
  b.ell_min = std::numeric_limits<double>::infinity();

  const std::int64_t low_range = static_cast<std::int64_t>(std::ceil(d));
  for (int e = 0; e < m; ++e) {
    const LatencyFunction& f = g.edge(e);
    const std::int64_t cap =
        f.kind() == LatencyFunction::Kind::table ? std::min(low_range, n) : low_range;
    double nu_edge = 0.0;
    for (std::int64_t x = 1; x <= std::max<std::int64_t>(cap, 1); ++x) {
      nu_edge = std::max(nu_edge, f.eval(x) - f.eval(x - 1));
    }
    b.nu_e[static_cast<std::size_t>(e)] = nu_edge;
    for (std::int64_t x = 1; x <= n; ++x) {
      b.beta = std::max(b.beta, f.eval(x) - f.eval(x - 1));
    }
    b.ell_min = std::min(b.ell_min, f.eval(1));
  }

  b.nu_p.resize(static_cast<std::size_t>(g.num_strategies()));
  b.nu = 0.0;
  b.ell_max = 0.0;
  for (int p = 0; p < g.num_strategies(); ++p) {
    double nu_path = 0.0;
    double full_latency = 0.0;
    for (int e : g.strategy(p)) {
      nu_path += b.nu_e[static_cast<std::size_t>(e)];
      full_latency += g.edge(e).eval(n);
    }
    b.nu_p[static_cast<std::size_t>(p)] = nu_path;
    b.nu = std::max(b.nu, nu_path);
    b.ell_max = std::max(b.ell_max, full_latency);
  }
  return b;
}

}  // namespace imitate
