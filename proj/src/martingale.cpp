#include "imitate/martingale.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "imitate/decompose.hpp"

namespace imitate {

namespace {

// Neumaier-compensated sum; replay aggregation stays order-independent.
double compensated_sum(const std::vector<double>& values) {
  double sum = 0.0;
  double compensation = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

double sample_stderr(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double variance = ss / static_cast<double>(values.size() - 1);
  return std::sqrt(variance / static_cast<double>(values.size()));
}

}  // namespace

MartingaleReport martingale_test(const DynamicsEngine& engine, const GameState& s,
                                 const ProtocolParams& params, std::int64_t replays) {
  if (replays < 1) throw std::invalid_argument("need at least one replay");
  const CongestionGame& g = engine.game();
  validate_state(g, s);

  MartingaleReport report;
  report.replays = replays;
  const double stable_nu = params.nu_guard ? engine.bounds().nu : 0.0;
  report.input_stable = is_imitation_stable(g, s, stable_nu);

  std::vector<double> dphi(static_cast<std::size_t>(replays));
  std::vector<double> virt(static_cast<std::size_t>(replays));
  std::vector<double> slack(static_cast<std::size_t>(replays));
  for (std::int64_t r = 0; r < replays; ++r) {
    const MigrationVector mv = engine.imitation_round(s, params, r + 1);
    const double change = potential_change(g, s, mv);
    const double v = virtual_gain(g, s, mv);
    dphi[static_cast<std::size_t>(r)] = change;
    virt[static_cast<std::size_t>(r)] = v;
    slack[static_cast<std::size_t>(r)] = change - 0.5 * v;
  }

  const double count = static_cast<double>(replays);
  report.mean_dphi = compensated_sum(dphi) / count;
  report.mean_virtual = compensated_sum(virt) / count;
  report.mean_slack = compensated_sum(slack) / count;
  report.stderr_dphi = sample_stderr(dphi, report.mean_dphi);
  report.stderr_slack = sample_stderr(slack, report.mean_slack);

  if (report.input_stable) {
    // No move fires, so the decrease claims hold vacuously.
    report.supermartingale_ok = true;
    report.halved_bound_ok = true;
  } else {
    report.supermartingale_ok = report.mean_dphi + 3.0 * report.stderr_dphi < 0.0;
    report.halved_bound_ok = report.mean_slack <= 3.0 * report.stderr_slack;
  }
  return report;
}

MartingaleReport martingale_test(const CongestionGame& g, const GameState& s,
                                 const ProtocolParams& params, std::int64_t replays) {
  DynamicsEngine engine(g);
  return martingale_test(engine, s, params, replays);
}

}  // namespace imitate
