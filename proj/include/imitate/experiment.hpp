#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "imitate/generators.hpp"
#include "imitate/martingale.hpp"
#include "imitate/protocol.hpp"
#include "imitate/singleton_opt.hpp"

namespace imitate {

// Generator description of the form "kind:key=value,key=value". List values
// use ';' separators, e.g. "linear:a=1;2;4,n=1000".
struct GenSpec {
  std::string kind;
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::vector<double> list(const std::string& key) const;
};

GenSpec parse_gen_spec(const std::string& text);

struct Instance {
  CongestionGame game;
  GameState state;
  std::optional<ThresholdGameSpec> threshold;
};

// game_seed fixes randomly generated games, init_seed the initial assignment;
// generators with canonical start states ignore init_seed.
Instance build_instance(const GenSpec& spec, std::uint64_t game_seed, std::uint64_t init_seed);

struct ExperimentConfig {
  std::string game_file;  // exactly one of game_file / gen
  std::string gen;
  ProtocolParams params;
  StopRule stop;
  int replicates = 1;
  int threads = 1;
  std::int64_t audit_replays = 10000;
  std::string out_path;

  void validate() const;
};

Instance load_instance(const ExperimentConfig& config, std::uint64_t init_seed);

// ---- run ----
struct RunReport {
  bool converged = false;
  std::int64_t rounds = 0;
  double final_potential = 0.0;
  std::optional<double> final_social_cost;  // singleton games only
  int exit_code = 0;                        // 0 converged, 2 round limit

  std::string to_json() const;
};

RunReport run_experiment(const ExperimentConfig& config);

// ---- sweep ----
struct SweepCell {
  double value = 0.0;
  std::vector<std::int64_t> rounds;  // per replicate
  int converged_count = 0;
  double median = 0.0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct SweepReport {
  std::string axis;
  std::vector<SweepCell> cells;

  std::string to_json() const;
  std::string to_csv() const;
};

SweepReport sweep_experiment(const ExperimentConfig& config, const std::string& axis,
                             const std::vector<double>& values);

// ---- extinction ----
struct ExtinctionReport {
  int replicates = 0;
  std::int64_t rounds = 0;
  int runs_with_empty_edge = 0;
  std::vector<std::int64_t> min_congestion;     // per edge, over all runs and rounds
  std::vector<double> fractional_load;          // per edge, when latencies are linear
  bool all_above_half_fractional = false;

  std::string to_json() const;
};

ExtinctionReport extinction_experiment(const ExperimentConfig& config);

// ---- price of imitation ----
struct PoiRun {
  bool converged = false;
  std::int64_t rounds = 0;
  double social_cost = 0.0;
  double ratio = 0.0;  // social cost over the fractional optimum cost
  bool all_used = false;
  bool bounds_ok = false;  // deterministic cost-bound check, all-used runs only
};

struct PoiReport {
  double optimum_cost = 0.0;
  bool has_useless_links = false;
  double min_fractional_load = 0.0;
  bool fractional_load_logn_ok = false;  // min fractional load >= ln(n)
  std::vector<PoiRun> runs;
  double mean_ratio = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int emptied_runs = 0;
  bool all_used_bounds_ok = false;

  std::string to_json() const;
};

PoiReport poi_experiment(const ExperimentConfig& config);

// ---- sequential lower bound ----
struct LowerBoundRun {
  std::int64_t steps = 0;
  bool converged = false;
  bool invariant_ok = false;
};

struct LowerBoundReport {
  std::vector<LowerBoundRun> runs;
  bool all_invariants_ok = false;

  std::string to_json() const;
};

LowerBoundReport lowerbound_experiment(const ExperimentConfig& config);

// ---- martingale audit ----
MartingaleReport audit_experiment(const ExperimentConfig& config);
std::string martingale_to_json(const MartingaleReport& report);

// Verbosity from the IMITATE_DYN_LOG environment variable (0 = silent).
int log_level();
void log_line(int level, const std::string& message);

}  // namespace imitate
