// Command-line front end: loads or generates a game, runs the selected
// protocol, and writes traces and reports.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "imitate/experiment.hpp"
#include "imitate/game_io.hpp"

namespace {

imitate::Protocol parse_protocol(const std::string& name) {
  if (name == "imitation") return imitate::Protocol::imitation;
  if (name == "exploration") return imitate::Protocol::exploration;
  if (name == "combined") return imitate::Protocol::combined;
  if (name == "sequential") return imitate::Protocol::sequential;
  throw CLI::ValidationError("--protocol", "unknown protocol '" + name + "'");
}

imitate::StopKind parse_stop(const std::string& name) {
  if (name == "stable") return imitate::StopKind::imitation_stable;
  if (name == "nash") return imitate::StopKind::nash;
  if (name == "approx") return imitate::StopKind::approx;
  if (name == "rounds") return imitate::StopKind::round_limit;
  throw CLI::ValidationError("--stop", "unknown stop rule '" + name + "'");
}

struct CommonFlags {
  std::string game_file;
  std::string gen;
  std::string protocol = "imitation";
  std::string lambda = "default";
  bool nu_guard_off = false;
  std::string stop = "stable";
  double delta = 0.1;
  double epsilon = 0.1;
  std::int64_t rounds = 100000;
  int replicates = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
  std::int64_t replays = 10000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--game", game_file, "game file to load");
    cmd->add_option("--gen", gen, "generator spec, e.g. linear:a=1;2;4,n=1000");
    cmd->add_option("--protocol", protocol, "imitation | exploration | combined | sequential");
    cmd->add_option("--lambda", lambda, "damping constant, or 'default' / 'strict'");
    cmd->add_flag("--nu-guard-off", nu_guard_off, "drop the minimum-gain threshold");
    cmd->add_option("--stop", stop, "stable | nash | approx | rounds");
    cmd->add_option("--delta", delta, "approx stop: tolerated player fraction");
    cmd->add_option("--epsilon", epsilon, "approx stop: tolerated latency deviation");
    cmd->add_option("--rounds", rounds, "round limit");
    cmd->add_option("--replicates", replicates, "independent repetitions");
    cmd->add_option("--seed", seed, "base random seed");
    cmd->add_option("--threads", threads, "worker threads");
    cmd->add_option("--out", out, "output file (trace or table CSV)");
    cmd->add_option("--replays", replays, "single-round replays for audit");
  }

  imitate::ExperimentConfig to_config() const {
    imitate::ExperimentConfig config;
    config.game_file = game_file;
    config.gen = gen;
    config.params.protocol = parse_protocol(protocol);
    if (lambda == "strict") {
      config.params.lambda = imitate::strict_lambda();
    } else if (lambda != "default") {
      config.params.lambda = std::stod(lambda);
    }
    config.params.nu_guard = !nu_guard_off;
    config.params.seed = seed;
    config.params.round_limit = rounds;
    config.stop.kind = parse_stop(stop);
    config.stop.eq.delta = delta;
    config.stop.eq.epsilon = epsilon;
    config.replicates = replicates;
    config.threads = threads;
    config.out_path = out;
    config.audit_replays = replays;
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"concurrent imitation dynamics in congestion games"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, ext_flags, poi_flags, lb_flags, audit_flags;
  std::string sweep_axis = "n";
  std::string sweep_values;

  CLI::App* cmd_run = app.add_subcommand("run", "run one experiment to its stop rule");
  run_flags.attach(cmd_run);

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "rounds-to-equilibrium across an axis");
  sweep_flags.attach(cmd_sweep);
  cmd_sweep->add_option("--axis", sweep_axis, "n | lambda | epsilon | delta");
  cmd_sweep->add_option("--values", sweep_values, "comma-separated axis values")->required();

  CLI::App* cmd_ext = app.add_subcommand("extinction", "count emptied links over long runs");
  ext_flags.attach(cmd_ext);

  CLI::App* cmd_poi = app.add_subcommand("poi", "social cost of stable states vs optimum");
  poi_flags.attach(cmd_poi);

  CLI::App* cmd_lb = app.add_subcommand("lowerbound", "sequential runs on threshold games");
  lb_flags.attach(cmd_lb);

  CLI::App* cmd_audit = app.add_subcommand("audit", "single-round potential statistics");
  audit_flags.attach(cmd_audit);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      const auto report = imitate::run_experiment(run_flags.to_config());
      std::cout << report.to_json() << '\n';
      return report.exit_code;
    }
    if (cmd_sweep->parsed()) {
      std::vector<double> values;
      std::string token;
      for (char c : sweep_values + ",") {
        if (c == ',') {
          if (!token.empty()) values.push_back(std::stod(token));
          token.clear();
        } else {
          token.push_back(c);
        }
      }
      const auto report = imitate::sweep_experiment(sweep_flags.to_config(), sweep_axis, values);
      std::cout << report.to_json() << '\n';
      return 0;
    }
    if (cmd_ext->parsed()) {
      auto config = ext_flags.to_config();
      config.stop.kind = imitate::StopKind::round_limit;
      const auto report = imitate::extinction_experiment(config);
      std::cout << report.to_json() << '\n';
      return 0;
    }
    if (cmd_poi->parsed()) {
      const auto report = imitate::poi_experiment(poi_flags.to_config());
      std::cout << report.to_json() << '\n';
      return 0;
    }
    if (cmd_lb->parsed()) {
      const auto report = imitate::lowerbound_experiment(lb_flags.to_config());
      std::cout << report.to_json() << '\n';
      return report.all_invariants_ok ? 0 : 1;
    }
    if (cmd_audit->parsed()) {
      const auto report = imitate::audit_experiment(audit_flags.to_config());
      std::cout << imitate::martingale_to_json(report) << '\n';
      return 0;
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 1;
  }
  return 1;
}
