#include "imitate/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "imitate/game_io.hpp"
#include "imitate/network.hpp"
#include "imitate/rng.hpp"

namespace imitate {

using json = nlohmann::json;

int log_level() {
  static const int level = [] {
    const char* raw = std::getenv("IMITATE_DYN_LOG");
    return raw ? std::atoi(raw) : 0;
  }();
  return level;
}

void log_line(int level, const std::string& message) {
  if (log_level() >= level) std::cerr << "[imitate] " << message << '\n';
}

// ---- gen specs ----

double GenSpec::number(const std::string& key) const {
  const auto it = kv.find(key);
  if (it == kv.end()) throw std::invalid_argument("gen spec is missing key '" + key + "'");
  return std::stod(it->second);
}

double GenSpec::number_or(const std::string& key, double fallback) const {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : std::stod(it->second);
}

std::vector<double> GenSpec::list(const std::string& key) const {
  const auto it = kv.find(key);
  if (it == kv.end()) throw std::invalid_argument("gen spec is missing key '" + key + "'");
  std::vector<double> values;
  std::string token;
  for (char c : it->second + ";") {
    if (c == ';') {
      if (!token.empty()) values.push_back(std::stod(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  return values;
}

GenSpec parse_gen_spec(const std::string& text) {
  GenSpec spec;
  const auto colon = text.find(':');
  spec.kind = text.substr(0, colon);
  if (spec.kind.empty()) throw std::invalid_argument("empty gen spec kind");
  if (colon == std::string::npos) return spec;

  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("gen spec entry needs key=value");
    spec.kv[token.substr(0, eq)] = token.substr(eq + 1);
    token.clear();
  };
  for (char c : text.substr(colon + 1)) {
    if (c == ',') {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  return spec;
}

Instance build_instance(const GenSpec& spec, std::uint64_t game_seed, std::uint64_t init_seed) {
  if (spec.kind == "singleton") {
    const std::uint64_t seed =
        static_cast<std::uint64_t>(spec.number_or("seed", static_cast<double>(game_seed)));
    auto inst = random_singleton(static_cast<int>(spec.number("m")),
                                 static_cast<std::int64_t>(spec.number("n")),
                                 spec.number_or("lo", 1.0), spec.number_or("hi", 4.0),
                                 static_cast<int>(spec.number_or("deg", 1.0)), seed);
    GameState state = random_uniform_state(inst.game, init_seed);
    return {std::move(inst.game), std::move(state), std::nullopt};
  }
  if (spec.kind == "linear" || spec.kind == "scaled_linear") {
    const auto a = spec.list("a");
    const std::int64_t n = static_cast<std::int64_t>(spec.number("n"));
    std::vector<LatencyFunction> links;
    links.reserve(a.size());
    for (double coefficient : a) {
      const double slope =
          spec.kind == "scaled_linear" ? coefficient / static_cast<double>(n) : coefficient;
      links.push_back(LatencyFunction::linear(slope));
    }
    CongestionGame game = singleton_game(std::move(links), n);
    GameState state = random_uniform_state(game, init_seed);
    return {std::move(game), std::move(state), std::nullopt};
  }
  if (spec.kind == "overshoot") {
    auto inst = build_overshoot_pair(spec.number("c"), static_cast<int>(spec.number("d")),
                                     static_cast<std::int64_t>(spec.number("n")),
                                     static_cast<std::int64_t>(spec.number("x2")));
    return {std::move(inst.game), std::move(inst.state), std::nullopt};
  }
  if (spec.kind == "samplb") {
    auto inst = build_sampling_lowerbound(static_cast<int>(spec.number("m")));
    return {std::move(inst.game), std::move(inst.state), std::nullopt};
  }
  if (spec.kind == "threshold") {
    const std::uint64_t seed =
        static_cast<std::uint64_t>(spec.number_or("seed", static_cast<double>(game_seed)));
    const auto threshold_spec = random_threshold_spec(
        static_cast<int>(spec.number("nbase")), static_cast<int>(spec.number_or("amax", 10.0)),
        seed, spec.number_or("tripled", 1.0) != 0.0);
    CongestionGame game = build_threshold_game(threshold_spec);
    std::vector<bool> third(static_cast<std::size_t>(threshold_spec.n_base));
    const std::string placement = spec.has("third") ? spec.kv.at("third") : "rand";
    if (placement == "out") {
      // all false
    } else if (placement == "in") {
      third.assign(third.size(), true);
    } else {
      CounterRng rng(init_seed, 0, 0);
      for (std::size_t i = 0; i < third.size(); ++i) third[i] = rng.next_below(2) == 1;
    }
    GameState state = threshold_initial_state(game, threshold_spec, third);
    return {std::move(game), std::move(state), threshold_spec};
  }
  if (spec.kind == "unusedlink") {
    const std::int64_t n = static_cast<std::int64_t>(spec.number("n"));
    const double offset = spec.number_or("off", 100.0);
    CongestionGame game = singleton_game(
        {LatencyFunction::polynomial({offset, 1.0}), LatencyFunction::linear(1.0)}, n);
    GameState state = make_state(game, {n, 0});
    return {std::move(game), std::move(state), std::nullopt};
  }
  throw std::invalid_argument("unknown gen spec kind '" + spec.kind + "'");
}

void ExperimentConfig::validate() const {
  if (game_file.empty() == gen.empty()) {
    throw std::invalid_argument("config needs exactly one game source (file or gen spec)");
  }
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  params.validate();
}

Instance load_instance(const ExperimentConfig& config, std::uint64_t init_seed) {
  config.validate();
  if (!config.game_file.empty()) {
    CongestionGame game = read_game_file(config.game_file);
    GameState state = random_uniform_state(game, init_seed);
    return {std::move(game), std::move(state), std::nullopt};
  }
  return build_instance(parse_gen_spec(config.gen), config.params.seed, init_seed);
}

namespace {

// Runs fn(r) for r in [0, count) on up to `threads` workers; slot-indexed
// outputs keep aggregation order-independent.
void parallel_replicates(int threads, int count, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int r = 0; r < count; ++r) fn(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int r = next.fetch_add(1); r < count; r = next.fetch_add(1)) fn(r);
    });
  }
  for (auto& worker : pool) worker.join();
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

struct MeanCi {
  double mean;
  double low;
  double high;
};

MeanCi mean_ci(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0, 0.0};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, mean, mean};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double stderr_mean =
      std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
  return {mean, mean - 1.96 * stderr_mean, mean + 1.96 * stderr_mean};
}

}  // namespace

// ---- run ----

RunReport run_experiment(const ExperimentConfig& config) {
  Instance instance = load_instance(config, config.params.seed);
  DynamicsEngine engine(instance.game);

  RunOptions options;
  options.stop = config.stop;
  options.trace_eq = config.stop.eq;
  options.threads = config.threads;

  RunResult result = run(engine, std::move(instance.state), config.params, options);
  if (!config.out_path.empty()) write_trace_csv(config.out_path, result.trace);

  RunReport report;
  report.converged = result.trace.converged;
  report.rounds = result.trace.rounds;
  report.final_potential = engine.potential(result.final_state);
  if (instance.game.is_singleton()) {
    report.final_social_cost = social_cost(instance.game, result.final_state);
  }
  report.exit_code = report.converged ? 0 : 2;
  return report;
}

std::string RunReport::to_json() const {
  json j{{"converged", converged},
         {"rounds", rounds},
         {"final_potential", final_potential},
         {"exit_code", exit_code}};
  if (final_social_cost) j["final_social_cost"] = *final_social_cost;
  return j.dump(2);
}

// ---- sweep ----

SweepReport sweep_experiment(const ExperimentConfig& config, const std::string& axis,
                             const std::vector<double>& values) {
  config.validate();
  if (axis != "n" && axis != "lambda" && axis != "epsilon" && axis != "delta") {
    throw std::invalid_argument("sweep axis must be one of n, lambda, epsilon, delta");
  }
  if (values.empty()) throw std::invalid_argument("sweep needs at least one axis value");
  if (axis == "n" && config.gen.empty()) {
    throw std::invalid_argument("an n sweep needs a generator game source");
  }

  SweepReport report;
  report.axis = axis;
  report.cells.resize(values.size());

  for (std::size_t v = 0; v < values.size(); ++v) {
    const double value = values[v];
    ExperimentConfig cell_config = config;
    if (axis == "n") {
      GenSpec spec = parse_gen_spec(config.gen);
      spec.kv["n"] = format_double(value);
      std::string rebuilt = spec.kind + ":";
      bool first = true;
      for (const auto& [key, val] : spec.kv) {
        rebuilt += (first ? "" : ",") + key + "=" + val;
        first = false;
      }
      cell_config.gen = rebuilt;
    } else if (axis == "lambda") {
      cell_config.params.lambda = value;
    } else if (axis == "epsilon") {
      cell_config.stop.eq.epsilon = value;
    } else {
      cell_config.stop.eq.delta = value;
    }

    SweepCell& cell = report.cells[v];
    cell.value = value;
    cell.rounds.resize(static_cast<std::size_t>(config.replicates));
    std::vector<char> converged(static_cast<std::size_t>(config.replicates), 0);

    // One engine per cell; round evaluation itself stays single-threaded and
    // the replicates fan out instead.
    Instance probe = load_instance(cell_config, cell_config.params.seed);
    DynamicsEngine engine(probe.game);
    parallel_replicates(config.threads, config.replicates, [&](int r) {
      ExperimentConfig replicate = cell_config;
      replicate.params.seed = config.params.seed + static_cast<std::uint64_t>(r);
      Instance instance = load_instance(replicate, replicate.params.seed);
      RunOptions options;
      options.stop = replicate.stop;
      options.trace_eq = replicate.stop.eq;
      options.record_rows = false;
      RunResult result = run(engine, std::move(instance.state), replicate.params, options);
      cell.rounds[static_cast<std::size_t>(r)] = result.trace.rounds;
      converged[static_cast<std::size_t>(r)] = result.trace.converged ? 1 : 0;
    });

    std::vector<double> as_double(cell.rounds.begin(), cell.rounds.end());
    cell.converged_count = static_cast<int>(std::count(converged.begin(), converged.end(), 1));
    cell.median = median_of(as_double);
    const MeanCi ci = mean_ci(as_double);
    cell.mean = ci.mean;
    cell.ci_low = ci.low;
    cell.ci_high = ci.high;
    log_line(1, "sweep " + axis + "=" + format_double(value) +
                    " median=" + format_double(cell.median));
  }

  if (!config.out_path.empty()) {
    std::ofstream out(config.out_path);
    if (!out) throw std::runtime_error("cannot write sweep table: " + config.out_path);
    out << report.to_csv();
  }
  return report;
}

std::string SweepReport::to_csv() const {
  std::string out = "axis,value,replicates,converged,median_rounds,mean_rounds,ci_low,ci_high\n";
  for (const auto& cell : cells) {
    out += axis + "," + format_double(cell.value) + "," + std::to_string(cell.rounds.size()) +
           "," + std::to_string(cell.converged_count) + "," + format_double(cell.median) + "," +
           format_double(cell.mean) + "," + format_double(cell.ci_low) + "," +
           format_double(cell.ci_high) + "\n";
  }
  return out;
}

std::string SweepReport::to_json() const {
  json cells_json = json::array();
  for (const auto& cell : cells) {
    cells_json.push_back(json{{"value", cell.value},
                              {"rounds", cell.rounds},
                              {"converged", cell.converged_count},
                              {"median", cell.median},
                              {"mean", cell.mean},
                              {"ci_low", cell.ci_low},
                              {"ci_high", cell.ci_high}});
  }
  return json{{"axis", axis}, {"cells", cells_json}}.dump(2);
}

// ---- extinction ----

ExtinctionReport extinction_experiment(const ExperimentConfig& config) {
  config.validate();
  Instance probe = load_instance(config, config.params.seed);
  if (!probe.game.is_singleton()) {
    throw std::invalid_argument("extinction experiment requires a singleton game");
  }
  DynamicsEngine engine(probe.game);
  const int m = probe.game.num_edges();

  ExtinctionReport report;
  report.replicates = config.replicates;
  report.rounds = config.params.round_limit;

  std::vector<std::vector<std::int64_t>> run_min(
      static_cast<std::size_t>(config.replicates),
      std::vector<std::int64_t>(static_cast<std::size_t>(m),
                                std::numeric_limits<std::int64_t>::max()));

  parallel_replicates(config.threads, config.replicates, [&](int r) {
    const std::uint64_t seed = config.params.seed + static_cast<std::uint64_t>(r);
    ExperimentConfig replicate = config;
    replicate.params.seed = seed;
    Instance instance = load_instance(replicate, seed);

    ProtocolParams params = replicate.params;
    RunOptions options;
    options.stop.kind = StopKind::round_limit;
    options.record_rows = false;
    auto& mins = run_min[static_cast<std::size_t>(r)];
    options.observer = [&mins](std::int64_t, const GameState& s) {
      for (std::size_t e = 0; e < s.x_edge.size(); ++e) {
        mins[e] = std::min(mins[e], s.x_edge[e]);
      }
    };
    run(engine, std::move(instance.state), params, options);
    log_line(1, "extinction replicate " + std::to_string(r) + " done");
  });

  report.min_congestion.assign(static_cast<std::size_t>(m),
                               std::numeric_limits<std::int64_t>::max());
  for (const auto& mins : run_min) {
    bool emptied = false;
    for (std::size_t e = 0; e < mins.size(); ++e) {
      report.min_congestion[e] = std::min(report.min_congestion[e], mins[e]);
      if (mins[e] == 0) emptied = true;
    }
    if (emptied) ++report.runs_with_empty_edge;
  }

  try {
    const FractionalOptimum opt = fractional_optimum(probe.game);
    report.fractional_load = opt.load;
    report.all_above_half_fractional = true;
    for (std::size_t e = 0; e < opt.load.size(); ++e) {
      if (static_cast<double>(report.min_congestion[e]) <= opt.load[e] / 2.0) {
        report.all_above_half_fractional = false;
      }
    }
  } catch (const std::invalid_argument&) {
    // Non-linear links: no closed-form fractional optimum to compare against.
  }
  return report;
}

std::string ExtinctionReport::to_json() const {
  json j{{"replicates", replicates},
         {"rounds", rounds},
         {"runs_with_empty_edge", runs_with_empty_edge},
         {"min_congestion", min_congestion}};
  if (!fractional_load.empty()) {
    j["fractional_load"] = fractional_load;
    j["all_above_half_fractional"] = all_above_half_fractional;
  }
  return j.dump(2);
}

// ---- price of imitation ----

PoiReport poi_experiment(const ExperimentConfig& config) {
  config.validate();
  Instance probe = load_instance(config, config.params.seed);
  const FractionalOptimum opt = fractional_optimum(probe.game);  // validates linear singleton
  DynamicsEngine engine(probe.game);

  PoiReport report;
  report.optimum_cost = static_cast<double>(probe.game.num_players()) / opt.capacity_sum;
  report.has_useless_links = !opt.useless.empty();
  report.min_fractional_load = *std::min_element(opt.load.begin(), opt.load.end());
  report.fractional_load_logn_ok =
      report.min_fractional_load >= std::log(static_cast<double>(probe.game.num_players()));
  if (report.has_useless_links) {
    log_line(0, "warning: instance has useless links; cost bounds may not apply");
  }

  report.runs.resize(static_cast<std::size_t>(config.replicates));
  parallel_replicates(config.threads, config.replicates, [&](int r) {
    const std::uint64_t seed = config.params.seed + static_cast<std::uint64_t>(r);
    ExperimentConfig replicate = config;
    replicate.params.seed = seed;
    Instance instance = load_instance(replicate, seed);

    RunOptions options;
    options.stop.kind = StopKind::imitation_stable;
    options.record_rows = false;
    RunResult result = run(engine, std::move(instance.state), replicate.params, options);

    PoiRun& poi_run = report.runs[static_cast<std::size_t>(r)];
    poi_run.converged = result.trace.converged;
    poi_run.rounds = result.trace.rounds;
    poi_run.social_cost = social_cost(probe.game, result.final_state);
    poi_run.ratio = poi_run.social_cost / report.optimum_cost;
    poi_run.all_used = std::all_of(result.final_state.x_edge.begin(),
                                   result.final_state.x_edge.end(),
                                   [](std::int64_t c) { return c >= 1; });
    if (poi_run.all_used && poi_run.converged && !report.has_useless_links) {
      poi_run.bounds_ok = stable_cost_bounds_check(probe.game, result.final_state);
    }
    log_line(1, "poi replicate " + std::to_string(r) + " ratio " + format_double(poi_run.ratio));
  });

  std::vector<double> ratios;
  report.all_used_bounds_ok = true;
  for (const auto& poi_run : report.runs) {
    ratios.push_back(poi_run.ratio);
    if (!poi_run.all_used) {
      ++report.emptied_runs;
    } else if (poi_run.converged && !report.has_useless_links && !poi_run.bounds_ok) {
      report.all_used_bounds_ok = false;
    }
  }
  const MeanCi ci = mean_ci(ratios);
  report.mean_ratio = ci.mean;
  report.ci_low = ci.low;
  report.ci_high = ci.high;
  return report;
}

std::string PoiReport::to_json() const {
  json runs_json = json::array();
  for (const auto& poi_run : runs) {
    runs_json.push_back(json{{"converged", poi_run.converged},
                             {"rounds", poi_run.rounds},
                             {"social_cost", poi_run.social_cost},
                             {"ratio", poi_run.ratio},
                             {"all_used", poi_run.all_used},
                             {"bounds_ok", poi_run.bounds_ok}});
  }
  return json{{"optimum_cost", optimum_cost},
              {"has_useless_links", has_useless_links},
              {"min_fractional_load", min_fractional_load},
              {"fractional_load_logn_ok", fractional_load_logn_ok},
              {"mean_ratio", mean_ratio},
              {"ci_low", ci_low},
              {"ci_high", ci_high},
              {"emptied_runs", emptied_runs},
              {"all_used_bounds_ok", all_used_bounds_ok},
              {"runs", runs_json}}
      .dump(2);
}

// ---- sequential lower bound ----

LowerBoundReport lowerbound_experiment(const ExperimentConfig& config) {
  config.validate();
  LowerBoundReport report;
  report.runs.resize(static_cast<std::size_t>(config.replicates));

  parallel_replicates(config.threads, config.replicates, [&](int r) {
    const std::uint64_t seed = config.params.seed + static_cast<std::uint64_t>(r);
    ExperimentConfig replicate = config;
    replicate.params.seed = seed;
    replicate.params.protocol = Protocol::sequential;
    Instance instance = load_instance(replicate, seed);
    if (!instance.threshold) {
      throw std::invalid_argument("lower bound experiment requires a threshold gen spec");
    }

    DynamicsEngine engine(instance.game);
    bool violated = false;
    RunOptions options;
    options.stop.kind = StopKind::imitation_stable;
    options.stop.nu = 0.0;
    options.record_rows = false;
    options.observer = [&](std::int64_t, const GameState& s) {
      if (instance.threshold->tripled && threshold_triples_coincide(instance.game, s)) {
        violated = true;
      }
    };
    RunResult result = run(engine, std::move(instance.state), replicate.params, options);

    LowerBoundRun& lb_run = report.runs[static_cast<std::size_t>(r)];
    lb_run.steps = result.trace.rounds;
    lb_run.converged = result.trace.converged;
    lb_run.invariant_ok = !violated;
  });

  report.all_invariants_ok = std::all_of(report.runs.begin(), report.runs.end(),
                                         [](const LowerBoundRun& lb) { return lb.invariant_ok; });
  return report;
}

std::string LowerBoundReport::to_json() const {
  json runs_json = json::array();
  for (const auto& lb_run : runs) {
    runs_json.push_back(json{{"steps", lb_run.steps},
                             {"converged", lb_run.converged},
                             {"invariant_ok", lb_run.invariant_ok}});
  }
  return json{{"all_invariants_ok", all_invariants_ok}, {"runs", runs_json}}.dump(2);
}

// ---- martingale audit ----

MartingaleReport audit_experiment(const ExperimentConfig& config) {
  Instance instance = load_instance(config, config.params.seed);
  return martingale_test(instance.game, instance.state, config.params, config.audit_replays);
}

std::string martingale_to_json(const MartingaleReport& report) {
  return json{{"replays", report.replays},
              {"input_stable", report.input_stable},
              {"mean_dphi", report.mean_dphi},
              {"stderr_dphi", report.stderr_dphi},
              {"mean_virtual", report.mean_virtual},
              {"mean_slack", report.mean_slack},
              {"stderr_slack", report.stderr_slack},
              {"supermartingale_ok", report.supermartingale_ok},
              {"halved_bound_ok", report.halved_bound_ok}}
      .dump(2);
}

}  // namespace imitate
