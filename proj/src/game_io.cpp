#include "imitate/game_io.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace imitate {

const char* const kTraceHeader =
    "round,potential,l_av,l_av_plus,max_used_latency,migrations,unsat_fraction";

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

std::vector<double> parse_doubles(std::istringstream& in, const std::string& what) {
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  if (!in.eof()) throw std::runtime_error("malformed " + what + " line");
  return values;
}

}  // namespace

CongestionGame parse_game(std::istream& in) {
  enum class Section { none, edges, strategies, players, groups };
  Section section = Section::none;

  std::vector<LatencyFunction> edges;
  std::vector<std::vector<int>> strategies;
  std::optional<std::int64_t> players;
  std::vector<std::vector<int>> group_lines;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::string trimmed = line.substr(first);

    if (trimmed == "[edges]") {
      section = Section::edges;
      continue;
    }
    if (trimmed == "[strategies]") {
      section = Section::strategies;
      continue;
    }
    if (trimmed == "[players]") {
      section = Section::players;
      continue;
    }
    if (trimmed == "[groups]") {
      section = Section::groups;
      continue;
    }

    std::istringstream fields(trimmed);
    const std::string where = "line " + std::to_string(line_no);
    switch (section) {
      case Section::none:
        throw std::runtime_error("game file content before any section at " + where);
      case Section::edges: {
        std::string kind;
        fields >> kind;
        const auto values = parse_doubles(fields, "edge");
        if (kind == "poly") {
          edges.push_back(LatencyFunction::polynomial(values));
        } else if (kind == "table") {
          edges.push_back(LatencyFunction::table(values));
        } else {
          throw std::runtime_error("unknown edge kind '" + kind + "' at " + where);
        }
        break;
      }
      case Section::strategies: {
        std::vector<int> ids;
        int id;
        while (fields >> id) ids.push_back(id);
        if (!fields.eof()) throw std::runtime_error("malformed strategy at " + where);
        strategies.push_back(std::move(ids));
        break;
      }
      case Section::players: {
        std::int64_t n;
        if (!(fields >> n)) throw std::runtime_error("malformed player count at " + where);
        players = n;
        break;
      }
      case Section::groups: {
        std::vector<int> ids;
        int id;
        while (fields >> id) ids.push_back(id);
        if (!fields.eof()) throw std::runtime_error("malformed group at " + where);
        group_lines.push_back(std::move(ids));
        break;
      }
    }
  }

  if (edges.empty()) throw std::runtime_error("game file has no [edges] section");
  if (strategies.empty()) throw std::runtime_error("game file has no [strategies] section");
  if (!players) throw std::runtime_error("game file has no [players] section");

  std::optional<StrategyRestriction> restriction;
  if (!group_lines.empty()) {
    StrategyRestriction r;
    r.group_of_strategy.assign(strategies.size(), -1);
    for (std::size_t gid = 0; gid < group_lines.size(); ++gid) {
      for (int p : group_lines[gid]) {
        if (p < 0 || p >= static_cast<int>(strategies.size()) ||
            r.group_of_strategy[static_cast<std::size_t>(p)] != -1) {
          throw std::runtime_error("groups must partition the strategy indices");
        }
        r.group_of_strategy[static_cast<std::size_t>(p)] = static_cast<int>(gid);
      }
    }
    for (int gid : r.group_of_strategy) {
      if (gid == -1) throw std::runtime_error("groups must partition the strategy indices");
    }
    restriction = std::move(r);
  }

  bool singleton = strategies.size() > 0;
  {
    std::vector<bool> seen(edges.size(), false);
    for (const auto& strat : strategies) {
      if (strat.size() != 1 || strat[0] < 0 || strat[0] >= static_cast<int>(edges.size()) ||
          seen[static_cast<std::size_t>(strat[0])]) {
        singleton = false;
        break;
      }
      seen[static_cast<std::size_t>(strat[0])] = true;
    }
  }
  const auto kind = restriction ? CongestionGame::Kind::explicit_game
                    : singleton ? CongestionGame::Kind::singleton
                                : CongestionGame::Kind::explicit_game;
  return CongestionGame(std::move(edges), std::move(strategies), *players, kind,
                        std::move(restriction));
}

CongestionGame read_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open game file: " + path);
  return parse_game(in);
}

std::string format_game(const CongestionGame& g) {
  std::ostringstream out;
  out << "[edges]\n";
  for (const auto& f : g.edges()) {
    if (f.kind() == LatencyFunction::Kind::polynomial) {
      out << "poly";
      for (double a : f.coefficients()) out << ' ' << format_double(a);
    } else {
      out << "table";
      for (double v : f.values()) out << ' ' << format_double(v);
    }
    out << '\n';
  }
  out << "[strategies]\n";
  for (const auto& strat : g.strategies()) {
    for (std::size_t i = 0; i < strat.size(); ++i) out << (i ? " " : "") << strat[i];
    out << '\n';
  }
  out << "[players]\n" << g.num_players() << '\n';
  if (g.restriction()) {
    out << "[groups]\n";
    for (const auto& group : g.groups()) {
      for (std::size_t i = 0; i < group.size(); ++i) out << (i ? " " : "") << group[i];
      out << '\n';
    }
  }
  return out.str();
}

void write_game_file(const std::string& path, const CongestionGame& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write game file: " + path);
  out << format_game(g);
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& row : trace.rows) {
    out << row.round << ',' << format_double(row.potential) << ',' << format_double(row.l_av)
        << ',' << format_double(row.l_av_plus) << ',' << format_double(row.max_used_latency)
        << ',' << row.migrations << ',' << format_double(row.unsat_fraction) << '\n';
  }
}

void write_trace_csv(const std::string& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  write_trace_csv(out, trace);
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::runtime_error("unexpected trace header in " + path);
  }
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    TraceRow row;
    char comma;
    if (!(fields >> row.round >> comma >> row.potential >> comma >> row.l_av >> comma >>
          row.l_av_plus >> comma >> row.max_used_latency >> comma >> row.migrations >> comma >>
          row.unsat_fraction)) {
      throw std::runtime_error("malformed trace row in " + path);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace imitate
