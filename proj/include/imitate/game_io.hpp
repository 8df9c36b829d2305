#pragma once

#include <iosfwd>
#include <string>

#include "imitate/game.hpp"
#include "imitate/protocol.hpp"

namespace imitate {

// Plain-text game format, diffable and hand-writable:
//
//   [edges]
//   poly a0 a1 ... ad
//   table v0 v1 ... vn
//   [strategies]
//   0 2 5
//   [players]
//   16
//   [groups]        (optional; one line of strategy ids per group)
//   0 1
//
// Blank lines and lines starting with '#' are ignored.
CongestionGame parse_game(std::istream& in);
CongestionGame read_game_file(const std::string& path);
std::string format_game(const CongestionGame& g);
void write_game_file(const std::string& path, const CongestionGame& g);

// Trace CSV with full decimal precision so reruns compare byte for byte.
extern const char* const kTraceHeader;
void write_trace_csv(std::ostream& out, const Trace& trace);
void write_trace_csv(const std::string& path, const Trace& trace);
std::vector<TraceRow> read_trace_csv(const std::string& path);

std::string format_double(double value);  // shortest round-trip-exact form

}  // namespace imitate
