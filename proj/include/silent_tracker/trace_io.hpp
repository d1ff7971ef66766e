// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "silent_tracker/engine.hpp"
#include "silent_tracker/protocol.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace silent_tracker {

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& path, int line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
          line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

inline constexpr const char* kTraceHeader = "t_ms,cell_id,tx_beam,rx_beam,rss_dbm";
inline constexpr const char* kActionLogHeader = "t_ms,phase,action,cell_id,beam_id";

/// Parses a measurement trace CSV. Validates the header, row shape, the RSS
/// range and that timestamps never regress; errors carry the line number.
std::vector<MeasurementReport> load_trace(const std::string& path);
std::vector<MeasurementReport> load_trace(std::istream& in, const std::string& name);

void write_trace(const std::vector<MeasurementReport>& trace, const std::string& path);
void write_trace(const std::vector<MeasurementReport>& trace, std::ostream& out);

std::string action_log_line(const ActionRecord& rec);
void write_action_log(const std::vector<ActionRecord>& log, const std::string& path);
void write_action_log(const std::vector<ActionRecord>& log, std::ostream& out);

/// Runs the pure state machine over a recorded trace: slot ticks are
/// synthesized for every millisecond through the final row and each report is
/// fed in file order. No channel or mobility involvement, so a trace recorded
/// from a live run replays to the identical action log.
std::vector<ActionRecord> replay(const std::vector<MeasurementReport>& trace,
                                 const ProtocolContext& ctx,
                                 const ProtocolState& initial);

/// Replay starting from the initial-search state with codebooks inferred
/// from the protocol context.
std::vector<ActionRecord> replay(const std::vector<MeasurementReport>& trace,
                                 const ProtocolContext& ctx);

} // namespace silent_tracker
