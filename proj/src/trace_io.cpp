// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace silent_tracker {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.push_back("");
    return out;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r')
        s.pop_back();
    return s;
}

} // namespace

std::vector<MeasurementReport> load_trace(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(name, 1, "missing header");
    if (strip_cr(line) != kTraceHeader)
        throw ParseError(name, 1, "header must be exactly \"" + std::string(kTraceHeader) + "\"");

    std::vector<MeasurementReport> trace;
    int lineno = 1;
    std::int64_t prev_t = -1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty())
            continue;
        auto fields = split_csv(line);
        if (fields.size() != 5)
            throw ParseError(name, lineno, "expected 5 fields, got " +
                                               std::to_string(fields.size()));
        MeasurementReport m;
        try {
            size_t used = 0;
            m.t_ms = std::stoll(fields[0], &used);
            if (used != fields[0].size()) throw std::invalid_argument("t_ms");
            m.cell_id = std::stoi(fields[1], &used);
            if (used != fields[1].size()) throw std::invalid_argument("cell_id");
            m.tx_beam = std::stoi(fields[2], &used);
            if (used != fields[2].size()) throw std::invalid_argument("tx_beam");
            m.rx_beam = std::stoi(fields[3], &used);
            if (used != fields[3].size()) throw std::invalid_argument("rx_beam");
            m.rss_dbm = std::stod(fields[4], &used);
            if (used != fields[4].size()) throw std::invalid_argument("rss_dbm");
        } catch (const std::exception&) {
            throw ParseError(name, lineno, "malformed row: " + line);
        }
        if (m.rss_dbm < -150.0 || m.rss_dbm > 30.0)
            throw ParseError(name, lineno, "rss_dbm outside [-150, 30]");
        if (m.t_ms < prev_t)
            throw ParseError(name, lineno, "t_ms regresses from " +
                                               std::to_string(prev_t) + " to " +
                                               std::to_string(m.t_ms));
        prev_t = m.t_ms;
        trace.push_back(m);
    }
    return trace;
}

std::vector<MeasurementReport> load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path, 0, "cannot open file");
    return load_trace(in, path);
}

void write_trace(const std::vector<MeasurementReport>& trace, std::ostream& out) {
    out << kTraceHeader << "\n";
    char buf[128];
    for (const MeasurementReport& m : trace) {
        std::snprintf(buf, sizeof(buf), "%lld,%d,%d,%d,%.3f",
                      static_cast<long long>(m.t_ms), m.cell_id, m.tx_beam,
                      m.rx_beam, m.rss_dbm);
        out << buf << "\n";
    }
}

void write_trace(const std::vector<MeasurementReport>& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write trace: " + path);
    write_trace(trace, out);
}

std::string action_log_line(const ActionRecord& rec) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%lld,%s,%s,%d,%d",
                  static_cast<long long>(rec.t_ms), to_string(rec.phase),
                  rec.action.c_str(), rec.cell_id, rec.beam_id);
    return buf;
}

void write_action_log(const std::vector<ActionRecord>& log, std::ostream& out) {
    out << kActionLogHeader << "\n";
    for (const ActionRecord& rec : log)
        out << action_log_line(rec) << "\n";
}

void write_action_log(const std::vector<ActionRecord>& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write action log: " + path);
    write_action_log(log, out);
}

std::vector<ActionRecord> replay(const std::vector<MeasurementReport>& trace,
                                 const ProtocolContext& ctx,
                                 const ProtocolState& initial) {
    std::vector<ActionRecord> log;
    ProtocolState state = initial;
    auto feed = [&](const ProtocolInput& in) {
        StepResult r = step(state, in, ctx);
        state = std::move(r.state);
        for (const Action& a : r.actions)
            log.push_back({input_time_ms(in), state.phase, action_name(a),
                           action_cell(a), action_beam(a)});
    };

    std::int64_t horizon = trace.empty() ? 0 : trace.back().t_ms + 1;
    size_t next = 0;
    for (std::int64_t t = 0; t < horizon; ++t) {
        feed(SlotTick{t});
        while (next < trace.size() && trace[next].t_ms == t)
            feed(trace[next++]);
    }
    return log;
}

std::vector<ActionRecord> replay(const std::vector<MeasurementReport>& trace,
                                 const ProtocolContext& ctx) {
    return replay(trace, ctx, make_searching_state(0));
}

} // namespace silent_tracker
