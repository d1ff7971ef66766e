// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/report_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace silent_tracker {

namespace {

std::string fmt3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

void write_file(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write report: " + path);
    out << text;
}

} // namespace

ReportFormat report_format_from_string(const std::string& name) {
    if (name == "json")
        return ReportFormat::Json;
    if (name == "csv")
        return ReportFormat::Csv;
    throw std::runtime_error("unknown report format: " + name);
}

// Keys are emitted in a fixed order with %.3f reals so identical reports are
// byte-identical files.
std::string to_json(const TrialReport& r) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"seed\": " << r.seed << ",\n";
    os << "  \"trial_index\": " << r.trial_index << ",\n";
    os << "  \"outcome\": \"" << to_string(r.outcome) << "\",\n";
    os << "  \"discovered\": " << (r.discovered ? "true" : "false") << ",\n";
    os << "  \"discovery_latency_s\": " << fmt3(r.discovery_latency_s) << ",\n";
    os << "  \"search_time_s\": " << fmt3(r.search_time_s) << ",\n";
    os << "  \"discovery_in_overlap\": " << (r.discovery_in_overlap ? "true" : "false")
       << ",\n";
    os << "  \"alignment_ratio\": " << fmt3(r.alignment_ratio) << ",\n";
    os << "  \"interruption_s\": " << fmt3(r.interruption_s) << ",\n";
    os << "  \"rx_switch_count\": {";
    bool first = true;
    for (const auto& [cell, count] : r.rx_switch_count) {
        os << (first ? "" : ", ") << "\"" << cell << "\": " << count;
        first = false;
    }
    os << "},\n";
    os << "  \"trace_rows\": " << r.trace.size() << ",\n";
    os << "  \"action_count\": " << r.actions.size() << "\n";
    os << "}\n";
    return os.str();
}

std::string to_csv(const TrialReport& r) {
    std::ostringstream os;
    os << "seed,trial_index,outcome,discovered,discovery_latency_s,search_time_s,"
          "discovery_in_overlap,alignment_ratio,interruption_s,rx_switches,"
          "trace_rows,action_count\n";
    int switches = 0;
    for (const auto& [cell, count] : r.rx_switch_count)
        switches += count;
    os << r.seed << "," << r.trial_index << "," << to_string(r.outcome) << ","
       << (r.discovered ? 1 : 0) << "," << fmt3(r.discovery_latency_s) << ","
       << fmt3(r.search_time_s) << "," << (r.discovery_in_overlap ? 1 : 0) << ","
       << fmt3(r.alignment_ratio) << "," << fmt3(r.interruption_s) << ","
       << switches << "," << r.trace.size() << "," << r.actions.size() << "\n";
    return os.str();
}

std::string to_json(const SweepReport& r) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"seed\": " << r.seed << ",\n";
    os << "  \"trials_per_cell\": " << r.trials_per_cell << ",\n";
    os << "  \"cells\": [\n";
    for (size_t i = 0; i < r.cells.size(); ++i) {
        const SweepCell& c = r.cells[i];
        os << "    {\"scenario\": \"" << c.scenario << "\", \"codebook\": \""
           << c.codebook << "\", \"trials\": " << c.trials
           << ", \"success_rate\": " << fmt3(c.success_rate)
           << ", \"mean_latency_s\": " << fmt3(c.mean_latency_s)
           << ", \"p95_latency_s\": " << fmt3(c.p95_latency_s)
           << ", \"soft_rate\": " << fmt3(c.soft_rate) << "}"
           << (i + 1 < r.cells.size() ? "," : "") << "\n";
    }
    os << "  ]\n";
    os << "}\n";
    return os.str();
}

std::string to_csv(const SweepReport& r) {
    std::ostringstream os;
    os << "scenario,codebook,success_rate,mean_latency_s,p95_latency_s,soft_rate\n";
    for (const SweepCell& c : r.cells)
        os << c.scenario << "," << c.codebook << "," << fmt3(c.success_rate) << ","
           << fmt3(c.mean_latency_s) << "," << fmt3(c.p95_latency_s) << ","
           << fmt3(c.soft_rate) << "\n";
    return os.str();
}

void write_report(const TrialReport& report, ReportFormat format, const std::string& path) {
    write_file(format == ReportFormat::Json ? to_json(report) : to_csv(report), path);
}

void write_report(const SweepReport& report, ReportFormat format, const std::string& path) {
    write_file(format == ReportFormat::Json ? to_json(report) : to_csv(report), path);
}

TrialReport read_trial_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read report: " + path);
    nlohmann::json j = nlohmann::json::parse(in);

    TrialReport r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.trial_index = j.at("trial_index").get<std::uint64_t>();
    std::string outcome = j.at("outcome").get<std::string>();
    r.outcome = outcome == "soft"   ? Outcome::Soft
                : outcome == "hard" ? Outcome::Hard
                                    : Outcome::Fail;
    r.discovered = j.at("discovered").get<bool>();
    r.discovery_latency_s = j.at("discovery_latency_s").get<double>();
    r.search_time_s = j.at("search_time_s").get<double>();
    r.discovery_in_overlap = j.at("discovery_in_overlap").get<bool>();
    r.alignment_ratio = j.at("alignment_ratio").get<double>();
    r.interruption_s = j.at("interruption_s").get<double>();
    for (const auto& [key, value] : j.at("rx_switch_count").items())
        r.rx_switch_count[std::stoi(key)] = value.get<int>();
    return r;
}

} // namespace silent_tracker
