// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/cli.hpp"

#include "silent_tracker/config_json.hpp"
#include "silent_tracker/engine.hpp"
#include "silent_tracker/report_io.hpp"
#include "silent_tracker/trace_io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>

namespace silent_tracker {

namespace {

std::string with_suffix(const std::string& path, const std::string& suffix) {
    auto dot = path.rfind('.');
    auto slash = path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + suffix;
    return path.substr(0, dot) + suffix;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

std::vector<CodebookSpec> parse_beamwidths(const std::string& csv) {
    std::vector<CodebookSpec> out;
    for (const std::string& item : split_list(csv)) {
        CodebookSpec spec;
        if (item == "omni") {
            spec.omni = true;
        } else {
            try {
                size_t used = 0;
                spec.beamwidth_deg = std::stod(item, &used);
                if (used != item.size())
                    throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw ConfigError("beamwidths", "not a beamwidth: " + item);
            }
        }
        out.push_back(spec);
    }
    return out;
}

int simulate_cmd(const std::string& config_path, std::optional<std::uint64_t> seed,
                 int trials, const std::string& out_path, const std::string& format,
                 std::ostream& out) {
    SimConfig cfg = load_config(config_path);
    if (seed)
        cfg.seed = *seed;
    if (trials < 1)
        throw ConfigError("trials", "must be at least 1");
    ReportFormat fmt = report_format_from_string(format);

    if (trials == 1) {
        TrialReport report = run_trial(cfg, 0);
        if (out_path.empty()) {
            out << (fmt == ReportFormat::Json ? to_json(report) : to_csv(report));
        } else {
            write_report(report, fmt, out_path);
            write_trace(report.trace, with_suffix(out_path, ".trace.csv"));
            write_action_log(report.actions, with_suffix(out_path, ".actions.csv"));
        }
        out << "outcome=" << to_string(report.outcome)
            << " discovery_latency_s=" << report.discovery_latency_s
            << " alignment_ratio=" << report.alignment_ratio << "\n";
        return kExitOk;
    }

    // Monte Carlo over one (scenario, codebook) cell
    std::string scenario = to_string(cfg.mobile.mobility.variant);
    SweepReport sweep = run_sweep(cfg, {scenario}, {cfg.mobile.codebook}, trials);
    if (out_path.empty())
        out << (fmt == ReportFormat::Json ? to_json(sweep) : to_csv(sweep));
    else
        write_report(sweep, fmt, out_path);
    const SweepCell& cell = sweep.cells.front();
    out << "trials=" << cell.trials << " success_rate=" << cell.success_rate
        << " soft_rate=" << cell.soft_rate << "\n";
    return kExitOk;
}

int sweep_cmd(const std::string& config_path, std::optional<std::uint64_t> seed,
              const std::string& scenarios_csv, const std::string& beamwidths_csv,
              int trials, const std::string& out_path, bool serial, std::ostream& out) {
    SimConfig cfg = load_config(config_path);
    if (seed)
        cfg.seed = *seed;
    std::vector<std::string> scenarios = split_list(scenarios_csv);
    std::vector<CodebookSpec> books = parse_beamwidths(beamwidths_csv);
    if (trials < 1)
        throw ConfigError("trials", "must be at least 1");

    SweepReport report = run_sweep(cfg, scenarios, books, trials,
                                   serial ? SweepExecution::Serial
                                          : SweepExecution::Parallel);
    if (out_path.empty()) {
        out << to_csv(report);
    } else {
        write_report(report, ReportFormat::Json, out_path);
        write_report(report, ReportFormat::Csv, with_suffix(out_path, ".csv"));
    }
    return kExitOk;
}

int replay_cmd(const std::string& trace_path, const std::string& out_path,
               const std::string& config_path, std::ostream& out) {
    ProtocolContext ctx;
    ProtocolState initial = make_searching_state(0);
    if (!config_path.empty()) {
        SimConfig cfg = load_config(config_path);
        ctx = make_protocol_context(cfg);
        initial = initial_protocol_state(cfg);
    } else {
        ctx.mobile_book = make_codebook(20.0);
        ctx.params = ProtocolParams{};
    }

    std::vector<MeasurementReport> trace = load_trace(trace_path);
    std::vector<ActionRecord> log = replay(trace, ctx, initial);
    if (out_path.empty())
        write_action_log(log, out);
    else
        write_action_log(log, out_path);
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deterministic link-level simulator for in-band mm-wave "
                 "soft-handover beam management"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "json";
    std::string scenarios = "walk";
    std::string beamwidths = "20,60,omni";
    std::string trace_path;
    std::uint64_t seed_value = 0;
    bool seed_given = false;
    int trials = 1;
    bool serial = false;

    CLI::App* simulate = app.add_subcommand("simulate", "Run one scenario trial");
    simulate->add_option("--config", config_path, "config JSON path")->required();
    simulate->add_option("--seed", seed_value, "override the config seed")
        ->each([&](const std::string&) { seed_given = true; });
    simulate->add_option("--trials", trials, "Monte Carlo trial count");
    simulate->add_option("--out", out_path, "report output path");
    simulate->add_option("--format", format, "json|csv");

    CLI::App* sweep = app.add_subcommand("sweep", "Scenario x codebook Monte Carlo");
    sweep->add_option("--config", config_path, "base config JSON path")->required();
    sweep->add_option("--seed", seed_value, "override the config seed")
        ->each([&](const std::string&) { seed_given = true; });
    sweep->add_option("--scenarios", scenarios, "comma list: walk,rotation,vehicular,static");
    sweep->add_option("--beamwidths", beamwidths, "comma list of degrees or omni");
    sweep->add_option("--trials", trials, "trials per cell")->required();
    sweep->add_option("--out", out_path, "report path (plot CSV lands beside it)");
    sweep->add_flag("--serial", serial, "single-threaded reference execution");

    CLI::App* replay_cmd_app = app.add_subcommand("replay", "Drive the FSM from a recorded trace");
    replay_cmd_app->add_option("--trace", trace_path, "measurement trace CSV")->required();
    replay_cmd_app->add_option("--out", out_path, "action log output path");
    replay_cmd_app->add_option("--config", config_path, "optional config for codebooks/state");

    CLI::App* validate = app.add_subcommand("validate-config", "Parse and validate a config");
    validate->add_option("--config", config_path, "config JSON path")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::optional<std::uint64_t> seed;
    if (seed_given)
        seed = seed_value;

    try {
        if (simulate->parsed())
            return simulate_cmd(config_path, seed, trials, out_path, format, out);
        if (sweep->parsed())
            return sweep_cmd(config_path, seed, scenarios, beamwidths, trials,
                             out_path, serial, out);
        if (replay_cmd_app->parsed())
            return replay_cmd(trace_path, out_path, config_path, out);
        if (validate->parsed()) {
            SimConfig cfg = load_config(config_path);
            out << "ok: " << cfg.cells.size() << " cells, scenario "
                << to_string(cfg.mobile.mobility.variant) << ", duration "
                << cfg.duration_s << " s\n";
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
    err << "error: no subcommand\n";
    return kExitUsage;
}

} // namespace silent_tracker
