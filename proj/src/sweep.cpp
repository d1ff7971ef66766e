// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace silent_tracker {

namespace {

SimConfig base_default() {
    SimConfig cfg;

    CellConfig a;
    a.id = 0;
    a.pose = make_pose(0.0, 0.0, 0.0);
    CellConfig b;
    b.id = 1;
    b.pose = make_pose(16.0, 0.0, 180.0);
    CellConfig c;
    c.id = 2;
    c.pose = make_pose(8.0, 14.0, 270.0);
    cfg.cells = {a, b, c};

    cfg.mobile.codebook = CodebookSpec{false, 20.0};
    cfg.mobile.initial_serving_cell = 0;
    cfg.mobile.mobility = MobilityModel::walk(make_pose(6.0, 0.6, 0.0), 0.0);
    cfg.duration_s = 10.0;
    return cfg;
}

struct TrialStats {
    bool success;
    bool soft;
    bool discovered;
    double latency_s;
};

SweepCell aggregate(const std::string& scenario, const std::string& codebook,
                    const std::vector<TrialStats>& stats) {
    SweepCell cell;
    cell.scenario = scenario;
    cell.codebook = codebook;
    cell.trials = static_cast<int>(stats.size());

    int successes = 0;
    int softs = 0;
    std::vector<double> latencies;
    for (const TrialStats& s : stats) { // trial-index order
        successes += s.success ? 1 : 0;
        softs += s.soft ? 1 : 0;
        if (s.discovered)
            latencies.push_back(s.latency_s);
    }
    double n = static_cast<double>(stats.size());
    cell.success_rate = successes / n;
    cell.soft_rate = softs / n;
    if (latencies.empty()) {
        cell.mean_latency_s = -1.0;
        cell.p95_latency_s = -1.0;
    } else {
        double sum = 0.0;
        for (double v : latencies)
            sum += v;
        cell.mean_latency_s = sum / static_cast<double>(latencies.size());
        std::sort(latencies.begin(), latencies.end());
        size_t rank = static_cast<size_t>(
            std::ceil(0.95 * static_cast<double>(latencies.size())));
        cell.p95_latency_s = latencies[rank == 0 ? 0 : rank - 1];
    }
    return cell;
}

int max_threads_from_env() {
#ifdef _OPENMP
    if (const char* env = std::getenv("SILENT_TRACKER_THREADS")) {
        int n = std::atoi(env);
        if (n > 0)
            return std::min(n, omp_get_max_threads());
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace

SimConfig apply_scenario(const SimConfig& base, const std::string& scenario) {
    SimConfig cfg = base;
    if (scenario == "walk") {
        cfg.mobile.mobility = MobilityModel::walk(make_pose(6.0, 0.6, 0.0), 0.0);
        cfg.mobile.initial_serving_cell = 0;
        cfg.duration_s = 10.0;
    } else if (scenario == "vehicular") {
        // north of the A-B axis so the sweep reaches the target beam early
        cfg.mobile.mobility = MobilityModel::vehicular(make_pose(-8.0, 2.0, 0.0), 0.0);
        cfg.mobile.initial_serving_cell = 0;
        cfg.duration_s = 3.5;
    } else if (scenario == "rotation") {
        cfg.mobile.mobility = MobilityModel::rotation(make_pose(9.0, 0.3, 0.0));
        cfg.mobile.initial_serving_cell = 0;
        cfg.duration_s = 6.0;
    } else if (scenario == "static") {
        cfg.mobile.mobility = MobilityModel::static_at(make_pose(8.0, 0.5, 0.0));
        cfg.mobile.initial_serving_cell.reset(); // full initial search
        cfg.duration_s = 2.0;
    } else {
        throw ConfigError("scenario", "unknown scenario: " + scenario);
    }
    return cfg;
}

SimConfig default_config(const std::string& scenario) {
    return apply_scenario(base_default(), scenario);
}

SweepReport run_sweep(const SimConfig& base, const std::vector<std::string>& scenarios,
                      const std::vector<CodebookSpec>& codebooks, int trials,
                      SweepExecution exec) {
    if (scenarios.empty())
        throw ConfigError("scenarios", "must not be empty");
    if (codebooks.empty())
        throw ConfigError("codebooks", "must not be empty");
    if (trials < 1)
        throw ConfigError("trials", "must be at least 1");

    SweepReport report;
    report.seed = base.seed;
    report.trials_per_cell = trials;

    for (const std::string& scenario : scenarios) {
        for (const CodebookSpec& book : codebooks) {
            SimConfig cfg = apply_scenario(base, scenario);
            cfg.mobile.codebook = book;
            cfg.validate();

            std::vector<TrialStats> stats(static_cast<size_t>(trials));
            auto one = [&](int i) {
                TrialReport r = run_trial(cfg, static_cast<std::uint64_t>(i));
                stats[static_cast<size_t>(i)] =
                    TrialStats{sweep_success(r), r.outcome == Outcome::Soft,
                               r.discovered, r.discovery_latency_s};
            };

            if (exec == SweepExecution::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(max_threads_from_env())
#endif
                for (int i = 0; i < trials; ++i)
                    one(i);
            } else {
                for (int i = 0; i < trials; ++i)
                    one(i);
            }

            report.cells.push_back(aggregate(scenario, book.label(), stats));
        }
    }
    return report;
}

} // namespace silent_tracker
