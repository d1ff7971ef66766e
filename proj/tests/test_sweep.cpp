// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/engine.hpp"
#include "silent_tracker/report_io.hpp"

#include <doctest.h>

using namespace silent_tracker;

TEST_SUITE("sweep") {

TEST_CASE("a singleton sweep wraps exactly one trial") {
    SimConfig cfg = default_config("walk");
    SweepReport s = run_sweep(cfg, {"walk"}, {cfg.mobile.codebook}, 1,
                              SweepExecution::Serial);
    REQUIRE(s.cells.size() == 1);
    const SweepCell& cell = s.cells[0];
    CHECK(cell.trials == 1);

    TrialReport r = run_trial(apply_scenario(cfg, "walk"), 0);
    CHECK(cell.success_rate == (sweep_success(r) ? 1.0 : 0.0));
    CHECK(cell.soft_rate == (r.outcome == Outcome::Soft ? 1.0 : 0.0));
    if (r.discovered) {
        CHECK(cell.mean_latency_s == doctest::Approx(r.discovery_latency_s));
        CHECK(cell.p95_latency_s == doctest::Approx(r.discovery_latency_s));
    }
}

TEST_CASE("parallel execution reproduces the serial reference bit for bit") {
    SimConfig cfg = default_config("walk");
    cfg.mobile.channel.shadowing_sigma_db = 4.0;
    cfg.seed = 77;
    std::vector<CodebookSpec> books = {CodebookSpec{false, 20.0}, CodebookSpec{true, 0.0}};

    SweepReport serial = run_sweep(cfg, {"walk", "static"}, books, 24, SweepExecution::Serial);
    SweepReport parallel = run_sweep(cfg, {"walk", "static"}, books, 24, SweepExecution::Parallel);
    CHECK(to_json(serial) == to_json(parallel));
    CHECK(to_csv(serial) == to_csv(parallel));
}

TEST_CASE("sweeps cover the scenario-codebook cross product") {
    SimConfig cfg = default_config("walk");
    SweepReport s = run_sweep(cfg, {"walk", "static"},
                              {CodebookSpec{false, 20.0}, CodebookSpec{false, 60.0},
                               CodebookSpec{true, 0.0}},
                              2, SweepExecution::Serial);
    REQUIRE(s.cells.size() == 6);
    CHECK(s.cells[0].scenario == "walk");
    CHECK(s.cells[0].codebook == "20deg");
    CHECK(s.cells[5].scenario == "static");
    CHECK(s.cells[5].codebook == "omni");
}

TEST_CASE("empty lists and zero trials are config errors") {
    SimConfig cfg = default_config("walk");
    CHECK_THROWS_AS(run_sweep(cfg, {}, {cfg.mobile.codebook}, 1), ConfigError);
    CHECK_THROWS_AS(run_sweep(cfg, {"walk"}, {}, 1), ConfigError);
    CHECK_THROWS_AS(run_sweep(cfg, {"walk"}, {cfg.mobile.codebook}, 0), ConfigError);
}

} // TEST_SUITE
