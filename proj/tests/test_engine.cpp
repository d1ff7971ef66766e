// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/engine.hpp"
#include "silent_tracker/report_io.hpp"
#include "silent_tracker/trace_io.hpp"

#include <doctest.h>

#include <map>
#include <sstream>

using namespace silent_tracker;

namespace {

std::string fingerprint(const TrialReport& r) {
    std::ostringstream os;
    os << to_json(r);
    write_trace(r.trace, os);
    write_action_log(r.actions, os);
    return os.str();
}

int count_actions(const TrialReport& r, const std::string& name) {
    int n = 0;
    for (const ActionRecord& a : r.actions)
        n += a.action == name ? 1 : 0;
    return n;
}

} // namespace

TEST_SUITE("engine") {

TEST_CASE("identical config and trial index give identical reports") {
    SimConfig cfg = default_config("walk");
    TrialReport a = run_trial(cfg, 3);
    TrialReport b = run_trial(cfg, 3);
    CHECK(fingerprint(a) == fingerprint(b));

    TrialReport c = run_trial(cfg, 4);
    CHECK(fingerprint(a) != fingerprint(c)); // different stream per trial
}

TEST_CASE("static initial access discovers within the search schedule bound") {
    SimConfig cfg = default_config("static");
    double bound = search_schedule_s(cfg.mobile.codebook.build(),
                                     cfg.cells[0].ssb_period_s);
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
        TrialReport r = run_trial(cfg, trial);
        CHECK(r.discovered);
        CHECK(r.discovery_latency_s <= bound + 1e-9);
        CHECK(r.search_time_s <= bound + 1e-9);
        // static, noiseless: nothing to adapt after camping
        CHECK(count_actions(r, "SET_RX_BEAM") == 0);
        CHECK(r.outcome == Outcome::Fail); // no handover in a static trial
    }
}

TEST_CASE("the default walk trial ends in a soft handover") {
    TrialReport r = run_trial(default_config("walk"), 0);
    CHECK(r.discovered);
    CHECK(r.outcome == Outcome::Soft);
    CHECK(r.alignment_ratio >= 0.95);
    CHECK(r.interruption_s >= 0.0);
}

TEST_CASE("at most one cell is measured per measurement period") {
    SimConfig cfg = default_config("walk");
    TrialReport r = run_trial(cfg, 0);
    std::int64_t period = 20;
    std::map<std::int64_t, int> per_period;
    for (const MeasurementReport& m : r.trace)
        CHECK(++per_period[m.t_ms / period] <= 1);
    CHECK(!r.trace.empty());
}

TEST_CASE("soft-handover interruption stays within the retry budget") {
    SimConfig cfg = default_config("walk");
    TrialReport r = run_trial(cfg, 0);
    REQUIRE(r.outcome == Outcome::Soft);
    double budget = cfg.protocol.r_max *
                        (static_cast<double>(cfg.protocol.ra_retry_period_ms) / 1000.0) +
                    cfg.schedule.meas_period_s;
    CHECK(r.interruption_s <= budget + 1e-9);
}

TEST_CASE("initial beams are oracle-aligned") {
    SimConfig cfg = default_config("walk");
    ProtocolState s = initial_protocol_state(cfg);
    REQUIRE(s.serving.has_value());
    Codebook book = cfg.mobile.codebook.build();
    Pose mob = pose_at(cfg.mobile.mobility, 0.0);
    int oracle = best_beam_oracle(
        book, wrap_deg(bearing_deg(mob, cfg.cells[0].pose) - mob.heading_deg));
    CHECK(s.serving->rx_beam == oracle);
}

TEST_CASE("config validation reports the offending field") {
    SimConfig cfg = default_config("walk");
    cfg.schedule.meas_period_s = 0.0;
    try {
        run_trial(cfg, 0);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.field()).find("meas_period") != std::string::npos);
    }

    SimConfig cfg2 = default_config("walk");
    cfg2.mobile.initial_serving_cell = 99;
    CHECK_THROWS_AS(run_trial(cfg2, 0), ConfigError);

    SimConfig cfg3 = default_config("walk");
    cfg3.cells[1].id = cfg3.cells[0].id;
    CHECK_THROWS_AS(run_trial(cfg3, 0), ConfigError);
}

TEST_CASE("unknown scenarios are config errors") {
    CHECK_THROWS_AS(default_config("hovercraft"), ConfigError);
}

} // TEST_SUITE
