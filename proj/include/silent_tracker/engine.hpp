// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "silent_tracker/channel.hpp"
#include "silent_tracker/codebook.hpp"
#include "silent_tracker/mobility.hpp"
#include "silent_tracker/protocol.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace silent_tracker {

class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

/// What a codebook looks like in config files: a beamwidth or the omni flag.
struct CodebookSpec {
    bool omni = false;
    double beamwidth_deg = 20.0;

    Codebook build() const;
    std::string label() const; // "20deg", "omni", ...
};

struct CellConfig {
    int id = 0;
    Pose pose;
    CodebookSpec codebook;
    double ssb_period_s = 0.02;
    double ssb_phase_s = 0.0;
};

struct ScheduleConfig {
    double meas_period_s = 0.02;
    int serving_slots = 3; // serving:neighbor grant ratio
    int neighbor_slots = 1;
};

struct MobileConfig {
    CodebookSpec codebook;
    MobilityModel mobility;
    ChannelParams channel;
    std::optional<int> initial_serving_cell;
};

struct SimConfig {
    std::vector<CellConfig> cells;
    MobileConfig mobile;
    ScheduleConfig schedule;
    ProtocolParams protocol;
    double rach_threshold_dbm = -51.0; // sensitivity + 3
    double overlap_radius_m = 11.5;
    double duration_s = 10.0;
    std::uint64_t seed = 1;

    void validate() const; // throws ConfigError with a field path
};

enum class Outcome { Soft, Hard, Fail };
const char* to_string(Outcome o);

/// One logged protocol action, as it appears in the action-log CSV.
struct ActionRecord {
    std::int64_t t_ms;
    Phase phase; // phase after the step that emitted the action
    std::string action;
    int cell_id;
    int beam_id;
};

struct TrialReport {
    std::uint64_t seed = 0;
    std::uint64_t trial_index = 0;
    bool discovered = false;
    double discovery_latency_s = -1.0; // wall clock from search start, <0 if none
    double search_time_s = -1.0;       // granted dwell time until discovery
    bool discovery_in_overlap = false;
    double alignment_ratio = 1.0; // target-cell beam within +/-1 of oracle
    std::map<int, int> rx_switch_count;
    double interruption_s = -1.0; // serving failure -> RA success, <0 if n/a
    Outcome outcome = Outcome::Fail;
    std::vector<MeasurementReport> trace;
    std::vector<ActionRecord> actions;
};

/// Runs one deterministic trial. Everything random is derived from
/// (config.seed, trial_index), so identical arguments reproduce the report
/// exactly.
TrialReport run_trial(const SimConfig& config, std::uint64_t trial_index);

/// Protocol-side view of a config: mobile codebook, per-cell tx beam counts
/// and the protocol constants.
ProtocolContext make_protocol_context(const SimConfig& config);

/// The state a trial starts from: attached to the configured serving cell
/// with oracle-aligned beams, or in full initial search.
ProtocolState initial_protocol_state(const SimConfig& config);

// ---------------------------------------------------------------------------
// Monte Carlo sweeps

struct SweepCell {
    std::string scenario;
    std::string codebook;
    int trials = 0;
    double success_rate = 0.0;
    double mean_latency_s = 0.0;
    double p95_latency_s = 0.0;
    double soft_rate = 0.0;
};

struct SweepReport {
    std::uint64_t seed = 0;
    int trials_per_cell = 0;
    std::vector<SweepCell> cells;
};

enum class SweepExecution { Serial, Parallel };

/// Per-scenario mobility preset applied over a base config. Unknown names
/// throw ConfigError.
SimConfig apply_scenario(const SimConfig& base, const std::string& scenario);

/// Ready-to-run configuration for one of the named scenarios (walk,
/// rotation, vehicular, static) with the default desk-scale topology.
SimConfig default_config(const std::string& scenario);

/// Cross product of scenarios x codebooks, `trials` trials per cell. The
/// parallel path distributes trials over OpenMP threads; per-trial random
/// streams and trial-index-ordered aggregation make both paths produce
/// identical reports.
SweepReport run_sweep(const SimConfig& base, const std::vector<std::string>& scenarios,
                      const std::vector<CodebookSpec>& codebooks, int trials,
                      SweepExecution exec = SweepExecution::Parallel);

/// Trial success in the sweep sense: the neighbor was discovered while the
/// mobile was still inside the two-cell overlap region and the trial did not
/// end as `fail`.
bool sweep_success(const TrialReport& report);

} // namespace silent_tracker
