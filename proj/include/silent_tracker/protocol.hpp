// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "silent_tracker/codebook.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace silent_tracker {

class ProtocolError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Phase {
    Search,
    TrackServingOnly,
    DualTrack,
    RadioLinkFailure,
    RandomAccess,
    HandoverComplete,
    HardHandover,
};

const char* to_string(Phase p);

/// One timestamped RSS sample for a (cell, tx beam, rx beam) tuple. The only
/// sensory input the state machine gets. cell_id < 0 marks a search dwell
/// that heard nothing usable.
struct MeasurementReport {
    std::int64_t t_ms = 0;
    int cell_id = -1;
    int tx_beam = -1;
    int rx_beam = -1;
    double rss_dbm = -150.0;
};

struct SlotTick {
    std::int64_t t_ms = 0;
};
struct UplinkAck {
    std::int64_t t_ms = 0;
    int cell_id = -1;
};
struct UplinkNack {
    std::int64_t t_ms = 0;
    int cell_id = -1;
};
struct RaResponse {
    std::int64_t t_ms = 0;
    int cell_id = -1;
    bool success = false;
};

using ProtocolInput =
    std::variant<MeasurementReport, SlotTick, UplinkAck, UplinkNack, RaResponse>;

std::int64_t input_time_ms(const ProtocolInput& in);

// ---------------------------------------------------------------------------
// Actions

struct SetRxBeam {
    int cell_id;
    int beam;
};
struct RequestTxBeamSwitch {
    int cell_id;
    int beam;
};
struct StartNeighborSearch {};
struct SendPreamble {
    int cell_id;
    int rx_beam;
    int tx_beam;
};
struct DeclareServingSwitch {
    int new_cell_id;
};
struct DeclareSoftHandover {};
struct DeclareHardHandover {};

using Action = std::variant<SetRxBeam, RequestTxBeamSwitch, StartNeighborSearch,
                            SendPreamble, DeclareServingSwitch,
                            DeclareSoftHandover, DeclareHardHandover>;

const char* action_name(const Action& a);
int action_cell(const Action& a);
int action_beam(const Action& a);

// ---------------------------------------------------------------------------
// State

/// Beam bookkeeping for one tracked cell. ref_rss is the reference the 3 dB
/// drop rule is measured against: it ratchets upward between beam switches
/// and is reset to the first sample taken after a switch.
struct CellTrack {
    int cell_id = -1;
    int rx_beam = 0;
    int tx_beam = 0;
    double ref_rss_dbm = -150.0;
    double last_rss_dbm = -150.0;
    bool timing_known = false;
    bool ref_pending = true;   // next sample (re)seeds ref_rss
    int below_sens_run = 0;    // consecutive samples under sensitivity
    int last_switch_dir = 0;   // -1/+1 direction of the last rx switch
    double ewma_rss_dbm = -150.0;

    bool operator==(const CellTrack&) const = default;
};

/// Receive-beam sweep position during SEARCH. One dwell spans one full base
/// station sweep period of granted listening; dwell completion is signalled
/// by the dwell's summary measurement.
struct SearchCursor {
    int beam = 0;
    int dwells_done = 0;

    bool operator==(const SearchCursor&) const = default;
};

/// An in-flight adjacent-beam comparison opened by the 3 dB rule. The two
/// candidates are sampled on consecutive measurement slots for the cell and
/// the better sample wins.
struct AdjacentProbe {
    int cell_id = -1;
    std::array<int, 2> candidates{0, 0};
    std::array<double, 2> samples{-150.0, -150.0};
    int collected = 0;
    double pre_probe_ref_dbm = -150.0; // escalation compares against this

    bool operator==(const AdjacentProbe&) const = default;
};

struct ProtocolState {
    Phase phase = Phase::Search;
    std::optional<CellTrack> serving;
    std::optional<CellTrack> neighbor;
    SearchCursor cursor;
    std::optional<AdjacentProbe> probe;
    int ra_attempts = 0;       // completed (failed) preamble attempts
    bool ra_response_pending = false;
    int failure_count = 0;     // mirrors serving.below_sens_run
    int unacked_requests = 0;  // consecutive UplinkNack count
    std::optional<int> pending_tx_request; // beam asked of the serving BS
    std::int64_t last_input_ms = -1;
    std::int64_t last_preamble_ms = -1;
    std::int64_t ignored_measurements = 0; // unknown-cell diagnostic

    bool operator==(const ProtocolState&) const = default;
};

/// Everything unspecified by Fig-style defaults is overridable here.
struct ProtocolParams {
    double sensitivity_dbm = -54.0;
    double edge_threshold_dbm = -44.0; // sensitivity + 10
    double drop_db = 3.0;
    int k_failure = 3;  // consecutive below-sensitivity serving samples
    int m_nack = 3;     // consecutive unacked uplink requests
    int r_max = 4;      // preamble attempts
    std::int64_t ra_retry_period_ms = 10;
    double ewma_alpha = 0.0; // 0 disables filtering
};

/// Static context for step(): the mobile codebook, the tx-beam count of each
/// base station, and the protocol constants.
struct ProtocolContext {
    Codebook mobile_book;
    std::map<int, int> bs_beam_counts;
    ProtocolParams params;
};

struct StepResult {
    ProtocolState state;
    std::vector<Action> actions;
};

/// Initial state for a mobile already attached to a cell (rx/tx beams and
/// timing established out of band before the run starts).
ProtocolState make_attached_state(int serving_cell, int rx_beam, int tx_beam);

/// Initial state for a mobile with no cell: full initial search, and the
/// first discovered cell becomes the serving cell.
ProtocolState make_searching_state(int start_beam = 0);

/// The transition function. Pure: identical (state, input, context) triples
/// produce identical results. Throws ProtocolError on time regressions.
StepResult step(const ProtocolState& state, const ProtocolInput& input,
                const ProtocolContext& ctx);

/// Ratchet update for the 3 dB reference: ref only moves upward between
/// switches; last always follows the sample.
CellTrack update_reference(CellTrack track, double sample_dbm);

/// Worst-case initial-search latency: one full base-station sweep period per
/// receive beam.
double search_schedule_s(const Codebook& rx_book, double ssb_period_s);

/// The rx beam the radio should listen with if the cell is granted the next
/// measurement slot: a pending probe candidate, the tracked beam, or the
/// search cursor. cell_id < 0 queries the search dwell beam.
int desired_rx_beam(const ProtocolState& state, int cell_id);

/// True when the state machine wants the next slot for this cell's probe.
bool probe_wants_slot(const ProtocolState& state, int cell_id);

} // namespace silent_tracker
