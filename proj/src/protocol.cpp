// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace silent_tracker {

const char* to_string(Phase p) {
    switch (p) {
    case Phase::Search: return "SEARCH";
    case Phase::TrackServingOnly: return "TRACK_SERVING_ONLY";
    case Phase::DualTrack: return "DUAL_TRACK";
    case Phase::RadioLinkFailure: return "RADIO_LINK_FAILURE";
    case Phase::RandomAccess: return "RANDOM_ACCESS";
    case Phase::HandoverComplete: return "HANDOVER_COMPLETE";
    case Phase::HardHandover: return "HARD_HANDOVER";
    }
    return "UNKNOWN";
}

std::int64_t input_time_ms(const ProtocolInput& in) {
    return std::visit([](const auto& v) { return v.t_ms; }, in);
}

const char* action_name(const Action& a) {
    struct Namer {
        const char* operator()(const SetRxBeam&) const { return "SET_RX_BEAM"; }
        const char* operator()(const RequestTxBeamSwitch&) const { return "REQUEST_TX_BEAM_SWITCH"; }
        const char* operator()(const StartNeighborSearch&) const { return "START_NEIGHBOR_SEARCH"; }
        const char* operator()(const SendPreamble&) const { return "SEND_PREAMBLE"; }
        const char* operator()(const DeclareServingSwitch&) const { return "DECLARE_SERVING_SWITCH"; }
        const char* operator()(const DeclareSoftHandover&) const { return "DECLARE_SOFT_HANDOVER"; }
        const char* operator()(const DeclareHardHandover&) const { return "DECLARE_HARD_HANDOVER"; }
    };
    return std::visit(Namer{}, a);
}

int action_cell(const Action& a) {
    struct Cell {
        int operator()(const SetRxBeam& v) const { return v.cell_id; }
        int operator()(const RequestTxBeamSwitch& v) const { return v.cell_id; }
        int operator()(const StartNeighborSearch&) const { return -1; }
        int operator()(const SendPreamble& v) const { return v.cell_id; }
        int operator()(const DeclareServingSwitch& v) const { return v.new_cell_id; }
        int operator()(const DeclareSoftHandover&) const { return -1; }
        int operator()(const DeclareHardHandover&) const { return -1; }
    };
    return std::visit(Cell{}, a);
}

int action_beam(const Action& a) {
    struct BeamOf {
        int operator()(const SetRxBeam& v) const { return v.beam; }
        int operator()(const RequestTxBeamSwitch& v) const { return v.beam; }
        int operator()(const StartNeighborSearch&) const { return -1; }
        int operator()(const SendPreamble& v) const { return v.rx_beam; }
        int operator()(const DeclareServingSwitch&) const { return -1; }
        int operator()(const DeclareSoftHandover&) const { return -1; }
        int operator()(const DeclareHardHandover&) const { return -1; }
    };
    return std::visit(BeamOf{}, a);
}

CellTrack update_reference(CellTrack track, double sample_dbm) {
    if (track.ref_pending) {
        track.ref_rss_dbm = sample_dbm;
        track.ref_pending = false;
    } else {
        track.ref_rss_dbm = std::max(track.ref_rss_dbm, sample_dbm);
    }
    track.last_rss_dbm = sample_dbm;
    return track;
}

double search_schedule_s(const Codebook& rx_book, double ssb_period_s) {
    if (!(ssb_period_s > 0.0))
        throw std::domain_error("search_schedule: period must be positive");
    return rx_book.size() * ssb_period_s;
}

ProtocolState make_attached_state(int serving_cell, int rx_beam, int tx_beam) {
    ProtocolState s;
    s.phase = Phase::TrackServingOnly;
    CellTrack t;
    t.cell_id = serving_cell;
    t.rx_beam = rx_beam;
    t.tx_beam = tx_beam;
    t.timing_known = true;
    s.serving = t;
    return s;
}

ProtocolState make_searching_state(int start_beam) {
    ProtocolState s;
    s.phase = Phase::Search;
    s.cursor.beam = start_beam;
    return s;
}

int desired_rx_beam(const ProtocolState& state, int cell_id) {
    if (state.probe && state.probe->cell_id == cell_id &&
        state.probe->collected < 2)
        return state.probe->candidates[state.probe->collected];
    if (state.serving && state.serving->cell_id == cell_id)
        return state.serving->rx_beam;
    if (state.neighbor && state.neighbor->cell_id == cell_id)
        return state.neighbor->rx_beam;
    if (cell_id < 0)
        return state.cursor.beam;
    throw ProtocolError("desired_rx_beam: cell " + std::to_string(cell_id) +
                        " is not tracked");
}

bool probe_wants_slot(const ProtocolState& state, int cell_id) {
    return state.probe && state.probe->cell_id == cell_id &&
           state.probe->collected < 2 && state.phase != Phase::HandoverComplete &&
           state.phase != Phase::HardHandover;
}

namespace {

int bs_beams_for(const ProtocolContext& ctx, int cell_id) {
    auto it = ctx.bs_beam_counts.find(cell_id);
    return it == ctx.bs_beam_counts.end() ? ctx.mobile_book.size() : it->second;
}

bool is_terminal(Phase p) {
    return p == Phase::HandoverComplete || p == Phase::HardHandover;
}

class Stepper {
  public:
    Stepper(ProtocolState state, const ProtocolContext& ctx)
        : s_(std::move(state)), ctx_(ctx) {}

    StepResult run(const ProtocolInput& input) {
        std::int64_t t = input_time_ms(input);
        if (t < s_.last_input_ms)
            throw ProtocolError("input at t=" + std::to_string(t) +
                                "ms precedes t=" + std::to_string(s_.last_input_ms) + "ms");
        s_.last_input_ms = t;
        if (!is_terminal(s_.phase))
            std::visit([&](const auto& v) { handle(v); }, input);
        return {std::move(s_), std::move(actions_)};
    }

  private:
    const ProtocolParams& params() const { return ctx_.params; }

    void emit(Action a) { actions_.push_back(std::move(a)); }

    bool in_random_access() const {
        return s_.phase == Phase::RadioLinkFailure || s_.phase == Phase::RandomAccess;
    }

    // The cell access is attempted toward: the tracked neighbor while it
    // exists, the serving cell after completion flips the roles.
    CellTrack& target() { return s_.neighbor ? *s_.neighbor : *s_.serving; }

    void send_preamble(std::int64_t t) {
        const CellTrack& tgt = target();
        emit(SendPreamble{tgt.cell_id, tgt.rx_beam, tgt.tx_beam});
        s_.last_preamble_ms = t;
        s_.ra_response_pending = true;
    }

    void enter_failure(std::int64_t t) {
        if (in_random_access() || !s_.neighbor || !s_.neighbor->timing_known) {
            s_.phase = Phase::HardHandover;
            emit(DeclareHardHandover{});
            return;
        }
        s_.phase = Phase::RadioLinkFailure;
        s_.probe.reset();
        s_.pending_tx_request.reset();
        s_.ra_attempts = 0;
        emit(DeclareServingSwitch{s_.neighbor->cell_id});
        send_preamble(t);
    }

    void enter_search(int from_beam) {
        s_.phase = Phase::Search;
        s_.cursor = SearchCursor{from_beam, 0};
        emit(StartNeighborSearch{});
    }

    void handle(const SlotTick& tick) {
        if (s_.phase == Phase::RadioLinkFailure) {
            s_.phase = Phase::RandomAccess;
            return;
        }
        if (s_.phase != Phase::RandomAccess)
            return;
        if (tick.t_ms - s_.last_preamble_ms < params().ra_retry_period_ms)
            return;
        if (s_.ra_response_pending) {
            // attempt timed out with no response
            s_.ra_response_pending = false;
            ++s_.ra_attempts;
            if (s_.ra_attempts >= params().r_max) {
                s_.phase = Phase::HardHandover;
                emit(DeclareHardHandover{});
            }
            return;
        }
        send_preamble(tick.t_ms);
    }

    void handle(const RaResponse& resp) {
        if (!in_random_access())
            return;
        if (resp.success) {
            s_.phase = Phase::HandoverComplete;
            if (s_.neighbor) {
                s_.serving = s_.neighbor;
                s_.neighbor.reset();
            }
            s_.probe.reset();
            emit(DeclareSoftHandover{});
            return;
        }
        s_.ra_response_pending = false;
        ++s_.ra_attempts;
        if (s_.ra_attempts >= params().r_max) {
            s_.phase = Phase::HardHandover;
            emit(DeclareHardHandover{});
        }
        // otherwise the next preamble goes out one retry period after the last
    }

    void handle(const UplinkAck& ack) {
        if (!s_.serving || ack.cell_id != s_.serving->cell_id)
            return;
        s_.unacked_requests = 0;
        if (s_.pending_tx_request) {
            s_.serving->tx_beam = *s_.pending_tx_request;
            s_.serving->ref_pending = true; // new reference epoch
            s_.pending_tx_request.reset();
        }
    }

    void handle(const UplinkNack& nack) {
        if (!s_.serving || nack.cell_id != s_.serving->cell_id)
            return;
        s_.pending_tx_request.reset();
        ++s_.unacked_requests;
        if (s_.unacked_requests >= params().m_nack)
            enter_failure(nack.t_ms);
    }

    void handle(const MeasurementReport& m) {
        if (s_.serving && m.cell_id == s_.serving->cell_id) {
            track_sample(*s_.serving, m, /*is_serving=*/true);
            return;
        }
        if (s_.neighbor && m.cell_id == s_.neighbor->cell_id) {
            track_sample(*s_.neighbor, m, /*is_serving=*/false);
            return;
        }
        if (s_.phase == Phase::Search) {
            search_dwell_result(m);
            return;
        }
        ++s_.ignored_measurements;
    }

    void search_dwell_result(const MeasurementReport& m) {
        if (m.cell_id >= 0 && m.rss_dbm >= params().sensitivity_dbm) {
            CellTrack found;
            found.cell_id = m.cell_id;
            found.rx_beam = m.rx_beam;
            found.tx_beam = m.tx_beam;
            found.ref_rss_dbm = m.rss_dbm;
            found.last_rss_dbm = m.rss_dbm;
            found.ewma_rss_dbm = m.rss_dbm;
            found.ref_pending = false;
            found.timing_known = true;
            if (s_.serving) {
                s_.neighbor = found;
                s_.phase = Phase::DualTrack;
            } else {
                // initial access: the first discovered cell is camped on
                s_.serving = found;
                s_.phase = Phase::TrackServingOnly;
            }
            return;
        }
        s_.cursor.beam = (s_.cursor.beam + 1) % ctx_.mobile_book.size();
        ++s_.cursor.dwells_done;
    }

    double filtered(CellTrack& track, double sample) {
        if (params().ewma_alpha <= 0.0)
            return sample;
        if (track.ewma_rss_dbm <= -150.0)
            track.ewma_rss_dbm = sample;
        else
            track.ewma_rss_dbm = params().ewma_alpha * sample +
                                 (1.0 - params().ewma_alpha) * track.ewma_rss_dbm;
        return track.ewma_rss_dbm;
    }

    void track_sample(CellTrack& track, const MeasurementReport& m, bool is_serving) {
        double eff = filtered(track, m.rss_dbm);

        if (eff < params().sensitivity_dbm)
            ++track.below_sens_run;
        else
            track.below_sens_run = 0;
        if (is_serving)
            s_.failure_count = track.below_sens_run;

        if (track.below_sens_run >= params().k_failure) {
            if (is_serving) {
                // a dead ex-serving cell during random access is expected
                if (!in_random_access()) {
                    enter_failure(m.t_ms);
                    return;
                }
            } else if (in_random_access()) {
                // the handover target is gone mid-access
                s_.phase = Phase::HardHandover;
                s_.probe.reset();
                emit(DeclareHardHandover{});
                return;
            } else {
                drop_neighbor();
                return;
            }
        }

        if (s_.probe && s_.probe->cell_id == track.cell_id) {
            probe_sample(track, eff, is_serving);
            return;
        }

        track = update_reference(track, eff);

        if (track.last_rss_dbm <= track.ref_rss_dbm - params().drop_db)
            on_drop(track, is_serving);

        if (is_serving && s_.phase == Phase::TrackServingOnly && !s_.neighbor &&
            eff <= params().edge_threshold_dbm)
            enter_search(track.rx_beam);
    }

    void drop_neighbor() {
        s_.neighbor.reset();
        if (s_.probe && s_.serving && s_.probe->cell_id != s_.serving->cell_id)
            s_.probe.reset();
        if (s_.phase == Phase::DualTrack)
            enter_search(s_.serving->rx_beam);
    }

    void on_drop(CellTrack& track, bool is_serving) {
        int n = ctx_.mobile_book.size();
        if (n == 1) {
            // no adjacent beam to try; the base station has to move instead
            if (is_serving)
                request_tx_switch(track);
            return;
        }
        if (s_.probe)
            return; // one probe at a time; the other cell waits its turn
        auto [left, right] = adjacent(ctx_.mobile_book, track.rx_beam);
        AdjacentProbe p;
        p.cell_id = track.cell_id;
        p.candidates = {left, right};
        p.pre_probe_ref_dbm = track.ref_rss_dbm;
        s_.probe = p;
    }

    void probe_sample(CellTrack& track, double eff, bool is_serving) {
        AdjacentProbe& p = *s_.probe;
        p.samples[p.collected] = eff;
        ++p.collected;
        if (p.collected < 2)
            return;

        int pick; // index into candidates
        if (p.samples[0] > p.samples[1]) {
            pick = 0;
        } else if (p.samples[1] > p.samples[0]) {
            pick = 1;
        } else if (track.last_switch_dir != 0) {
            // tie: keep the rotation direction of the previous switch
            int n = ctx_.mobile_book.size();
            int forward = (track.rx_beam + track.last_switch_dir + n) % n;
            pick = (p.candidates[0] == forward) ? 0 : 1;
        } else {
            pick = (p.candidates[0] <= p.candidates[1]) ? 0 : 1;
        }

        int n = ctx_.mobile_book.size();
        int winner = p.candidates[pick];
        double winner_rss = p.samples[pick];
        double pre_ref = p.pre_probe_ref_dbm;
        s_.probe.reset();

        track.last_switch_dir = (winner == (track.rx_beam + 1) % n) ? +1 : -1;
        track.rx_beam = winner;
        track.ref_rss_dbm = winner_rss; // reset on switch
        track.last_rss_dbm = winner_rss;
        track.ref_pending = false;
        emit(SetRxBeam{track.cell_id, winner});

        // mobile-side adjustment did not suffice; ask the base station
        if (is_serving && winner_rss <= pre_ref - params().drop_db)
            request_tx_switch(track);
    }

    void request_tx_switch(CellTrack& track) {
        if (in_random_access() || s_.pending_tx_request)
            return;
        int n_tx = bs_beams_for(ctx_, track.cell_id);
        if (n_tx <= 1)
            return;
        int dir = track.last_switch_dir != 0 ? track.last_switch_dir : +1;
        int want = (track.tx_beam + dir + n_tx) % n_tx;
        s_.pending_tx_request = want;
        emit(RequestTxBeamSwitch{track.cell_id, want});
    }

    ProtocolState s_;
    const ProtocolContext& ctx_;
    std::vector<Action> actions_;
};

} // namespace

StepResult step(const ProtocolState& state, const ProtocolInput& input,
                const ProtocolContext& ctx) {
    return Stepper(state, ctx).run(input);
}

} // namespace silent_tracker
