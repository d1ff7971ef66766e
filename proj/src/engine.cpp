// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/engine.hpp"

#include "silent_tracker/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace silent_tracker {

const char* to_string(Outcome o) {
    switch (o) {
    case Outcome::Soft: return "soft";
    case Outcome::Hard: return "hard";
    case Outcome::Fail: return "fail";
    }
    return "unknown";
}

Codebook CodebookSpec::build() const {
    return omni ? make_omni_codebook() : make_codebook(beamwidth_deg);
}

std::string CodebookSpec::label() const {
    if (omni)
        return "omni";
    std::ostringstream os;
    os << beamwidth_deg << "deg";
    return os.str();
}

namespace {

std::int64_t to_ms(double seconds) {
    return static_cast<std::int64_t>(std::llround(seconds * 1000.0));
}

// Measurements are reported with 0.001 dB resolution so that a recorded
// trace replays through the state machine bit-identically.
double quantize_dbm(double v) {
    return std::round(v * 1000.0) / 1000.0;
}

} // namespace

void SimConfig::validate() const {
    if (to_ms(schedule.meas_period_s) < 1)
        throw ConfigError("schedule.meas_period_s", "must be at least 1 ms");
    if (cells.empty())
        throw ConfigError("cells", "at least one cell is required");
    for (size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        std::string base = "cells[" + std::to_string(i) + "]";
        for (size_t j = 0; j < i; ++j)
            if (cells[j].id == c.id)
                throw ConfigError(base + ".id", "duplicate cell id");
        if (!std::isfinite(c.pose.x_m) || !std::isfinite(c.pose.y_m))
            throw ConfigError(base + ".pose", "coordinates must be finite");
        if (to_ms(c.ssb_period_s) < 1)
            throw ConfigError(base + ".ssb_period_s", "must be at least 1 ms");
        if (to_ms(c.ssb_period_s) > to_ms(schedule.meas_period_s))
            throw ConfigError(base + ".ssb_period_s",
                              "must not exceed schedule.meas_period_s");
        if (c.ssb_phase_s < 0.0 || to_ms(c.ssb_phase_s) >= to_ms(c.ssb_period_s))
            throw ConfigError(base + ".ssb_phase_s", "must lie within one period");
        if (!c.codebook.omni && !(c.codebook.beamwidth_deg > 0.0 && c.codebook.beamwidth_deg <= 360.0))
            throw ConfigError(base + ".codebook.beamwidth_deg", "must be in (0, 360]");
        int n_tx = c.codebook.build().size();
        if (n_tx > to_ms(c.ssb_period_s))
            throw ConfigError(base + ".codebook",
                              "sweep does not fit in the SSB period");
    }
    if (schedule.serving_slots < 1)
        throw ConfigError("schedule.serving_slots", "must be positive");
    if (schedule.neighbor_slots < 1)
        throw ConfigError("schedule.neighbor_slots", "must be positive");
    if (!mobile.codebook.omni &&
        !(mobile.codebook.beamwidth_deg > 0.0 && mobile.codebook.beamwidth_deg <= 360.0))
        throw ConfigError("mobile.codebook.beamwidth_deg", "must be in (0, 360]");
    if (!(mobile.channel.carrier_freq_hz > 0.0))
        throw ConfigError("mobile.channel.carrier_freq_hz", "must be positive");
    if (mobile.channel.sensitivity_dbm < mobile.channel.noise_floor_dbm)
        throw ConfigError("mobile.channel.sensitivity_dbm",
                          "must not lie below the noise floor");
    if (mobile.channel.shadowing_sigma_db < 0.0)
        throw ConfigError("mobile.channel.shadowing_sigma_db", "must be non-negative");
    if (mobile.mobility.speed_mps < 0.0)
        throw ConfigError("mobile.mobility.speed_mps", "must be non-negative");
    if (mobile.initial_serving_cell) {
        bool known = false;
        for (const auto& c : cells)
            known = known || c.id == *mobile.initial_serving_cell;
        if (!known)
            throw ConfigError("mobile.initial_serving_cell", "no such cell");
    }
    if (protocol.k_failure < 1)
        throw ConfigError("protocol.k_failure", "must be positive");
    if (protocol.m_nack < 1)
        throw ConfigError("protocol.m_nack", "must be positive");
    if (protocol.r_max < 1)
        throw ConfigError("protocol.r_max", "must be positive");
    if (protocol.ra_retry_period_ms < 1)
        throw ConfigError("protocol.ra_retry_period_ms", "must be at least 1 ms");
    if (!(protocol.drop_db > 0.0))
        throw ConfigError("protocol.drop_db", "must be positive");
    if (protocol.ewma_alpha < 0.0 || protocol.ewma_alpha > 1.0)
        throw ConfigError("protocol.ewma_alpha", "must be in [0, 1]");
    if (!(overlap_radius_m > 0.0))
        throw ConfigError("overlap_radius_m", "must be positive");
    if (to_ms(duration_s) < 1)
        throw ConfigError("duration_s", "must be at least 1 ms");
}

namespace {

struct CellState {
    CellConfig cfg;
    Codebook book;
    std::int64_t ssb_period_ms = 20;
    std::int64_t ssb_phase_ms = 0;

    // Transmitting beam at time t, or -1 outside the sweep window.
    int sweep_beam_at(std::int64_t t_ms) const {
        std::int64_t sub = (t_ms - ssb_phase_ms) % ssb_period_ms;
        if (sub < 0)
            sub += ssb_period_ms;
        return sub < book.size() ? static_cast<int>(sub) : -1;
    }

    // First t >= from_ms at which tx beam `beam` is on the air.
    std::int64_t next_tx_time(int beam, std::int64_t from_ms) const {
        std::int64_t sub = (from_ms - ssb_phase_ms) % ssb_period_ms;
        if (sub < 0)
            sub += ssb_period_ms;
        std::int64_t delta = (beam - sub + ssb_period_ms) % ssb_period_ms;
        return from_ms + delta;
    }
};

struct PendingInput {
    std::int64_t t_ms;
    ProtocolInput input;
};

class TrialRunner {
  public:
    TrialRunner(const SimConfig& cfg, std::uint64_t trial_index)
        : cfg_(cfg), rng_(cfg.seed, trial_index) {
        report_.seed = cfg.seed;
        report_.trial_index = trial_index;
        mobile_book_ = cfg.mobile.codebook.build();

        ctx_ = make_protocol_context(cfg);
        for (const auto& cc : cfg.cells) {
            CellState cs;
            cs.cfg = cc;
            cs.book = cc.codebook.build();
            cs.ssb_period_ms = to_ms(cc.ssb_period_s);
            cs.ssb_phase_ms = to_ms(cc.ssb_phase_s);
            cells_.push_back(std::move(cs));
        }

        // The serving cell's sweep timing is known; every other cell's phase
        // is an unknown the trial draws at random.
        for (auto& cs : cells_) {
            bool is_serving = cfg.mobile.initial_serving_cell &&
                              *cfg.mobile.initial_serving_cell == cs.cfg.id;
            if (!is_serving)
                cs.ssb_phase_ms =
                    static_cast<std::int64_t>(rng_.uniform_u64(cs.ssb_period_ms));
        }

        meas_period_ms_ = to_ms(cfg.schedule.meas_period_s);
        duration_ms_ = to_ms(cfg.duration_s);

        state_ = initial_protocol_state(cfg);
        if (cfg.mobile.initial_serving_cell)
            initial_serving_id_ = *cfg.mobile.initial_serving_cell;
        else
            search_start_ms_ = 0;
    }

    TrialReport run() {
        for (std::int64_t t = 0; t < duration_ms_ && !done_; ++t) {
            feed(SlotTick{t});
            deliver_queued(t);
            if (!done_ && t % meas_period_ms_ == 0)
                plan_period(t);
            if (!done_ && pending_sample_ && pending_sample_->t_ms == t)
                take_tracked_sample(t);
            if (!done_ && dwell_ && t >= dwell_->start_ms)
                dwell_step(t);
            slot_metrics(t);
        }
        finalize();
        return std::move(report_);
    }

  private:
    struct ScheduledSample {
        std::int64_t t_ms;
        int cell_id;
        int tx_beam;
        int rx_beam;
    };
    struct Dwell {
        std::int64_t start_ms;
        std::int64_t end_ms; // inclusive
        int rx_beam;
        bool heard = false;
        std::int64_t best_t = 0;
        int best_cell = -1;
        int best_tx = -1;
        double best_rss = -150.0;
    };

    const CellState& cell_by_id(int id) const {
        for (const auto& cs : cells_)
            if (cs.cfg.id == id)
                return cs;
        throw ConfigError("cells", "unknown cell id " + std::to_string(id));
    }

    Pose mobile_pose(std::int64_t t_ms) const {
        return pose_at(cfg_.mobile.mobility, static_cast<double>(t_ms) / 1000.0);
    }

    double shadow_draw() {
        double sigma = cfg_.mobile.channel.shadowing_sigma_db;
        return sigma > 0.0 ? sigma * rng_.normal() : 0.0;
    }

    double measure_dbm(const CellState& cs, int tx_beam, int rx_beam, std::int64_t t_ms) {
        Pose mob = mobile_pose(t_ms);
        return quantize_dbm(rss_dbm(cs.cfg.pose, mob, cs.book.beams[tx_beam],
                                    mobile_book_.beams[rx_beam], cfg_.mobile.channel,
                                    shadow_draw()));
    }

    // Reverse link as seen by the base station: the mobile transmits with the
    // beam it tracks the cell on, the base station listens the way it talks.
    double reverse_dbm(const CellState& cs, int mobile_beam, int bs_beam, std::int64_t t_ms) {
        Pose mob = mobile_pose(t_ms);
        return quantize_dbm(rss_dbm(mob, cs.cfg.pose, mobile_book_.beams[mobile_beam],
                                    cs.book.beams[bs_beam], cfg_.mobile.channel,
                                    shadow_draw()));
    }

    void feed(const ProtocolInput& input) {
        StepResult r = step(state_, input, ctx_);
        state_ = std::move(r.state);
        std::int64_t t = input_time_ms(input);
        if (std::holds_alternative<MeasurementReport>(input))
            report_.trace.push_back(std::get<MeasurementReport>(input));
        for (const Action& a : r.actions)
            apply_action(t, a);
        note_discovery(t);
    }

    void apply_action(std::int64_t t, const Action& a) {
        report_.actions.push_back(
            {t, state_.phase, action_name(a), action_cell(a), action_beam(a)});

        if (const auto* srb = std::get_if<SetRxBeam>(&a)) {
            ++report_.rx_switch_count[srb->cell_id];
        } else if (const auto* req = std::get_if<RequestTxBeamSwitch>(&a)) {
            const CellState& cs = cell_by_id(req->cell_id);
            int mob_beam = desired_tx_toward(req->cell_id);
            double rev = reverse_dbm(cs, mob_beam, current_tx_belief(req->cell_id), t);
            bool ok = rev >= cfg_.mobile.channel.sensitivity_dbm;
            if (ok)
                queue_.push_back({t + 1, UplinkAck{t + 1, req->cell_id}});
            else
                queue_.push_back({t + 1, UplinkNack{t + 1, req->cell_id}});
        } else if (const auto* pre = std::get_if<SendPreamble>(&a)) {
            const CellState& cs = cell_by_id(pre->cell_id);
            double rev = reverse_dbm(cs, pre->rx_beam, pre->tx_beam, t);
            bool ok = rev >= cfg_.rach_threshold_dbm;
            queue_.push_back({t + 1, RaResponse{t + 1, pre->cell_id, ok}});
        } else if (std::get_if<StartNeighborSearch>(&a)) {
            search_start_ms_ = t;
            dwell_.reset();
        } else if (std::get_if<DeclareServingSwitch>(&a)) {
            failure_ms_ = t;
        } else if (std::get_if<DeclareSoftHandover>(&a)) {
            report_.outcome = Outcome::Soft;
            if (failure_ms_ >= 0)
                report_.interruption_s = static_cast<double>(t - failure_ms_) / 1000.0;
            window_end_ms_ = t;
            done_ = true;
        } else if (std::get_if<DeclareHardHandover>(&a)) {
            report_.outcome = Outcome::Hard;
            window_end_ms_ = t;
            done_ = true;
        }
    }

    int desired_tx_toward(int cell_id) const {
        // beam the mobile would transmit with toward this cell
        if (state_.serving && state_.serving->cell_id == cell_id)
            return state_.serving->rx_beam;
        if (state_.neighbor && state_.neighbor->cell_id == cell_id)
            return state_.neighbor->rx_beam;
        return 0;
    }

    int current_tx_belief(int cell_id) const {
        if (state_.serving && state_.serving->cell_id == cell_id)
            return state_.serving->tx_beam;
        if (state_.neighbor && state_.neighbor->cell_id == cell_id)
            return state_.neighbor->tx_beam;
        return 0;
    }

    void note_discovery(std::int64_t t) {
        if (report_.discovered)
            return;
        bool attached_from_search = !initial_serving_id_.has_value() && state_.serving;
        if (state_.neighbor || attached_from_search) {
            report_.discovered = true;
            discovery_ms_ = t;
            target_cell_ = state_.neighbor ? state_.neighbor->cell_id
                                           : state_.serving->cell_id;
            std::int64_t from = search_start_ms_ >= 0 ? search_start_ms_ : 0;
            report_.discovery_latency_s = static_cast<double>(t - from) / 1000.0;
            report_.search_time_s =
                static_cast<double>(dwells_granted_) * meas_period_ms_ / 1000.0;
            Pose mob = mobile_pose(t);
            bool in_overlap =
                distance_m(mob, cell_by_id(target_cell_).cfg.pose) <= cfg_.overlap_radius_m;
            if (initial_serving_id_)
                in_overlap = in_overlap &&
                             distance_m(mob, cell_by_id(*initial_serving_id_).cfg.pose) <=
                                 cfg_.overlap_radius_m;
            report_.discovery_in_overlap = in_overlap;
            dwell_.reset();
        }
    }

    void deliver_queued(std::int64_t t) {
        // queued uplink outcomes and RA responses land on the next slot
        while (!queue_.empty() && queue_.front().t_ms <= t && !done_) {
            ProtocolInput in = queue_.front().input;
            queue_.pop_front();
            feed(in);
        }
    }

    void plan_period(std::int64_t t) {
        pending_sample_.reset();
        if (dwell_ && dwell_->end_ms < t)
            dwell_.reset();

        int serving_id = state_.serving ? state_.serving->cell_id : -1;
        int neighbor_id = state_.neighbor ? state_.neighbor->cell_id : -1;

        // A pending adjacent-beam probe takes the next slot for its cell.
        if (serving_id >= 0 && probe_wants_slot(state_, serving_id)) {
            schedule_tracked(serving_id, t);
            return;
        }
        if (neighbor_id >= 0 && probe_wants_slot(state_, neighbor_id)) {
            schedule_tracked(neighbor_id, t);
            return;
        }

        switch (state_.phase) {
        case Phase::Search:
            if (!state_.serving) {
                schedule_dwell(t);
            } else if (ratio_grant_is_serving()) {
                schedule_tracked(serving_id, t);
            } else {
                schedule_dwell(t);
            }
            break;
        case Phase::TrackServingOnly:
            schedule_tracked(serving_id, t);
            break;
        case Phase::DualTrack:
            schedule_tracked(ratio_grant_is_serving() ? serving_id : neighbor_id, t);
            break;
        case Phase::RadioLinkFailure:
        case Phase::RandomAccess:
            // the old serving link is gone; keep the target fresh
            schedule_tracked(neighbor_id >= 0 ? neighbor_id : serving_id, t);
            break;
        case Phase::HandoverComplete:
        case Phase::HardHandover:
            break;
        }
    }

    bool ratio_grant_is_serving() {
        int cycle = cfg_.schedule.serving_slots + cfg_.schedule.neighbor_slots;
        bool serving = (pattern_pos_ % cycle) < cfg_.schedule.serving_slots;
        pattern_pos_ = (pattern_pos_ + 1) % cycle;
        return serving;
    }

    void schedule_tracked(int cell_id, std::int64_t period_start) {
        if (cell_id < 0)
            return;
        const CellState& cs = cell_by_id(cell_id);
        int tx = current_tx_belief(cell_id);
        int rx = desired_rx_beam(state_, cell_id);
        std::int64_t t_samp = cs.next_tx_time(tx, period_start);
        pending_sample_ = ScheduledSample{t_samp, cell_id, tx, rx};
    }

    void schedule_dwell(std::int64_t period_start) {
        Dwell d;
        d.start_ms = period_start;
        d.end_ms = period_start + meas_period_ms_ - 1;
        d.rx_beam = desired_rx_beam(state_, -1);
        dwell_ = d;
        ++dwells_granted_;
    }

    void take_tracked_sample(std::int64_t t) {
        ScheduledSample s = *pending_sample_;
        pending_sample_.reset();
        double v = measure_dbm(cell_by_id(s.cell_id), s.tx_beam, s.rx_beam, t);
        feed(MeasurementReport{t, s.cell_id, s.tx_beam, s.rx_beam, v});
    }

    // One sub-slot of a search dwell: listen on the cursor beam for whatever
    // any non-serving base station transmits right now, and report the best
    // sample heard when the dwell closes.
    void dwell_step(std::int64_t t) {
        Dwell& d = *dwell_;
        int serving_id = state_.serving ? state_.serving->cell_id : -1;
        for (const CellState& cs : cells_) {
            if (cs.cfg.id == serving_id)
                continue;
            int beam = cs.sweep_beam_at(t);
            if (beam < 0)
                continue;
            double v = measure_dbm(cs, beam, d.rx_beam, t);
            if (!d.heard || v > d.best_rss) {
                d.heard = true;
                d.best_t = t;
                d.best_cell = cs.cfg.id;
                d.best_tx = beam;
                d.best_rss = v;
            }
        }
        if (t == d.end_ms) {
            MeasurementReport m;
            m.t_ms = t;
            m.rx_beam = d.rx_beam;
            if (d.heard) {
                m.cell_id = d.best_cell;
                m.tx_beam = d.best_tx;
                m.rss_dbm = d.best_rss;
            }
            dwell_.reset();
            feed(m);
        }
    }

    void slot_metrics(std::int64_t t) {
        if (!report_.discovered || target_cell_ < 0)
            return;
        if (window_end_ms_ >= 0 && t >= window_end_ms_)
            return;
        const CellTrack* track = nullptr;
        if (state_.neighbor && state_.neighbor->cell_id == target_cell_)
            track = &*state_.neighbor;
        else if (state_.serving && state_.serving->cell_id == target_cell_)
            track = &*state_.serving;
        if (!track)
            return;
        Pose mob = mobile_pose(t);
        const CellState& cs = cell_by_id(target_cell_);
        int oracle = best_beam_oracle(
            mobile_book_, wrap_deg(bearing_deg(mob, cs.cfg.pose) - mob.heading_deg));
        int n = mobile_book_.size();
        int dist = std::abs(track->rx_beam - oracle);
        dist = std::min(dist, n - dist);
        ++alignment_total_;
        if (dist <= 1)
            ++alignment_hit_;
    }

    void finalize() {
        if (alignment_total_ > 0)
            report_.alignment_ratio =
                static_cast<double>(alignment_hit_) / static_cast<double>(alignment_total_);
    }

    const SimConfig& cfg_;
    TrialRng rng_;
    Codebook mobile_book_;
    std::vector<CellState> cells_;
    ProtocolContext ctx_;
    ProtocolState state_;
    TrialReport report_;

    std::int64_t meas_period_ms_ = 20;
    std::int64_t duration_ms_ = 0;
    std::optional<int> initial_serving_id_;
    std::deque<PendingInput> queue_;
    std::optional<ScheduledSample> pending_sample_;
    std::optional<Dwell> dwell_;
    int pattern_pos_ = 0;
    std::int64_t dwells_granted_ = 0;
    std::int64_t search_start_ms_ = -1;
    std::int64_t discovery_ms_ = -1;
    std::int64_t failure_ms_ = -1;
    std::int64_t window_end_ms_ = -1;
    int target_cell_ = -1;
    std::int64_t alignment_hit_ = 0;
    std::int64_t alignment_total_ = 0;
    bool done_ = false;
};

} // namespace

TrialReport run_trial(const SimConfig& config, std::uint64_t trial_index) {
    config.validate();
    return TrialRunner(config, trial_index).run();
}

ProtocolContext make_protocol_context(const SimConfig& config) {
    ProtocolContext ctx;
    ctx.mobile_book = config.mobile.codebook.build();
    ctx.params = config.protocol;
    for (const auto& cc : config.cells)
        ctx.bs_beam_counts[cc.id] = cc.codebook.build().size();
    return ctx;
}

ProtocolState initial_protocol_state(const SimConfig& config) {
    if (!config.mobile.initial_serving_cell)
        return make_searching_state(0);

    const CellConfig* serving = nullptr;
    for (const auto& cc : config.cells)
        if (cc.id == *config.mobile.initial_serving_cell)
            serving = &cc;
    if (!serving)
        throw ConfigError("mobile.initial_serving_cell", "no such cell");

    Codebook mobile_book = config.mobile.codebook.build();
    Codebook bs_book = serving->codebook.build();
    Pose mob = pose_at(config.mobile.mobility, 0.0);
    int rx = best_beam_oracle(
        mobile_book, wrap_deg(bearing_deg(mob, serving->pose) - mob.heading_deg));
    int tx = best_beam_oracle(
        bs_book, wrap_deg(bearing_deg(serving->pose, mob) - serving->pose.heading_deg));
    return make_attached_state(serving->id, rx, tx);
}

bool sweep_success(const TrialReport& report) {
    return report.discovered && report.discovery_in_overlap &&
           report.outcome != Outcome::Fail;
}

} // namespace silent_tracker
