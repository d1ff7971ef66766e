// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "silent_tracker/codebook.hpp"
#include "silent_tracker/geometry.hpp"

namespace silent_tracker {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

struct ChannelParams {
    double carrier_freq_hz = 60e9;
    double tx_power_dbm = 10.0;
    double noise_floor_dbm = -94.0;
    double sensitivity_dbm = -54.0;  // detection threshold
    double shadowing_sigma_db = 0.0; // i.i.d. log-normal per measurement
};

/// Free-space path loss, 20*log10(4*pi*d*f/c).
double fspl_db(double distance_m, double freq_hz);

/// Directional gain at an angular offset from boresight. Parabolic-in-dB
/// main lobe, attenuation 12*(offset/theta3dB)^2, clamped at the 20 dB
/// sidelobe floor. The omni beam is 0 dBi everywhere.
double beam_gain_dbi(const Beam& beam, double offset_deg);

/// Link budget between two posed nodes: tx power, both antenna gains, free
/// space loss, plus a caller-supplied shadowing draw in dB. Beam boresights
/// are interpreted relative to each node's heading.
double rss_dbm(const Pose& tx_pose, const Pose& rx_pose, const Beam& tx_beam,
               const Beam& rx_beam, const ChannelParams& params,
               double noise_draw_db = 0.0);

} // namespace silent_tracker
