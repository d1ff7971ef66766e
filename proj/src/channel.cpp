// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace silent_tracker {

namespace {
constexpr double kSidelobeFloorDb = 20.0;
} // namespace

double fspl_db(double distance_m, double freq_hz) {
    if (!(distance_m > 0.0))
        throw std::domain_error("fspl: distance must be positive");
    if (!(freq_hz > 0.0))
        throw std::domain_error("fspl: frequency must be positive");
    return 20.0 * std::log10(4.0 * M_PI * distance_m * freq_hz / kSpeedOfLight);
}

double beam_gain_dbi(const Beam& beam, double offset_deg) {
    if (beam.omni)
        return 0.0;
    double off = angular_distance_deg(offset_deg, 0.0);
    double attenuation = 12.0 * (off / beam.theta_3db_deg) * (off / beam.theta_3db_deg);
    return beam.peak_gain_dbi - std::min(attenuation, kSidelobeFloorDb);
}

double rss_dbm(const Pose& tx_pose, const Pose& rx_pose, const Beam& tx_beam,
               const Beam& rx_beam, const ChannelParams& params,
               double noise_draw_db) {
    double d = distance_m(tx_pose, rx_pose);
    if (d <= 0.0)
        throw std::domain_error("rss: tx and rx poses coincide");

    double tx_bearing = bearing_deg(tx_pose, rx_pose);
    double rx_bearing = bearing_deg(rx_pose, tx_pose);
    double tx_off = angular_distance_deg(tx_pose.heading_deg + tx_beam.boresight_deg, tx_bearing);
    double rx_off = angular_distance_deg(rx_pose.heading_deg + rx_beam.boresight_deg, rx_bearing);

    return params.tx_power_dbm + beam_gain_dbi(tx_beam, tx_off) +
           beam_gain_dbi(rx_beam, rx_off) - fspl_db(d, params.carrier_freq_hz) +
           noise_draw_db;
}

} // namespace silent_tracker
