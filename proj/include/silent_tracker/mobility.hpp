// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "silent_tracker/geometry.hpp"

#include <string>

namespace silent_tracker {

enum class MobilityVariant { Static, Walk, Rotation, Vehicular };

inline constexpr double kWalkSpeedMps = 1.4;
inline constexpr double kVehicularSpeedMps = 8.9408; // 20 mph
inline constexpr double kRotationRateDps = 120.0;

/// Closed-form trajectory. Walk and Vehicular translate along a fixed
/// bearing at constant speed with the heading frozen; Rotation spins in
/// place; Static does nothing.
struct MobilityModel {
    MobilityVariant variant = MobilityVariant::Static;
    Pose start;
    double speed_mps = 0.0;
    double omega_dps = 0.0;
    double direction_deg = 0.0; // bearing of linear motion

    static MobilityModel static_at(const Pose& pose);
    static MobilityModel walk(const Pose& start, double direction_deg,
                              double speed_mps = kWalkSpeedMps);
    static MobilityModel vehicular(const Pose& start, double direction_deg,
                                   double speed_mps = kVehicularSpeedMps);
    static MobilityModel rotation(const Pose& start,
                                  double omega_dps = kRotationRateDps);
};

/// Pose at time t >= 0 seconds. Throws std::domain_error for negative t.
Pose pose_at(const MobilityModel& model, double t_s);

const char* to_string(MobilityVariant v);
MobilityVariant mobility_variant_from_string(const std::string& name);

} // namespace silent_tracker
