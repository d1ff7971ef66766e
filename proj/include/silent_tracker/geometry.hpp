// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>

namespace silent_tracker {

/// Position and orientation of a node in the 2-D azimuth plane.
/// heading_deg is always kept normalized to [0, 360).
struct Pose {
    double x_m = 0.0;
    double y_m = 0.0;
    double heading_deg = 0.0;
};

/// Wraps an angle to [0, 360).
inline double wrap_deg(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w < 0.0) w += 360.0;
    return w;
}

/// Absolute angular distance between two directions, in [0, 180].
inline double angular_distance_deg(double a_deg, double b_deg) {
    double d = std::fabs(wrap_deg(a_deg) - wrap_deg(b_deg));
    return d > 180.0 ? 360.0 - d : d;
}

inline Pose make_pose(double x_m, double y_m, double heading_deg) {
    if (!std::isfinite(x_m) || !std::isfinite(y_m) || !std::isfinite(heading_deg))
        throw std::domain_error("pose coordinates must be finite");
    return Pose{x_m, y_m, wrap_deg(heading_deg)};
}

inline double distance_m(const Pose& a, const Pose& b) {
    return std::hypot(b.x_m - a.x_m, b.y_m - a.y_m);
}

/// World-frame bearing of b as seen from a, in [0, 360).
inline double bearing_deg(const Pose& a, const Pose& b) {
    return wrap_deg(std::atan2(b.y_m - a.y_m, b.x_m - a.x_m) * 180.0 / M_PI);
}

} // namespace silent_tracker
