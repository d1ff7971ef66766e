// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/mobility.hpp"

#include <cmath>
#include <stdexcept>

namespace silent_tracker {

MobilityModel MobilityModel::static_at(const Pose& pose) {
    MobilityModel m;
    m.variant = MobilityVariant::Static;
    m.start = pose;
    return m;
}

MobilityModel MobilityModel::walk(const Pose& start, double direction_deg, double speed_mps) {
    MobilityModel m;
    m.variant = MobilityVariant::Walk;
    m.start = start;
    m.direction_deg = wrap_deg(direction_deg);
    m.speed_mps = speed_mps;
    return m;
}

MobilityModel MobilityModel::vehicular(const Pose& start, double direction_deg, double speed_mps) {
    MobilityModel m = walk(start, direction_deg, speed_mps);
    m.variant = MobilityVariant::Vehicular;
    return m;
}

MobilityModel MobilityModel::rotation(const Pose& start, double omega_dps) {
    MobilityModel m;
    m.variant = MobilityVariant::Rotation;
    m.start = start;
    m.omega_dps = omega_dps;
    return m;
}

Pose pose_at(const MobilityModel& model, double t_s) {
    if (t_s < 0.0)
        throw std::domain_error("pose_at: time must be non-negative");
    if (model.speed_mps < 0.0)
        throw std::domain_error("pose_at: speed must be non-negative");

    Pose p = model.start;
    switch (model.variant) {
    case MobilityVariant::Static:
        break;
    case MobilityVariant::Walk:
    case MobilityVariant::Vehicular: {
        double rad = model.direction_deg * M_PI / 180.0;
        p.x_m += model.speed_mps * t_s * std::cos(rad);
        p.y_m += model.speed_mps * t_s * std::sin(rad);
        break;
    }
    case MobilityVariant::Rotation:
        p.heading_deg = wrap_deg(model.start.heading_deg + model.omega_dps * t_s);
        break;
    }
    return p;
}

const char* to_string(MobilityVariant v) {
    switch (v) {
    case MobilityVariant::Static: return "static";
    case MobilityVariant::Walk: return "walk";
    case MobilityVariant::Rotation: return "rotation";
    case MobilityVariant::Vehicular: return "vehicular";
    }
    return "unknown";
}

MobilityVariant mobility_variant_from_string(const std::string& name) {
    if (name == "static") return MobilityVariant::Static;
    if (name == "walk") return MobilityVariant::Walk;
    if (name == "rotation") return MobilityVariant::Rotation;
    if (name == "vehicular") return MobilityVariant::Vehicular;
    throw std::domain_error("unknown mobility variant: " + name);
}

} // namespace silent_tracker
