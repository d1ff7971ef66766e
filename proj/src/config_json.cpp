// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/config_json.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace silent_tracker {

namespace {

using nlohmann::json;

double num(const json& j, const std::string& path, const char* key, double fallback,
           bool required = false) {
    if (!j.contains(key)) {
        if (required)
            throw ConfigError(path + "." + key, "missing required field");
        return fallback;
    }
    if (!j[key].is_number())
        throw ConfigError(path + "." + key, "must be a number");
    return j[key].get<double>();
}

int integer(const json& j, const std::string& path, const char* key, int fallback) {
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_number_integer())
        throw ConfigError(path + "." + key, "must be an integer");
    return j[key].get<int>();
}

CodebookSpec parse_codebook(const json& j, const std::string& path) {
    if (!j.is_object())
        throw ConfigError(path, "must be an object");
    CodebookSpec spec;
    if (j.contains("omni") && j["omni"].is_boolean() && j["omni"].get<bool>()) {
        spec.omni = true;
        return spec;
    }
    spec.beamwidth_deg = num(j, path, "beamwidth_deg", 20.0, true);
    return spec;
}

MobilityModel parse_mobility(const json& j, const std::string& path) {
    if (!j.is_object())
        throw ConfigError(path, "must be an object");
    if (!j.contains("scenario") || !j["scenario"].is_string())
        throw ConfigError(path + ".scenario", "missing or not a string");
    std::string scenario = j["scenario"].get<std::string>();

    MobilityVariant variant;
    try {
        variant = mobility_variant_from_string(scenario);
    } catch (const std::exception& e) {
        throw ConfigError(path + ".scenario", e.what());
    }

    Pose start = make_pose(num(j, path, "x", 0.0), num(j, path, "y", 0.0),
                           num(j, path, "heading_deg", 0.0));
    switch (variant) {
    case MobilityVariant::Static:
        return MobilityModel::static_at(start);
    case MobilityVariant::Walk:
        return MobilityModel::walk(start, num(j, path, "direction_deg", 0.0),
                                   num(j, path, "speed_mps", kWalkSpeedMps));
    case MobilityVariant::Vehicular:
        return MobilityModel::vehicular(start, num(j, path, "direction_deg", 0.0),
                                        num(j, path, "speed_mps", kVehicularSpeedMps));
    case MobilityVariant::Rotation:
        return MobilityModel::rotation(start, num(j, path, "omega_dps", kRotationRateDps));
    }
    throw ConfigError(path + ".scenario", "unknown scenario");
}

} // namespace

SimConfig parse_config(const std::string& json_text, const std::string& name) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(name, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError(name, "top level must be an object");

    SimConfig cfg;

    if (!j.contains("cells") || !j["cells"].is_array() || j["cells"].empty())
        throw ConfigError("cells", "must be a non-empty array");
    cfg.cells.clear();
    for (size_t i = 0; i < j["cells"].size(); ++i) {
        const json& cj = j["cells"][i];
        std::string path = "cells[" + std::to_string(i) + "]";
        if (!cj.is_object())
            throw ConfigError(path, "must be an object");
        CellConfig cell;
        cell.id = integer(cj, path, "id", static_cast<int>(i));
        cell.pose = make_pose(num(cj, path, "x", 0.0, true), num(cj, path, "y", 0.0, true),
                              num(cj, path, "heading_deg", 0.0));
        if (cj.contains("codebook"))
            cell.codebook = parse_codebook(cj["codebook"], path + ".codebook");
        cell.ssb_period_s = num(cj, path, "ssb_period_s", 0.02);
        cell.ssb_phase_s = num(cj, path, "ssb_phase_s", 0.0);
        cfg.cells.push_back(cell);
    }

    if (!j.contains("mobile") || !j["mobile"].is_object())
        throw ConfigError("mobile", "must be an object");
    const json& mj = j["mobile"];
    if (mj.contains("codebook"))
        cfg.mobile.codebook = parse_codebook(mj["codebook"], "mobile.codebook");
    if (!mj.contains("mobility"))
        throw ConfigError("mobile.mobility", "missing required field");
    cfg.mobile.mobility = parse_mobility(mj["mobility"], "mobile.mobility");
    if (mj.contains("channel")) {
        const json& ch = mj["channel"];
        std::string path = "mobile.channel";
        cfg.mobile.channel.carrier_freq_hz = num(ch, path, "carrier_freq_hz", 60e9);
        cfg.mobile.channel.tx_power_dbm = num(ch, path, "tx_power_dbm", 10.0);
        cfg.mobile.channel.noise_floor_dbm = num(ch, path, "noise_floor_dbm", -94.0);
        cfg.mobile.channel.sensitivity_dbm = num(ch, path, "sensitivity_dbm", -54.0);
        cfg.mobile.channel.shadowing_sigma_db = num(ch, path, "shadowing_sigma_db", 0.0);
    }
    if (mj.contains("initial_serving_cell")) {
        if (mj["initial_serving_cell"].is_null())
            cfg.mobile.initial_serving_cell.reset();
        else if (mj["initial_serving_cell"].is_number_integer())
            cfg.mobile.initial_serving_cell = mj["initial_serving_cell"].get<int>();
        else
            throw ConfigError("mobile.initial_serving_cell", "must be an integer or null");
    }

    if (j.contains("schedule")) {
        const json& sj = j["schedule"];
        std::string path = "schedule";
        cfg.schedule.meas_period_s = num(sj, path, "meas_period_s", 0.02);
        if (sj.contains("serving_to_neighbor_ratio")) {
            const json& rj = sj["serving_to_neighbor_ratio"];
            if (!rj.is_array() || rj.size() != 2 || !rj[0].is_number_integer() ||
                !rj[1].is_number_integer())
                throw ConfigError(path + ".serving_to_neighbor_ratio",
                                  "must be a pair of integers, e.g. [3, 1]");
            cfg.schedule.serving_slots = rj[0].get<int>();
            cfg.schedule.neighbor_slots = rj[1].get<int>();
        }
    }

    if (j.contains("protocol")) {
        const json& pj = j["protocol"];
        std::string path = "protocol";
        cfg.protocol.sensitivity_dbm = cfg.mobile.channel.sensitivity_dbm;
        cfg.protocol.edge_threshold_dbm =
            num(pj, path, "edge_threshold_dbm", cfg.mobile.channel.sensitivity_dbm + 10.0);
        cfg.protocol.drop_db = num(pj, path, "drop_db", 3.0);
        cfg.protocol.k_failure = integer(pj, path, "k_failure", 3);
        cfg.protocol.m_nack = integer(pj, path, "m_nack", 3);
        cfg.protocol.r_max = integer(pj, path, "r_max", 4);
        cfg.protocol.ra_retry_period_ms = static_cast<std::int64_t>(
            std::llround(num(pj, path, "ra_retry_period_s", 0.01) * 1000.0));
        cfg.protocol.ewma_alpha = num(pj, path, "ewma_alpha", 0.0);
        cfg.rach_threshold_dbm =
            num(pj, path, "rach_threshold_dbm", cfg.mobile.channel.sensitivity_dbm + 3.0);
    } else {
        cfg.protocol.sensitivity_dbm = cfg.mobile.channel.sensitivity_dbm;
        cfg.protocol.edge_threshold_dbm = cfg.mobile.channel.sensitivity_dbm + 10.0;
        cfg.rach_threshold_dbm = cfg.mobile.channel.sensitivity_dbm + 3.0;
    }

    cfg.overlap_radius_m = num(j, "config", "overlap_radius_m", 11.5);
    cfg.duration_s = num(j, "config", "duration_s", 10.0, true);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            throw ConfigError("seed", "must be an integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }

    cfg.validate();
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path, "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string config_to_json(const SimConfig& cfg) {
    json j;
    j["cells"] = json::array();
    for (const CellConfig& c : cfg.cells) {
        json cj;
        cj["id"] = c.id;
        cj["x"] = c.pose.x_m;
        cj["y"] = c.pose.y_m;
        cj["heading_deg"] = c.pose.heading_deg;
        if (c.codebook.omni)
            cj["codebook"] = {{"omni", true}};
        else
            cj["codebook"] = {{"beamwidth_deg", c.codebook.beamwidth_deg}};
        cj["ssb_period_s"] = c.ssb_period_s;
        cj["ssb_phase_s"] = c.ssb_phase_s;
        j["cells"].push_back(cj);
    }

    json mob;
    mob["scenario"] = to_string(cfg.mobile.mobility.variant);
    mob["x"] = cfg.mobile.mobility.start.x_m;
    mob["y"] = cfg.mobile.mobility.start.y_m;
    mob["heading_deg"] = cfg.mobile.mobility.start.heading_deg;
    mob["speed_mps"] = cfg.mobile.mobility.speed_mps;
    mob["omega_dps"] = cfg.mobile.mobility.omega_dps;
    mob["direction_deg"] = cfg.mobile.mobility.direction_deg;

    json mobile;
    if (cfg.mobile.codebook.omni)
        mobile["codebook"] = {{"omni", true}};
    else
        mobile["codebook"] = {{"beamwidth_deg", cfg.mobile.codebook.beamwidth_deg}};
    mobile["mobility"] = mob;
    mobile["channel"] = {{"carrier_freq_hz", cfg.mobile.channel.carrier_freq_hz},
                         {"tx_power_dbm", cfg.mobile.channel.tx_power_dbm},
                         {"noise_floor_dbm", cfg.mobile.channel.noise_floor_dbm},
                         {"sensitivity_dbm", cfg.mobile.channel.sensitivity_dbm},
                         {"shadowing_sigma_db", cfg.mobile.channel.shadowing_sigma_db}};
    if (cfg.mobile.initial_serving_cell)
        mobile["initial_serving_cell"] = *cfg.mobile.initial_serving_cell;
    else
        mobile["initial_serving_cell"] = nullptr;
    j["mobile"] = mobile;

    j["schedule"] = {{"meas_period_s", cfg.schedule.meas_period_s},
                     {"serving_to_neighbor_ratio",
                      json::array({cfg.schedule.serving_slots, cfg.schedule.neighbor_slots})}};
    j["protocol"] = {{"edge_threshold_dbm", cfg.protocol.edge_threshold_dbm},
                     {"drop_db", cfg.protocol.drop_db},
                     {"k_failure", cfg.protocol.k_failure},
                     {"m_nack", cfg.protocol.m_nack},
                     {"r_max", cfg.protocol.r_max},
                     {"ra_retry_period_s",
                      static_cast<double>(cfg.protocol.ra_retry_period_ms) / 1000.0},
                     {"rach_threshold_dbm", cfg.rach_threshold_dbm},
                     {"ewma_alpha", cfg.protocol.ewma_alpha}};
    j["overlap_radius_m"] = cfg.overlap_radius_m;
    j["duration_s"] = cfg.duration_s;
    j["seed"] = cfg.seed;
    return j.dump(2) + "\n";
}

} // namespace silent_tracker
