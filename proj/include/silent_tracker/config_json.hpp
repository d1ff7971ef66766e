// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "silent_tracker/engine.hpp"

#include <string>

namespace silent_tracker {

/// Parses and validates a simulation config. Errors are ConfigError with the
/// offending field path.
SimConfig load_config(const std::string& path);
SimConfig parse_config(const std::string& json_text, const std::string& name = "config");

std::string config_to_json(const SimConfig& config);

} // namespace silent_tracker
