// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "silent_tracker/engine.hpp"

#include <iosfwd>
#include <string>

namespace silent_tracker {

enum class ReportFormat { Json, Csv };
ReportFormat report_format_from_string(const std::string& name);

/// Canonical serializations: keys in a fixed documented order and reals with
/// three decimal places, so equal reports are byte-identical files.
std::string to_json(const TrialReport& report);
std::string to_json(const SweepReport& report);
std::string to_csv(const TrialReport& report);
std::string to_csv(const SweepReport& report); // one row per (scenario, codebook)

void write_report(const TrialReport& report, ReportFormat format, const std::string& path);
void write_report(const SweepReport& report, ReportFormat format, const std::string& path);

/// Reads back a canonical trial-report JSON (scalar fields; traces live in
/// their own CSV files).
TrialReport read_trial_report_json(const std::string& path);

} // namespace silent_tracker
