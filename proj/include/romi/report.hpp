#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "romi/config.hpp"
#include "romi/simengine.hpp"

namespace romi {

// Tables in the layout of the simulation-study summaries: one table per
// scenario, designs as rows, per-indication selection columns, CSP, N.
// Percentages carry one decimal place.
std::string report_markdown(const std::vector<OperatingCharacteristics>& rows);

// Machine-readable long format, one line per (scenario, design, indication),
// full double precision; parse_report_csv() round-trips exactly.
std::string report_csv(const std::vector<OperatingCharacteristics>& rows);
std::vector<OperatingCharacteristics> parse_report_csv(const std::string& text);

// Everything needed to reproduce the run: version, seed, canonical config and
// its hash, and the emitted files.
std::string run_manifest(const RunConfig& rc, const std::vector<std::string>& outputs,
                         std::string_view version);

}  // namespace romi
