#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "radlab/runner.hpp"

namespace radlab::runner {

struct Formats {
    bool json = true;
    bool csv = true;
};

/// Parses a comma-separated list of "json" and "csv".
Formats parse_formats(const std::string& list);

/// Writes <out_dir>/<scenario_id>/report.json and one <quantity>.csv per series.
/// CSV files start with "# quantity, scenario_id, columns..." and hold %.17g numbers.
/// Returns the written paths in write order; IoError names the failing path.
std::vector<std::filesystem::path> emit_report(const Report& report, const std::filesystem::path& out_dir,
                                               const Formats& formats = {});

std::string format_csv(const Series& series, const std::string& scenario_id);

}  // namespace radlab::runner
