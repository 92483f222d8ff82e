#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "radlab/scenario.hpp"

namespace radlab::runner {

/// A built-in identity check. Skipped checks carry the reason in detail and count as passing.
struct Check {
    std::string name;
    Task task = Task::shifts;
    double value = 0;
    double threshold = 0;
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

/// A sampled quantity written as one CSV file.
struct Series {
    std::string quantity;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

enum class ErrorCategory { none, validation, numerical, io, other };

struct TaskOutcome {
    Task task = Task::shifts;
    bool ok = true;
    ErrorCategory category = ErrorCategory::none;
    std::string error_type;
    std::string error_message;
    nlohmann::json results = nlohmann::json::object();
};

struct Report {
    std::string scenario_id;
    nlohmann::json scenario;
    std::vector<TaskOutcome> tasks;
    std::vector<Check> checks;
    std::vector<Series> series;
    nlohmann::json provenance = nlohmann::json::object();
    /// Only filled on request; excluded by default so reports stay byte-identical.
    std::optional<double> wall_seconds;

    bool all_checks_pass() const;
    const TaskOutcome* outcome(Task task) const;
    const Check* check(const std::string& name) const;
    const Series* find_series(const std::string& quantity) const;
    nlohmann::json to_json() const;
};

/// 0 all checks pass, 1 a check failed, 2 validation, 3 numerical, 4 I/O.
int exit_code(const Report& report);

struct RunOptions {
    bool timing = false;
};

/// Runs the scenario's tasks in order. A module error aborts only the owning task.
Report run_scenario(const Scenario& s, const RunOptions& opts = {});

}  // namespace radlab::runner
