// radlab command-line driver: run, check and sweep scenarios.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "radlab/error.hpp"
#include "radlab/report_io.hpp"
#include "radlab/runner.hpp"
#include "radlab/scenario.hpp"

namespace rr = radlab::runner;
using nlohmann::json;

namespace {

constexpr int kValidation = 2, kNumerical = 3, kIo = 4;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

rr::Scenario load(const std::string& config, const std::string& tasks, json* doc_out = nullptr) {
    json doc = rr::read_config(config);
    if (!tasks.empty()) {
        doc["tasks"] = json::array();
        for (const auto& t : split(tasks, ',')) doc["tasks"].push_back(t);
    }
    if (doc_out) *doc_out = doc;
    try {
        return rr::parse_scenario(doc, std::filesystem::path(config).parent_path());
    } catch (const radlab::IoError&) {
        throw;
    } catch (const radlab::ValidationError& e) {
        throw radlab::ValidationError(config + ": " + e.what());
    }
}

void summarize(const rr::Report& report, std::ostream& os) {
    for (const auto& t : report.tasks) {
        os << "  " << rr::to_string(t.task) << ": " << (t.ok ? "ok" : "error");
        if (!t.ok) os << " (" << t.error_type << ": " << t.error_message << ")";
        os << '\n';
    }
    for (const auto& c : report.checks) {
        char line[256];
        std::snprintf(line, sizeof line, "  %-4s %-28s value=%.3e threshold=%.1e", c.skipped ? "SKIP" : c.pass ? "ok" : "FAIL",
                      c.name.c_str(), c.value, c.threshold);
        os << line << '\n';
    }
}

int run_one(const rr::Scenario& s, const std::string& out, const rr::Formats& formats, bool timing) {
    rr::RunOptions opts;
    opts.timing = timing;
    const auto report = rr::run_scenario(s, opts);
    const auto files = rr::emit_report(report, out, formats);
    std::cout << s.id << ": wrote " << files.size() << " file(s) under " << (std::filesystem::path(out) / s.id).string()
              << '\n';
    summarize(report, std::cout);
    return rr::exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"radlab: radiation-reaction position shifts, classical and semiclassical"};
    app.require_subcommand(1);

    std::string config, out = ".", formats = "json,csv", tasks, vary;
    bool seedless = false, timing = false;

    auto* run = app.add_subcommand("run", "run a scenario and write its report");
    run->add_option("--config", config, "scenario JSON file")->required();
    run->add_option("--out", out, "output directory")->required();
    run->add_option("--formats", formats, "comma-separated: json,csv");
    run->add_option("--tasks", tasks, "comma-separated task subset");
    run->add_flag("--seedless", seedless, "accepted for compatibility; runs are deterministic");
    run->add_flag("--timing", timing, "record wall time in the report (breaks byte-identity)");

    auto* check = app.add_subcommand("check", "validate a scenario without running it");
    check->add_option("--config", config, "scenario JSON file")->required();

    auto* sweep = app.add_subcommand("sweep", "run a scenario once per value of one key");
    sweep->add_option("--config", config, "scenario JSON file")->required();
    sweep->add_option("--vary", vary, "dotted.key=v1,v2,...")->required();
    sweep->add_option("--out", out, "output directory");
    sweep->add_option("--formats", formats, "comma-separated: json,csv");
    sweep->add_option("--tasks", tasks, "comma-separated task subset");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) {
            const auto s = load(config, "");
            std::cout << rr::echo(s).dump(2) << '\n';
            return 0;
        }
        const auto fmt = rr::parse_formats(formats);
        if (*run) return run_one(load(config, tasks), out, fmt, timing);

        const auto eq = vary.find('=');
        if (eq == std::string::npos || eq == 0) throw radlab::ValidationError("--vary expects key=v1,v2,...");
        const std::string key = vary.substr(0, eq);
        const auto values = split(vary.substr(eq + 1), ',');
        if (values.empty()) throw radlab::ValidationError("--vary lists no values");
        json base;
        const auto first = load(config, tasks, &base);
        int code = 0;
        for (const auto& v : values) {
            json doc = base;
            rr::set_dotted(doc, key, v);
            doc["scenario_id"] = first.id + "_" + key + "_" + v;
            const auto s = rr::parse_scenario(doc, std::filesystem::path(config).parent_path());
            code = std::max(code, run_one(s, out, fmt, false));
        }
        return code;
    } catch (const radlab::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const radlab::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const radlab::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    }
}
