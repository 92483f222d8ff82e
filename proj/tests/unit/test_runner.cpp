#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "radlab/error.hpp"
#include "radlab/report_io.hpp"
#include "radlab/runner.hpp"
#include "radlab/scenario.hpp"

using namespace radlab;
using namespace radlab::runner;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("radlab_test_runner_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& text) {
    const auto path = dir / name;
    std::ofstream(path) << text;
    return path;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json pulse(const std::string& family, double V0) {
    json doc = {{"scenario_id", family}, {"p", 1.0}};
    if (family == "smooth_step")
        doc["potential"] = {{"family", family}, {"V0", V0}, {"L", 1.0}, {"z0", -20.0}};
    else
        doc["potential"] = {{"family", family}, {"V0", V0}, {"w", 1.0}, {"z0", -20.0}};
    return doc;
}

std::string error_of(const json& doc) {
    try {
        parse_scenario(doc);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE("load_config") {
    TEST_CASE("minimal config resolves every default") {
        const auto dir = scratch("minimal");
        const auto path = write(dir, "min.json", R"({"potential": {"family": "gaussian_bump", "V0": 0.002}, "p": 1})");
        const auto s = load_config(path);
        CHECK(s.id == "scenario");
        CHECK(s.params.m == 1.0);
        CHECK(s.params.alpha == doctest::Approx(1 / 137.036));
        CHECK(s.tasks == all_tasks());
        CHECK(s.tolerances == default_tolerances());
        CHECK(s.grids.samples_per_scale == 64);
        CHECK(s.packet.sigma_p == 0.05);
        const auto e = echo(s);
        CHECK(e["potential"]["w"] == 1.0);
        CHECK(e["potential"]["z0"] == 0.0);
        CHECK(e["grids"]["accel_mode"] == "exact");
        CHECK(e["tolerances"]["parseval"] == 1e-8);
    }

    TEST_CASE("echo round-trips") {
        auto doc = pulse("smooth_step", 0.002);
        doc["tolerances"] = {{"parseval", 1e-9}};
        doc["tasks"] = {"spectral", "shifts"};
        const auto s = parse_scenario(doc);
        CHECK(echo(parse_scenario(echo(s))) == echo(s));
        // dependency order regardless of listing order
        REQUIRE(s.tasks.size() == 2);
        CHECK(s.tasks[0] == Task::shifts);
        CHECK(s.tasks[1] == Task::spectral);
    }

    TEST_CASE("tabulated file resolves against the config directory and echoes its knots") {
        const auto dir = scratch("tab");
        fs::create_directories(dir / "data");
        std::string knots;
        for (int i = 0; i <= 40; ++i) {
            const double z = -30 + 0.5 * i;
            knots += std::to_string(z) + " " + std::to_string(0.001 * std::exp(-(z + 20) * (z + 20) / 2)) + "\n";
        }
        write(dir / "data", "v.dat", knots);
        const auto path = write(dir, "tab.json",
                                R"({"potential": {"family": "tabulated", "file": "data/v.dat"}, "p": 1})");
        const auto s = load_config(path);
        const auto e = echo(s);
        CHECK(e["potential"]["z"].size() == 41);
        CHECK(e["potential"]["source_file"] == "data/v.dat");
        CHECK(echo(parse_scenario(e)) == e);
    }

    TEST_CASE("turning-point momentum names kinetic dominance") {
        auto doc = pulse("gaussian_bump", 0.6);
        const auto msg = error_of(doc);
        CHECK(msg.find("kinetic dominance") != std::string::npos);
    }

    TEST_CASE("pathologies alone need no potential") {
        const auto s = parse_scenario(json{{"tasks", {"pathologies"}}});
        REQUIRE(s.tasks.size() == 1);
        CHECK(s.tasks[0] == Task::pathologies);
        CHECK_FALSE(s.potential.has_value());
        CHECK(error_of(json{{"tasks", {"shifts"}}}).find("potential") != std::string::npos);
    }

    TEST_CASE("parse errors carry line context, key errors carry the key path") {
        const auto dir = scratch("bad");
        const auto path = write(dir, "bad.json", "{\n  \"p\": 1,\n  \"potential\": {\n}}}\n");
        try {
            load_config(path);
            FAIL("expected a parse error");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("line 4") != std::string::npos);
        }
        auto doc = pulse("gaussian_bump", 0.002);
        doc["potential"]["VO"] = 1.0;
        CHECK(error_of(doc).find("potential.VO") != std::string::npos);
        doc = pulse("gaussian_bump", 0.002);
        doc["grids"] = {{"support_tol", "tiny"}};
        CHECK(error_of(doc).find("grids.support_tol") != std::string::npos);
        CHECK_THROWS_AS(load_config(dir / "missing.json"), IoError);
    }

    TEST_CASE("invariants: positive tolerances, non-empty tasks") {
        auto doc = pulse("gaussian_bump", 0.002);
        doc["tolerances"] = {{"parseval", 0.0}};
        CHECK(error_of(doc).find("parseval") != std::string::npos);
        doc = pulse("gaussian_bump", 0.002);
        doc["tasks"] = json::array();
        CHECK(error_of(doc).find("tasks") != std::string::npos);
        doc["tasks"] = {"everything"};
        CHECK(error_of(doc).find("everything") != std::string::npos);
        doc = pulse("gaussian_bump", 0.002);
        doc["tolerances"] = {{"made_up", 1.0}};
        CHECK(error_of(doc).find("tolerances.made_up") != std::string::npos);
    }

    TEST_CASE("dotted keys for sweeps") {
        auto doc = pulse("gaussian_bump", 0.002);
        set_dotted(doc, "potential.V0", "0.001");
        set_dotted(doc, "grids.accel_mode", "straight_line");
        set_dotted(doc, "sweeps.sigma_ratios", "[0.1,0.05]");
        const auto s = parse_scenario(doc);
        CHECK(std::get<potentials::GaussianBump>(s.potential->family).V0 == 0.001);
        CHECK(s.grids.accel_mode == potentials::AccelMode::straight_line);
        CHECK(s.sweeps.sigma_ratios.size() == 2);
    }
}

TEST_SUITE("run_scenario") {
    TEST_CASE("free particle: shifts and spectra vanish, every check passes") {
        auto doc = pulse("gaussian_bump", 0.0);
        doc["scenario_id"] = "free";
        const auto r = run_scenario(parse_scenario(doc));
        CHECK(r.all_checks_pass());
        CHECK(exit_code(r) == 0);
        for (const auto& t : r.tasks) CHECK_MESSAGE(t.ok, t.error_message);
        const auto j = r.to_json();
        CHECK(j["tasks"]["shifts"]["ode_diff"] == 0.0);
        CHECK(j["tasks"]["shifts"]["larmor"]["delta_z_final"] == 0.0);
        CHECK(j["tasks"]["spectral"]["photon_energy"]["freq_domain"] == 0.0);
        CHECK(j["tasks"]["quantum"]["shift"] == 0.0);
        for (const char* q : {"shift_ld", "shift_larmor", "spectrum"}) {
            const auto* s = r.find_series(q);
            REQUIRE(s);
            for (const auto& row : s->rows)
                for (std::size_t c = 1; c < row.size(); ++c) CHECK(row[c] == 0.0);
        }
    }

    TEST_CASE("smooth step: difference formulas and infrared flag") {
        auto doc = pulse("smooth_step", 0.002);
        doc["tasks"] = {"shifts", "spectral"};
        const auto r = run_scenario(parse_scenario(doc));
        CHECK(r.all_checks_pass());
        const auto j = r.to_json();
        for (const char* key : {"ode_diff", "log_formula", "lowest_order"}) CHECK(j["tasks"]["shifts"][key].is_number());
        CHECK(j["tasks"]["spectral"]["ir_divergent"] == true);
        REQUIRE(r.check("ir_log_law"));
        CHECK(r.check("ir_log_law")->pass);
    }

    TEST_CASE("a module error aborts only its task") {
        // pulse straddles t = 0: the Larmor shift at t = 0 is undefined for quantum
        auto doc = pulse("gaussian_bump", 0.002);
        doc["potential"]["z0"] = 0.0;
        doc["tasks"] = {"shifts", "spectral", "quantum"};
        const auto r = run_scenario(parse_scenario(doc));
        CHECK(r.outcome(Task::shifts)->ok);
        CHECK(r.outcome(Task::spectral)->ok);
        const auto* q = r.outcome(Task::quantum);
        REQUIRE(q);
        CHECK_FALSE(q->ok);
        CHECK(q->category == ErrorCategory::validation);
        CHECK(exit_code(r) == 2);
        CHECK(r.check("shift_equivalence")->skipped);
        const auto j = r.to_json();
        CHECK(j["tasks"]["quantum"]["status"] == "error");
        CHECK(j["tasks"]["quantum"]["error"]["type"] == "DomainError");
    }

    TEST_CASE("a failing check gives exit code 1") {
        auto doc = json{{"tasks", {"pathologies"}}, {"tolerances", {{"tau0_factor", 1.5}}}};
        const auto r = run_scenario(parse_scenario(doc));
        CHECK_FALSE(r.check("tau0_magnitude")->pass);
        CHECK(exit_code(r) == 1);
    }
}

TEST_SUITE("emit_report") {
    TEST_CASE("report with no series writes JSON only") {
        const auto dir = scratch("noseries");
        Report r;
        r.scenario_id = "empty";
        const auto files = emit_report(r, dir);
        REQUIRE(files.size() == 1);
        CHECK(files[0] == dir / "empty" / "report.json");
        CHECK(json::parse(slurp(files[0]))["summary"]["all_pass"] == true);
    }

    TEST_CASE("shift CSVs: header and round-trip digits") {
        const auto dir = scratch("csv");
        auto doc = pulse("gaussian_bump", 0.002);
        doc["scenario_id"] = "bump";
        doc["tasks"] = {"shifts"};
        const auto r = run_scenario(parse_scenario(doc));
        emit_report(r, dir);
        for (const char* q : {"shift_ld", "shift_larmor"}) {
            std::ifstream in(dir / "bump" / (std::string(q) + ".csv"));
            std::string header, row;
            std::getline(in, header);
            CHECK(header == "# " + std::string(q) + ", bump, t, delta_z, delta_v");
            const auto* s = r.find_series(q);
            for (std::size_t i = 0; std::getline(in, row); ++i) {
                std::stringstream ss(row);
                std::string cell;
                for (std::size_t c = 0; std::getline(ss, cell, ','); ++c) CHECK(std::stod(cell) == s->rows[i][c]);
            }
        }
        CHECK_THROWS_AS(parse_formats("json,xml"), ValidationError);
        const auto f = parse_formats("csv");
        CHECK_FALSE(f.json);
        CHECK(f.csv);
    }

    TEST_CASE("repeated runs are byte-identical") {
        auto doc = pulse("smooth_step", 0.002);
        doc["scenario_id"] = "again";
        doc["tasks"] = {"pathologies", "shifts", "spectral"};
        const auto s = parse_scenario(doc);
        const auto a = scratch("det_a"), b = scratch("det_b");
        const auto fa = emit_report(run_scenario(s), a);
        const auto fb = emit_report(run_scenario(s), b);
        REQUIRE(fa.size() == fb.size());
        for (std::size_t i = 0; i < fa.size(); ++i) CHECK(slurp(fa[i]) == slurp(fb[i]));
    }

    TEST_CASE("unwritable output directory names the path") {
        const auto dir = scratch("io");
        write(dir, "blocker", "not a directory");
        Report r;
        r.scenario_id = "x";
        try {
            emit_report(r, dir / "blocker");
            FAIL("expected an I/O error");
        } catch (const IoError& e) {
            CHECK(std::string(e.what()).find("blocker") != std::string::npos);
        }
    }
}
