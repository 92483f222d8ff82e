#include "radlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "radlab/error.hpp"

namespace radlab::runner {

using nlohmann::json;

namespace {

constexpr std::pair<Task, const char*> kTaskNames[] = {
    {Task::pathologies, "pathologies"}, {Task::shifts, "shifts"},
    {Task::spectral, "spectral"},       {Task::quantum, "quantum"},
    {Task::convergence_sweeps, "convergence_sweeps"},
};

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const char* type_name(const json& j) { return j.type_name(); }

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object())
        throw ValidationError(path + ": expected an object, got " + type_name(j));
}

void expect_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ValidationError("unknown key '" + join(path, key) + "'");
    }
}

double number(const json& obj, const char* key, const std::string& path, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ValidationError(join(path, key) + ": expected a number, got " + type_name(v));
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError(join(path, key) + ": must be finite");
    return x;
}

std::size_t count(const json& obj, const char* key, const std::string& path, std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw ValidationError(join(path, key) + ": expected a positive integer");
    return v.get<std::size_t>();
}

std::string text(const json& obj, const char* key, const std::string& path, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string()) throw ValidationError(join(path, key) + ": expected a string, got " + type_name(v));
    return v.get<std::string>();
}

std::vector<double> numbers(const json& obj, const char* key, const std::string& path,
                            std::vector<double> fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_array()) throw ValidationError(join(path, key) + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
            throw ValidationError(join(path, key) + "[" + std::to_string(i) + "]: expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

potentials::AccelMode accel_mode(const json& obj, const char* key, const std::string& path,
                                 potentials::AccelMode fallback) {
    const std::string name = text(obj, key, path, potentials::to_string(fallback));
    for (auto mode : {potentials::AccelMode::exact, potentials::AccelMode::straight_line})
        if (name == potentials::to_string(mode)) return mode;
    throw ValidationError(join(path, key) + ": expected \"exact\" or \"straight_line\", got \"" + name + "\"");
}

const json& section(const json& doc, const char* key) {
    static const json empty = json::object();
    if (!doc.contains(key)) return empty;
    expect_object(doc.at(key), key);
    return doc.at(key);
}

PotentialConfig parse_potential(const json& j, const std::filesystem::path& base_dir) {
    const std::string path = "potential";
    expect_object(j, path);
    const std::string family = text(j, "family", path, "");
    PotentialConfig cfg;
    if (family == "smooth_step") {
        expect_keys(j, path, {"family", "V0", "L", "z0"});
        potentials::SmoothStep s;
        s.V0 = number(j, "V0", path, s.V0);
        s.L = number(j, "L", path, s.L);
        s.z0 = number(j, "z0", path, s.z0);
        cfg.family = s;
    } else if (family == "gaussian_bump") {
        expect_keys(j, path, {"family", "V0", "w", "z0"});
        potentials::GaussianBump b;
        b.V0 = number(j, "V0", path, b.V0);
        b.w = number(j, "w", path, b.w);
        b.z0 = number(j, "z0", path, b.z0);
        cfg.family = b;
    } else if (family == "tabulated") {
        expect_keys(j, path, {"family", "file", "z", "V", "extrapolation", "source_file"});
        const std::string ext = text(j, "extrapolation", path, "constant");
        potentials::Extrapolation e;
        if (ext == "constant")
            e = potentials::Extrapolation::constant;
        else if (ext == "none")
            e = potentials::Extrapolation::none;
        else
            throw ValidationError("potential.extrapolation: expected \"constant\" or \"none\", got \"" + ext + "\"");
        if (j.contains("file")) {
            if (j.contains("z") || j.contains("V"))
                throw ValidationError("potential: give either 'file' or inline 'z'/'V', not both");
            cfg.file = text(j, "file", path, "");
            std::filesystem::path file = cfg.file;
            if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
            cfg.family = potentials::load_tabulated_potential(file, e);
        } else {
            potentials::Tabulated t;
            t.z = numbers(j, "z", path, {});
            t.V = numbers(j, "V", path, {});
            t.extrapolation = e;
            cfg.file = text(j, "source_file", path, "");
            if (t.z.size() != t.V.size()) throw ValidationError("potential: 'z' and 'V' differ in length");
            cfg.family = std::move(t);
        }
    } else {
        throw ValidationError("potential.family: expected \"smooth_step\", \"gaussian_bump\" or \"tabulated\", got \"" +
                              family + "\"");
    }
    return cfg;
}

json potential_echo(const PotentialConfig& cfg) {
    return std::visit(
        [&](const auto& f) -> json {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, potentials::SmoothStep>) {
                return {{"family", "smooth_step"}, {"V0", f.V0}, {"L", f.L}, {"z0", f.z0}};
            } else if constexpr (std::is_same_v<T, potentials::GaussianBump>) {
                return {{"family", "gaussian_bump"}, {"V0", f.V0}, {"w", f.w}, {"z0", f.z0}};
            } else {
                json j = {{"family", "tabulated"},
                          {"extrapolation", f.extrapolation == potentials::Extrapolation::none ? "none" : "constant"}};
                // knots inline so the echo alone reproduces the run
                j["z"] = f.z;
                j["V"] = f.V;
                if (!cfg.file.empty()) j["source_file"] = cfg.file;
                return j;
            }
        },
        cfg.family);
}

json value_from_text(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    if (!s.empty() && (s.front() == '[' || s.front() == '{')) {
        try {
            return json::parse(s);
        } catch (const json::parse_error&) {
        }
    }
    std::istringstream in(s);
    double x;
    if (in >> x && in.eof()) return x;
    return s;
}

}  // namespace

const char* to_string(Task task) {
    for (const auto& [t, name] : kTaskNames)
        if (t == task) return name;
    return "unknown";
}

std::optional<Task> task_from_string(const std::string& name) {
    for (const auto& [t, n] : kTaskNames)
        if (name == n) return t;
    return std::nullopt;
}

const std::vector<Task>& all_tasks() {
    static const std::vector<Task> tasks{Task::pathologies, Task::shifts, Task::spectral, Task::quantum,
                                         Task::convergence_sweeps};
    return tasks;
}

bool needs_potential(Task task) { return task != Task::pathologies; }

const Tolerances& default_tolerances() {
    static const Tolerances tol{
        // solver accuracy
        {"ode_rel_tol", 1e-11},
        {"kernel_tol", 1e-13},
        // built-in check thresholds (relative unless noted)
        {"runaway_rate", 1e-6},
        {"runaway_ode", 1e-6},
        {"preacceleration", 1e-8},
        {"preacceleration_slope", 1e-6},
        {"box_impulse", 1e-8},
        {"tau0_factor", 10.0},
        {"same_final_velocity", 1e-8},
        {"energy_accumulation", 1e-9},
        {"difference_formula", 1e-3},
        {"shift_equivalence", 1e-7},
        {"shift_imag", 1e-10},
        {"parseval", 1e-8},
        {"ir_log_law", 1e-2},
        {"ir_stability", 1e-6},
        {"probability_crosscheck", 1e-10},
        {"amplitude_classical", 1e-6},
        {"scaling_identity", 1e-6},
        {"amplitude_scaling", 1e-3},
        {"contraction", 0.05},
    };
    return tol;
}

double Scenario::tol(const std::string& name) const {
    auto it = tolerances.find(name);
    if (it == tolerances.end()) throw ValidationError("no tolerance named '" + name + "'");
    return it->second;
}

potentials::PotentialSpec Scenario::potential_spec() const {
    if (!potential) throw ValidationError("scenario has no potential");
    return potentials::PotentialSpec(potential->family, grids.support_tol);
}

potentials::SamplingPolicy Scenario::policy() const {
    potentials::SamplingPolicy p;
    p.samples_per_scale = grids.samples_per_scale;
    p.support_tol = grids.support_tol;
    p.kinetic_dominance = grids.kinetic_dominance;
    return p;
}

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
    expect_object(doc, "scenario");
    expect_keys(doc, "", {"scenario_id", "params", "potential", "p", "p_bar", "packet", "grids", "tolerances", "tasks",
                          "pathologies", "sweeps"});
    Scenario s;
    s.id = text(doc, "scenario_id", "", s.id);

    const auto& params = section(doc, "params");
    expect_keys(params, "params", {"m", "alpha", "hbar_eff"});
    s.params.m = number(params, "m", "params", s.params.m);
    s.params.alpha = number(params, "alpha", "params", s.params.alpha);
    s.params.hbar_eff = number(params, "hbar_eff", "params", s.params.hbar_eff);

    if (doc.contains("potential")) s.potential = parse_potential(doc.at("potential"), base_dir);
    if (doc.contains("p") && doc.contains("p_bar")) throw ValidationError("give either 'p' or 'p_bar', not both");
    if (doc.contains("p")) s.momentum = number(doc, "p", "", 0);
    if (doc.contains("p_bar")) s.momentum = number(doc, "p_bar", "", 0);

    const auto& packet = section(doc, "packet");
    expect_keys(packet, "packet", {"sigma_p", "z_c", "panels"});
    s.packet.sigma_p = number(packet, "sigma_p", "packet", s.packet.sigma_p);
    s.packet.z_c = number(packet, "z_c", "packet", s.packet.z_c);
    s.packet.panels = static_cast<unsigned>(count(packet, "panels", "packet", s.packet.panels));

    const auto& grids = section(doc, "grids");
    expect_keys(grids, "grids", {"samples_per_scale", "support_tol", "kinetic_dominance", "accel_mode", "quantum_mode",
                                 "k_min_fraction", "truncation_tol", "linear_panel_fraction", "phase_samples",
                                 "amplitude_samples_per_scale", "amplitude_support_tol", "ir_cutoff"});
    auto& g = s.grids;
    g.samples_per_scale = count(grids, "samples_per_scale", "grids", g.samples_per_scale);
    g.support_tol = number(grids, "support_tol", "grids", g.support_tol);
    g.kinetic_dominance = number(grids, "kinetic_dominance", "grids", g.kinetic_dominance);
    g.accel_mode = accel_mode(grids, "accel_mode", "grids", g.accel_mode);
    g.quantum_mode = accel_mode(grids, "quantum_mode", "grids", g.quantum_mode);
    g.kgrid.k_min_fraction = number(grids, "k_min_fraction", "grids", g.kgrid.k_min_fraction);
    g.kgrid.truncation_tol = number(grids, "truncation_tol", "grids", g.kgrid.truncation_tol);
    g.kgrid.linear_panel_fraction = number(grids, "linear_panel_fraction", "grids", g.kgrid.linear_panel_fraction);
    g.amplitude.phase_samples = number(grids, "phase_samples", "grids", g.amplitude.phase_samples);
    g.amplitude.samples_per_scale =
        number(grids, "amplitude_samples_per_scale", "grids", g.amplitude.samples_per_scale);
    g.amplitude.support_tol = number(grids, "amplitude_support_tol", "grids", g.amplitude.support_tol);
    g.ir_cutoff = number(grids, "ir_cutoff", "grids", g.ir_cutoff);

    const auto& tol = section(doc, "tolerances");
    for (const auto& [key, v] : tol.items()) {
        if (!s.tolerances.count(key)) throw ValidationError("unknown key 'tolerances." + key + "'");
        s.tolerances[key] = number(tol, key.c_str(), "tolerances", 0);
    }

    if (doc.contains("tasks")) {
        const auto& t = doc.at("tasks");
        if (!t.is_array()) throw ValidationError("tasks: expected an array of task names");
        std::vector<Task> requested;
        for (const auto& name : t) {
            if (!name.is_string()) throw ValidationError("tasks: expected task names as strings");
            auto task = task_from_string(name.get<std::string>());
            if (!task) throw ValidationError("tasks: unknown task \"" + name.get<std::string>() + "\"");
            requested.push_back(*task);
        }
        // dependency order, duplicates dropped
        s.tasks.clear();
        for (Task task : all_tasks())
            if (std::find(requested.begin(), requested.end(), task) != requested.end()) s.tasks.push_back(task);
    }

    const auto& path = section(doc, "pathologies");
    expect_keys(path, "pathologies", {"beta0", "force", "box_duration"});
    s.pathologies.beta0 = number(path, "beta0", "pathologies", s.pathologies.beta0);
    s.pathologies.force = number(path, "force", "pathologies", s.pathologies.force);
    s.pathologies.box_duration = number(path, "box_duration", "pathologies", s.pathologies.box_duration);

    const auto& sw = section(doc, "sweeps");
    expect_keys(sw, "sweeps", {"sigma_ratios", "hbar_k", "hbar_start", "hbar_halvings", "amplitude_factor"});
    s.sweeps.sigma_ratios = numbers(sw, "sigma_ratios", "sweeps", s.sweeps.sigma_ratios);
    s.sweeps.hbar_k = number(sw, "hbar_k", "sweeps", s.sweeps.hbar_k);
    s.sweeps.hbar_start = number(sw, "hbar_start", "sweeps", s.sweeps.hbar_start);
    s.sweeps.hbar_halvings = static_cast<unsigned>(count(sw, "hbar_halvings", "sweeps", s.sweeps.hbar_halvings));
    s.sweeps.amplitude_factor = number(sw, "amplitude_factor", "sweeps", s.sweeps.amplitude_factor);

    validate(s);
    return s;
}

void validate(const Scenario& s) {
    if (s.id.empty() || s.id.find_first_of("/\\") != std::string::npos || s.id == "." || s.id == "..")
        throw ValidationError("scenario_id must be a non-empty file-name-safe string");
    s.params.validate();
    if (s.tasks.empty()) throw ValidationError("tasks must not be empty");
    for (const auto& [name, value] : s.tolerances)
        if (!(value > 0)) throw ValidationError("tolerance '" + name + "' must be positive");
    auto positive = [](double x, const char* what) {
        if (!(x > 0)) throw ValidationError(std::string(what) + " must be positive");
    };
    positive(s.grids.support_tol, "grids.support_tol");
    positive(s.grids.kgrid.k_min_fraction, "grids.k_min_fraction");
    positive(s.grids.kgrid.truncation_tol, "grids.truncation_tol");
    positive(s.grids.kgrid.linear_panel_fraction, "grids.linear_panel_fraction");
    positive(s.grids.amplitude.phase_samples, "grids.phase_samples");
    positive(s.grids.amplitude.samples_per_scale, "grids.amplitude_samples_per_scale");
    positive(s.grids.amplitude.support_tol, "grids.amplitude_support_tol");
    positive(s.grids.ir_cutoff, "grids.ir_cutoff");
    if (!(s.grids.kinetic_dominance > 0 && s.grids.kinetic_dominance < 1))
        throw ValidationError("grids.kinetic_dominance must lie in (0, 1)");
    positive(s.packet.sigma_p, "packet.sigma_p");
    positive(s.pathologies.box_duration, "pathologies.box_duration");
    if (!(s.pathologies.beta0 != 0)) throw ValidationError("pathologies.beta0 must be nonzero");
    if (!(s.pathologies.force != 0)) throw ValidationError("pathologies.force must be nonzero");
    if (s.sweeps.sigma_ratios.empty()) throw ValidationError("sweeps.sigma_ratios must not be empty");
    for (double r : s.sweeps.sigma_ratios) positive(r, "sweeps.sigma_ratios entries");
    positive(s.sweeps.hbar_k, "sweeps.hbar_k");
    positive(s.sweeps.hbar_start, "sweeps.hbar_start");
    if (!(s.sweeps.amplitude_factor > 0 && s.sweeps.amplitude_factor != 1))
        throw ValidationError("sweeps.amplitude_factor must be positive and != 1");

    const bool potential_needed = std::any_of(s.tasks.begin(), s.tasks.end(), needs_potential);
    if (!potential_needed) return;
    if (!s.potential) throw ValidationError("missing key 'potential' (required by the requested tasks)");
    if (!s.momentum) throw ValidationError("missing key 'p' or 'p_bar' (required by the requested tasks)");
    if (!(*s.momentum > 0)) throw ValidationError("momentum must be positive (right-moving particle)");
    const auto spec = s.potential_spec();
    try {
        potentials::check_regime(spec, s.params, *s.momentum, s.grids.kinetic_dominance);
    } catch (const RegimeError& e) {
        throw ValidationError(std::string("momentum violates kinetic dominance: ") + e.what());
    }
}

json read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    try {
        return json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        // nlohmann reports "at line L, column C"
        throw ValidationError(path.string() + ": " + e.what());
    }
}

Scenario load_config(const std::filesystem::path& path) {
    const json doc = read_config(path);
    try {
        return parse_scenario(doc, path.parent_path());
    } catch (const IoError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

json echo(const Scenario& s) {
    json j;
    j["scenario_id"] = s.id;
    j["params"] = {{"m", s.params.m}, {"alpha", s.params.alpha}, {"hbar_eff", s.params.hbar_eff}};
    if (s.potential) j["potential"] = potential_echo(*s.potential);
    if (s.momentum) j["p"] = *s.momentum;
    j["packet"] = {{"sigma_p", s.packet.sigma_p}, {"z_c", s.packet.z_c}, {"panels", s.packet.panels}};
    const auto& g = s.grids;
    j["grids"] = {{"samples_per_scale", g.samples_per_scale},
                  {"support_tol", g.support_tol},
                  {"kinetic_dominance", g.kinetic_dominance},
                  {"accel_mode", potentials::to_string(g.accel_mode)},
                  {"quantum_mode", potentials::to_string(g.quantum_mode)},
                  {"k_min_fraction", g.kgrid.k_min_fraction},
                  {"truncation_tol", g.kgrid.truncation_tol},
                  {"linear_panel_fraction", g.kgrid.linear_panel_fraction},
                  {"phase_samples", g.amplitude.phase_samples},
                  {"amplitude_samples_per_scale", g.amplitude.samples_per_scale},
                  {"amplitude_support_tol", g.amplitude.support_tol},
                  {"ir_cutoff", g.ir_cutoff}};
    j["tolerances"] = json::object();
    for (const auto& [name, value] : s.tolerances) j["tolerances"][name] = value;
    j["tasks"] = json::array();
    for (Task t : s.tasks) j["tasks"].push_back(to_string(t));
    j["pathologies"] = {{"beta0", s.pathologies.beta0},
                        {"force", s.pathologies.force},
                        {"box_duration", s.pathologies.box_duration}};
    j["sweeps"] = {{"sigma_ratios", s.sweeps.sigma_ratios},
                   {"hbar_k", s.sweeps.hbar_k},
                   {"hbar_start", s.sweeps.hbar_start},
                   {"hbar_halvings", s.sweeps.hbar_halvings},
                   {"amplitude_factor", s.sweeps.amplitude_factor}};
    return j;
}

void set_dotted(json& doc, const std::string& key, const std::string& value) {
    if (key.empty()) throw ValidationError("empty key in --vary");
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ValidationError("malformed key '" + key + "'");
        if (!node->is_object()) throw ValidationError("key '" + key + "' descends into a non-object");
        if (dot == std::string::npos) {
            (*node)[part] = value_from_text(value);
            return;
        }
        node = &(*node)[part];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
}

}  // namespace radlab::runner
