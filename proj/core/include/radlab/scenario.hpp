#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "radlab/physical_params.hpp"
#include "radlab/potentials.hpp"
#include "radlab/qed_wkb.hpp"
#include "radlab/spectral.hpp"
#include "radlab/trajectory.hpp"

namespace radlab::runner {

enum class Task { pathologies, shifts, spectral, quantum, convergence_sweeps };

const char* to_string(Task task);
std::optional<Task> task_from_string(const std::string& name);
/// All tasks, in execution order.
const std::vector<Task>& all_tasks();

/// Everything except pathologies needs a potential and a momentum.
bool needs_potential(Task task);

struct PotentialConfig {
    potentials::PotentialFamily family;
    /// Tabulated source as written in the config (empty for inline knots).
    std::string file;
};

struct PacketConfig {
    double sigma_p = 0.05;
    double z_c = 0;
    unsigned panels = 2;
};

struct GridConfig {
    std::size_t samples_per_scale = 64;
    double support_tol = 1e-12;
    double kinetic_dominance = 0.5;
    potentials::AccelMode accel_mode = potentials::AccelMode::exact;
    potentials::AccelMode quantum_mode = potentials::AccelMode::straight_line;
    spectral::KGridOptions kgrid;
    qed_wkb::AmplitudeOptions amplitude;
    /// Infrared cutoff for divergent emission probabilities, in units of the pulse bandwidth.
    double ir_cutoff = 1e-6;
};

struct PathologyConfig {
    double beta0 = 1e-6;
    double force = 1.0;
    /// Box-force duration in units of tau0.
    double box_duration = 50;
};

struct SweepConfig {
    std::vector<double> sigma_ratios{0.1, 0.05, 0.025};
    /// Wavenumber of the hbar sequence, in units of the pulse bandwidth.
    double hbar_k = 1.0;
    /// First hbar_eff of the sequence as a fraction of p^2 / (2 m k).
    double hbar_start = 1e-2;
    unsigned hbar_halvings = 5;
    double amplitude_factor = 2.0;
};

/// Named thresholds and solver tolerances; unknown names are rejected at load time.
using Tolerances = std::map<std::string, double>;

const Tolerances& default_tolerances();

struct Scenario {
    std::string id = "scenario";
    PhysicalParams params;
    std::optional<PotentialConfig> potential;
    std::optional<double> momentum;
    PacketConfig packet;
    GridConfig grids;
    Tolerances tolerances = default_tolerances();
    std::vector<Task> tasks = all_tasks();
    PathologyConfig pathologies;
    SweepConfig sweeps;

    double tol(const std::string& name) const;
    potentials::PotentialSpec potential_spec() const;
    potentials::SamplingPolicy policy() const;
};

/// Reads and validates a JSON scenario; relative tabulated paths resolve against the file's directory.
/// Parse failures and I/O failures raise IoError/ValidationError with line or key context.
Scenario load_config(const std::filesystem::path& path);

/// The raw document behind load_config, for callers that edit keys before parsing.
nlohmann::json read_config(const std::filesystem::path& path);

Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Fully resolved scenario, defaults included. parse_scenario(echo(s)) reproduces s.
nlohmann::json echo(const Scenario& s);

/// Throws ValidationError naming the violated invariant.
void validate(const Scenario& s);

/// Sets a dotted key ("potential.V0") in a scenario document; numbers, booleans
/// and strings are inferred from the text.
void set_dotted(nlohmann::json& doc, const std::string& key, const std::string& value);

}  // namespace radlab::runner
