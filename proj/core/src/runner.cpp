#include "radlab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <typeinfo>

#include "radlab/classical_shifts.hpp"
#include "radlab/error.hpp"
#include "radlab/lorentz_dirac.hpp"
#include "radlab/qed_wkb.hpp"
#include "radlab/spectral.hpp"
#include "radlab/trajectory.hpp"

namespace radlab::runner {

using nlohmann::json;
using cplx = std::complex<double>;

namespace {

constexpr const char* kVersion = "0.1.0";

double rel(double x, double ref) {
    if (x == ref) return 0;
    return std::abs(x - ref) / std::abs(ref);
}

double max_abs(const std::vector<double>& x) {
    double m = 0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return x;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string error_type(const std::exception& e) {
    if (dynamic_cast<const RegimeError*>(&e)) return "RegimeError";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    if (dynamic_cast<const SupportError*>(&e)) return "SupportError";
    if (dynamic_cast<const GridError*>(&e)) return "GridError";
    if (dynamic_cast<const InfraredError*>(&e)) return "InfraredError";
    if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
    if (dynamic_cast<const StepSizeError*>(&e)) return "StepSizeError";
    if (dynamic_cast<const QuadratureError*>(&e)) return "QuadratureError";
    if (dynamic_cast<const ResolutionError*>(&e)) return "ResolutionError";
    if (dynamic_cast<const NumericalError*>(&e)) return "NumericalError";
    if (dynamic_cast<const IoError*>(&e)) return "IoError";
    return "Error";
}

ErrorCategory category_of(const std::exception& e) {
    if (dynamic_cast<const ValidationError*>(&e)) return ErrorCategory::validation;
    if (dynamic_cast<const NumericalError*>(&e)) return ErrorCategory::numerical;
    if (dynamic_cast<const IoError*>(&e)) return ErrorCategory::io;
    return ErrorCategory::other;
}

const char* to_string(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::none: return "none";
        case ErrorCategory::validation: return "validation";
        case ErrorCategory::numerical: return "numerical";
        case ErrorCategory::io: return "io";
        case ErrorCategory::other: return "other";
    }
    return "other";
}

potentials::PotentialFamily scaled(const potentials::PotentialFamily& family, double factor) {
    return std::visit(
        [&](auto f) -> potentials::PotentialFamily {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, potentials::Tabulated>) {
                for (double& v : f.V) v *= factor;
            } else {
                f.V0 *= factor;
            }
            return f;
        },
        family);
}

// Collects what one task produces.
struct TaskContext {
    const Scenario& s;
    Report& report;
    Task task;
    json& results;

    void check(const std::string& name, double value, double threshold, const std::string& detail = {}) {
        Check c;
        c.name = name;
        c.task = task;
        c.value = value;
        c.threshold = threshold;
        c.pass = value <= threshold;  // NaN fails
        c.detail = detail;
        report.checks.push_back(std::move(c));
    }

    void flag(const std::string& name, bool pass, const std::string& detail) {
        check(name, pass ? 0.0 : 1.0, 0.0, detail);
    }

    void skip(const std::string& name, const std::string& reason) {
        Check c;
        c.name = name;
        c.task = task;
        c.value = std::numeric_limits<double>::quiet_NaN();
        c.threshold = s.tolerances.count(name) ? s.tol(name) : 0.0;
        c.pass = true;
        c.skipped = true;
        c.detail = reason;
        report.checks.push_back(std::move(c));
    }

    Series& series(const std::string& quantity, std::vector<std::string> columns) {
        report.series.push_back({quantity, std::move(columns), {}});
        return report.series.back();
    }

    void grid_size(const std::string& key, std::size_t n) { report.provenance["grid_sizes"][key] = n; }
};

// --- pathologies -----------------------------------------------------------

void task_pathologies(TaskContext& c) {
    namespace ld = lorentz_dirac;
    const auto& P = c.s.params;
    if (!(P.alpha > 0)) throw ValidationError("pathologies need alpha > 0");
    const double tau0 = P.tau0();
    const double beta0 = c.s.pathologies.beta0;
    const double F = c.s.pathologies.force;
    c.results["tau0"] = tau0;

    {
        const auto grid = linspace(0, 5 * tau0, 501);
        const auto run = ld::runaway_residual(beta0, P, grid);
        const double rate = ld::log_slope(grid, run.solution.beta, 0, 5 * tau0);
        const auto ode = ld::integrate_rapidity(ld::StepForce{0.0, 0.0}, P, beta0, beta0 / tau0, grid,
                                                c.s.tol("ode_rel_tol"));
        double dev = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) dev = std::max(dev, std::abs(ode.beta[i] - run.solution.beta[i]));
        dev /= max_abs(run.solution.beta);
        c.results["runaway"] = {{"beta0", beta0},
                                {"growth_rate", rate},
                                {"expected_rate", 1 / tau0},
                                {"equation_residual", run.residual},
                                {"ode_max_rel_deviation", dev}};
        c.check("runaway_rate", rel(rate * tau0, 1.0), c.s.tol("runaway_rate"), "log-slope of beta over [0, 5 tau0] vs 1/tau0");
        c.check("runaway_ode", dev, c.s.tol("runaway_ode"), "forward integration vs beta0 exp(tau/tau0)");
        auto& ser = c.series("runaway", {"tau", "beta", "beta_ode"});
        for (std::size_t i = 0; i < grid.size(); ++i) ser.rows.push_back({grid[i], run.solution.beta[i], ode.beta[i]});
        c.grid_size("runaway_tau", grid.size());
    }

    {
        const ld::ForceProfile step = ld::StepForce{F, 0.0};
        const auto grid = linspace(-10 * tau0, 2 * tau0, 601);
        const auto sol = ld::causal_solution(step, P, grid, c.s.tol("kernel_tol"));
        const double at3 = ld::kernel_force(step, P, -3 * tau0, c.s.tol("kernel_tol"));
        const double expected = F * std::exp(-3.0);
        const double slope = ld::log_slope(grid, sol.dbeta, -8 * tau0, -tau0);
        c.results["preacceleration"] = {{"force", F},
                                        {"m_dbeta_at_minus_3tau0", at3},
                                        {"expected", expected},
                                        {"log_slope", slope},
                                        {"expected_slope", 1 / tau0}};
        c.check("preacceleration", rel(at3, expected), c.s.tol("preacceleration"), "m beta'(-3 tau0) vs F e^-3");
        c.check("preacceleration_slope", rel(slope * tau0, 1.0), c.s.tol("preacceleration_slope"),
                "log-slope of beta' over [-8 tau0, -tau0] vs 1/tau0");
        auto& ser = c.series("preacceleration", {"tau", "m_dbeta", "beta"});
        for (std::size_t i = 0; i < grid.size(); ++i) ser.rows.push_back({grid[i], P.m * sol.dbeta[i], sol.beta[i]});
        c.grid_size("preacceleration_tau", grid.size());
    }

    {
        const double D = c.s.pathologies.box_duration * tau0;
        const ld::ForceProfile box = ld::BoxForce{F, 0.0, D};
        // start far enough back that beta'(start) ~ e^-40 is negligible
        const auto grid = linspace(-40 * tau0, D + 5 * tau0, 801);
        const auto sol = ld::causal_solution(box, P, grid, c.s.tol("kernel_tol"));
        const double change = sol.beta.back() - sol.beta.front();
        const double expected = F * D / P.m;
        c.results["box"] = {{"duration", D}, {"rapidity_change", change}, {"expected", expected}};
        c.check("box_impulse", rel(change, expected), c.s.tol("box_impulse"), "total rapidity change vs F T / m");
        auto& ser = c.series("box", {"tau", "m_dbeta", "beta"});
        for (std::size_t i = 0; i < grid.size(); ++i) ser.rows.push_back({grid[i], P.m * sol.dbeta[i], sol.beta[i]});
        c.grid_size("box_tau", grid.size());
    }

    PhysicalParams electron;
    electron.m = 1.0;
    electron.alpha = 1 / 137.035999;
    const double secs = ld::tau0_seconds(electron);
    const double factor = std::max(secs / 1e-24, 1e-24 / secs);
    c.results["tau0_seconds"] = {{"electron", secs}, {"scenario", ld::tau0_seconds(P)}};
    c.check("tau0_magnitude", factor, c.s.tol("tau0_factor"), "electron tau0 within this factor of 1e-24 s");
}

// --- shifts ----------------------------------------------------------------

void task_shifts(TaskContext& c) {
    namespace cs = classical_shifts;
    const auto& P = c.s.params;
    const double p = *c.s.momentum;
    const auto spec = c.s.potential_spec();
    const auto traj = potentials::classical_trajectory(spec, P, p, c.s.policy());
    const auto d = cs::shift_difference(traj, P, {c.s.tol("ode_rel_tol")});
    c.grid_size("trajectory", traj.t.size());

    auto block = [](const cs::ShiftResult& r) {
        return json{{"delta_z_final", r.delta_z_final},
                    {"delta_z_at_0", r.delta_z_at_0},
                    {"delta_v_final", r.delta_v.back()},
                    {"perturbation_ratio", r.perturbation_ratio}};
    };
    c.results["v_init"] = traj.v_init;
    c.results["v_fin"] = traj.v_fin;
    c.results["ode_diff"] = d.ode_diff;
    c.results["log_formula"] = d.log_formula;
    c.results["lowest_order"] = d.lowest_order;
    c.results["lorentz_dirac"] = block(d.ld);
    c.results["larmor"] = block(d.larmor);

    const double dv = std::abs(d.ld.delta_v.back() - d.larmor.delta_v.back());
    c.results["final_velocity_gap"] = dv;
    c.check("same_final_velocity", dv / (p / P.m), c.s.tol("same_final_velocity"),
            "|dv_D - dv_L| at the last sample over p/m");

    double scale = 0, worst = 0;
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const double expected = 2 * P.alpha / (3 * P.m) * traj.v[i] * traj.a[i];
        scale = std::max(scale, std::abs(expected));
        worst = std::max(worst, std::abs(d.ld.w[i] - d.larmor.w[i] - expected));
    }
    const double accumulation = worst == 0 ? 0.0 : worst / scale;
    c.results["energy_accumulation_residual"] = number_or_null(accumulation);
    c.check("energy_accumulation", accumulation, c.s.tol("energy_accumulation"),
            "max |w_D - w_L - (2 alpha/3m) v a| over its peak");

    if (d.log_formula != 0) {
        c.check("difference_formula", rel(d.ode_diff, d.log_formula), c.s.tol("difference_formula"),
                "final D - L shift vs (2 alpha/3m) v_f ln(v_f/v_i)");
    } else {
        const double ref = std::abs(d.larmor.delta_z_final);
        const double value = d.ode_diff == 0 ? 0.0 : std::abs(d.ode_diff) / ref;
        c.check("difference_formula", value, c.s.tol("difference_formula"),
                "equal asymptotic velocities: |D - L| relative to the Larmor shift");
    }

    // Larmor shift at t = 0 by the time-domain closed form, when the pulse is over by then
    const auto accel = potentials::acceleration_profile(spec, P, p, potentials::AccelMode::exact, c.s.policy());
    const double p_bar = cs::default_p_bar(traj, c.s.grids.support_tol);
    c.results["p_bar"] = p_bar;
    try {
        const double closed = cs::larmor_shift_closed_form(accel, p_bar, P);
        c.results["larmor_at_0"] = {{"ode", d.larmor.delta_z_at_0},
                                    {"closed_form", closed},
                                    {"gap", std::abs(d.larmor.delta_z_at_0 - closed)}};
    } catch (const DomainError& e) {
        c.results["larmor_at_0"] = {{"ode", d.larmor.delta_z_at_0}, {"closed_form", nullptr}, {"note", e.what()}};
    }

    for (const auto* r : {&d.ld, &d.larmor}) {
        auto& ser = c.series(r == &d.ld ? "shift_ld" : "shift_larmor", {"t", "delta_z", "delta_v"});
        for (std::size_t i = 0; i < r->t.size(); ++i) ser.rows.push_back({r->t[i], r->delta_z[i], r->delta_v[i]});
    }
    auto& tr = c.series("trajectory", {"t", "z", "v", "a"});
    for (std::size_t i = 0; i < traj.t.size(); ++i) tr.rows.push_back({traj.t[i], traj.z[i], traj.v[i], traj.a[i]});
}

// --- spectral --------------------------------------------------------------

struct Infrared {
    bool divergent = false;
    double k_min = 0;
};

Infrared infrared(const Scenario& s, const spectral::SpectralAcceleration& sa) {
    try {
        spectral::emission_probability(sa, s.params, 0.0);
        return {false, 0.0};
    } catch (const InfraredError&) {
        return {true, s.grids.ir_cutoff * sa.grid.k_bandwidth};
    }
}

void task_spectral(TaskContext& c) {
    const auto& P = c.s.params;
    const double p = *c.s.momentum;
    const auto spec = c.s.potential_spec();
    const auto mode = c.s.grids.accel_mode;
    const auto accel = potentials::acceleration_profile(spec, P, p, mode, c.s.policy());
    const auto sa = spectral::spectralize(accel, c.s.grids.kgrid);
    c.grid_size("acceleration", accel.signal.size());
    c.grid_size("k", sa.grid.k.size());

    c.results["accel_mode"] = potentials::to_string(mode);
    c.results["accel_integral"] = accel.integral;
    c.results["k_bandwidth"] = sa.grid.k_bandwidth;
    c.results["k_max"] = sa.grid.k_max;
    c.results["tail_ratio"] = sa.grid.tail_ratio;

    const auto energy = spectral::expected_photon_energy(accel, sa, P);
    c.results["photon_energy"] = {{"time_domain", energy.time_domain}, {"freq_domain", energy.freq_domain}};
    c.check("parseval", rel(energy.freq_domain, energy.time_domain), c.s.tol("parseval"),
            "(2 alpha/3) int a^2 dt vs (2 alpha/3) int dk/2pi |a_hat|^2");

    const auto ir = infrared(c.s, sa);
    c.results["ir_divergent"] = ir.divergent;
    const double kbw = sa.grid.k_bandwidth;
    if (ir.divergent) {
        const auto lo = spectral::emission_probability(sa, P, ir.k_min);
        const auto hi = spectral::emission_probability(sa, P, 10 * ir.k_min);
        const double law =
            4 * P.alpha / 3 * lo.a_hat_zero * lo.a_hat_zero / (2 * std::numbers::pi) * std::log(10.0);
        c.results["a_hat_zero"] = lo.a_hat_zero;
        c.results["emission_probability"] = {{"k_min", ir.k_min},
                                             {"prob", lo.prob},
                                             {"prob_10k_min", hi.prob},
                                             {"decade_difference", lo.prob - hi.prob},
                                             {"log_law", law}};
        c.check("ir_log_law", rel(lo.prob - hi.prob, law), c.s.tol("ir_log_law"),
                "P(k_min) - P(10 k_min) vs (4 alpha/3)(|a_hat(0)|^2/2pi) ln 10");
    } else {
        const auto p0 = spectral::emission_probability(sa, P, 0.0);
        const auto p6 = spectral::emission_probability(sa, P, 1e-6 * kbw);
        const auto p8 = spectral::emission_probability(sa, P, 1e-8 * kbw);
        c.results["a_hat_zero"] = p0.a_hat_zero;
        c.results["emission_probability"] = {{"k_min", 0.0},
                                             {"prob", p0.prob},
                                             {"prob_k_min_1e-6_bandwidth", p6.prob},
                                             {"prob_k_min_1e-8_bandwidth", p8.prob}};
        c.check("ir_stability", std::max(rel(p6.prob, p8.prob), rel(p0.prob, p8.prob)), c.s.tol("ir_stability"),
                "finite probability unchanged as k_min -> 0");
    }

    double p_bar = p;
    if (mode == potentials::AccelMode::exact)
        p_bar = classical_shifts::default_p_bar(potentials::classical_trajectory(spec, P, p, c.s.policy()),
                                                c.s.grids.support_tol);
    c.results["p_bar"] = p_bar;
    try {
        const cplx fourier = spectral::larmor_shift_fourier(sa, p_bar, P);
        const double closed = classical_shifts::larmor_shift_closed_form(accel, p_bar, P);
        c.results["larmor_shift"] = {{"fourier_real", fourier.real()},
                                     {"fourier_imag", fourier.imag()},
                                     {"closed_form", closed}};
        c.check("shift_equivalence", rel(fourier.real(), closed), c.s.tol("shift_equivalence"),
                "Fourier Larmor shift vs time-domain closed form");
        const double imag = fourier.imag() == 0 ? 0.0 : std::abs(fourier.imag() / fourier.real());
        c.check("shift_imag", imag, c.s.tol("shift_imag"), "|Im| / |Re| of the Fourier Larmor shift");
    } catch (const DomainError& e) {
        c.results["larmor_shift"] = {{"note", e.what()}};
        c.skip("shift_equivalence", std::string("not applicable: ") + e.what());
        c.skip("shift_imag", std::string("not applicable: ") + e.what());
    }

    auto& sp = c.series("spectrum", {"k", "re_a_hat", "im_a_hat", "abs_a_hat"});
    for (std::size_t i = 0; i < sa.grid.k.size(); ++i)
        sp.rows.push_back({sa.grid.k[i], sa.a_hat[i].real(), sa.a_hat[i].imag(), std::abs(sa.a_hat[i])});
    auto& ac = c.series("acceleration", {"t", "a"});
    for (std::size_t i = 0; i < accel.signal.size(); ++i)
        ac.rows.push_back({accel.signal.grid()[i], accel.signal.values()[i]});
}

// --- quantum ---------------------------------------------------------------

struct QuantumSetup {
    potentials::AccelerationProfile centre;
    spectral::SpectralAcceleration spectrum;
    Infrared ir;
    double classical = 0;
};

QuantumSetup quantum_setup(const Scenario& s, const potentials::PotentialSpec& spec) {
    QuantumSetup q;
    const double p = *s.momentum;
    q.centre = potentials::acceleration_profile(spec, s.params, p, s.grids.quantum_mode, s.policy());
    q.spectrum = spectral::spectralize(q.centre, s.grids.kgrid);
    q.ir = infrared(s, q.spectrum);
    q.classical = spectral::larmor_shift_fourier(q.spectrum, p, s.params).real();
    return q;
}

qed_wkb::QuantumShift quantum_shift(const Scenario& s, const potentials::PotentialSpec& spec, double sigma_p,
                                    double k_min) {
    const auto packet = qed_wkb::make_wave_packet(*s.momentum, sigma_p, s.packet.z_c, s.packet.panels);
    qed_wkb::check_packet(packet, spec, s.params);
    qed_wkb::QuantumOptions opts;
    opts.mode = s.grids.quantum_mode;
    opts.policy = s.policy();
    opts.kgrid = s.grids.kgrid;
    opts.k_min = k_min;
    return qed_wkb::quantum_position_shift(packet, spec, s.params, opts);
}

void task_quantum(TaskContext& c) {
    const auto& P = c.s.params;
    const double p = *c.s.momentum;
    const auto spec = c.s.potential_spec();
    const auto setup = quantum_setup(c.s, spec);
    const auto q = quantum_shift(c.s, spec, c.s.packet.sigma_p, setup.ir.k_min);
    c.grid_size("quantum_k", q.k_points);

    c.results["mode"] = potentials::to_string(c.s.grids.quantum_mode);
    c.results["shift"] = q.shift;
    c.results["imag"] = q.imag;
    c.results["classical_shift"] = setup.classical;
    c.results["gap"] = std::abs(q.shift - setup.classical);
    c.results["ir_divergent"] = q.ir_divergent;
    c.results["k_min"] = setup.ir.k_min;
    c.results["emission_prob_term"] = number_or_null(q.emission_prob_term);
    c.results["ir_error"] = q.ir_error ? json(*q.ir_error) : json(nullptr);
    c.results["photon_energy"] = q.photon_energy;

    const double imag = q.imag == 0 ? 0.0 : std::abs(q.imag / q.shift);
    c.check("quantum_reality", imag, c.s.tol("shift_imag"), "|Im| / |Re| of the quantum shift");
    const auto prob = spectral::emission_probability(setup.spectrum, P, setup.ir.k_min);
    c.check("probability_crosscheck", rel(q.emission_prob_term, prob.prob), c.s.tol("probability_crosscheck"),
            "packet probability term vs spectral emission probability at p_bar");
    const auto energy = spectral::expected_photon_energy(setup.centre, setup.spectrum, P);
    c.check("photon_energy_crosscheck", rel(q.photon_energy, energy.freq_domain), c.s.tol("probability_crosscheck"),
            "packet photon energy vs spectral photon energy at p_bar");

    // reduced amplitude against (i/k) a_hat on the exact trajectory
    const auto exact = potentials::acceleration_profile(spec, P, p, potentials::AccelMode::exact, c.s.policy());
    const double kbw = spectral::make_k_grid(exact, c.s.grids.kgrid).k_bandwidth;
    double worst = 0;
    auto& amp = c.series("amplitude_classical", {"k", "re_I", "im_I", "re_expected", "im_expected"});
    for (double f : {0.5, 1.0, 2.0}) {
        const double k = f * kbw;
        const cplx I =
            qed_wkb::emission_amplitude(spec, P, p, k, 0.0, qed_wkb::AmplitudeForm::reduced, c.s.grids.amplitude).I;
        const cplx expected = cplx(0, 1 / k) * numerics::fourier_integral(exact.signal, k).value;
        const double r = I == expected ? 0.0 : std::abs(I - expected) / std::abs(expected);
        worst = std::max(worst, r);
        amp.rows.push_back({k, I.real(), I.imag(), expected.real(), expected.imag()});
    }
    c.results["amplitude_classical_residual"] = worst;
    c.check("amplitude_classical", worst, c.s.tol("amplitude_classical"), "reduced I_pk (k_z = 0) vs (i/k) a_hat_p(k)");

    // scaling identity on a 5 x 5 (p, k) grid
    const double kbw_line = setup.spectrum.grid.k_bandwidth;
    double scaling = 0;
    auto& sc = c.series("scaling_identity", {"p", "k", "residual"});
    for (double pf : {1.0, 1.05, 1.1, 1.15, 1.2}) {
        for (double kf : {0.0, 0.25, 0.5, 1.0, 2.0}) {
            const double r = qed_wkb::scaling_identity_residual(spec, P, pf * p, kf * kbw_line,
                                                                potentials::AccelMode::straight_line, 1e-4,
                                                                c.s.policy());
            scaling = std::max(scaling, r);
            sc.rows.push_back({pf * p, kf * kbw_line, r});
        }
    }
    c.results["scaling_identity_residual"] = scaling;
    c.check("scaling_identity", scaling, c.s.tol("scaling_identity"), "straight-line mode, 5 x 5 (p, k) grid");
}

// --- convergence sweeps ----------------------------------------------------

bool strictly_decreasing(const std::vector<double>& x) {
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] < x[i - 1] || (x[i] == 0 && x[i - 1] == 0))) return false;
    return true;
}

void task_sweeps(TaskContext& c) {
    const auto& P = c.s.params;
    const double p = *c.s.momentum;
    const auto spec = c.s.potential_spec();
    const auto setup = quantum_setup(c.s, spec);

    // packet width
    std::vector<double> gaps;
    auto& sig = c.series("sigma_convergence", {"sigma_p", "shift", "classical", "gap"});
    json table = json::array();
    for (double ratio : c.s.sweeps.sigma_ratios) {
        const double sigma = ratio * p;
        const auto q = quantum_shift(c.s, spec, sigma, setup.ir.k_min);
        const double gap = std::abs(q.shift - setup.classical);
        gaps.push_back(gap);
        sig.rows.push_back({sigma, q.shift, setup.classical, gap});
        table.push_back({{"sigma_p", sigma}, {"shift", q.shift}, {"gap", gap}});
    }
    c.results["sigma_convergence"] = {{"classical_shift", setup.classical}, {"table", table}};
    c.flag("sigma_convergence_monotone", strictly_decreasing(gaps),
           "|quantum - classical| decreases as sigma_p shrinks");

    // hbar -> 0 for the emission amplitude
    const double k = c.s.sweeps.hbar_k * setup.spectrum.grid.k_bandwidth;
    const double hbar0 = c.s.sweeps.hbar_start * p * p / (2 * P.m * k);
    std::vector<double> hgaps;
    json htable = json::array();
    auto& hb = c.series("hbar_convergence", {"hbar_eff", "gap", "order"});
    for (unsigned i = 0; i <= c.s.sweeps.hbar_halvings; ++i) {
        PhysicalParams Ph = P;
        Ph.hbar_eff = hbar0 / std::pow(2.0, i);
        const auto e = qed_wkb::emission_amplitude(spec, Ph, p, k, 0.0, qed_wkb::AmplitudeForm::exact_wkb,
                                                   c.s.grids.amplitude);
        const auto r = qed_wkb::emission_amplitude(spec, Ph, p, k, 0.0, qed_wkb::AmplitudeForm::reduced,
                                                   c.s.grids.amplitude);
        const double gap = e.I == r.I ? 0.0 : std::abs(e.I - r.I) / std::abs(r.I);
        const double order = hgaps.empty() || gap == 0 ? std::numeric_limits<double>::quiet_NaN()
                                                       : std::log2(hgaps.back() / gap);
        hgaps.push_back(gap);
        hb.rows.push_back({Ph.hbar_eff, gap, order});
        htable.push_back({{"hbar_eff", Ph.hbar_eff}, {"gap", gap}, {"order", number_or_null(order)}});
    }
    c.results["hbar_convergence"] = {{"k", k}, {"table", htable}};
    c.flag("hbar_convergence_monotone", strictly_decreasing(hgaps), "exact_wkb -> reduced gap decreases as hbar halves");

    // pulse amplitude
    const double factor = c.s.sweeps.amplitude_factor;
    const potentials::PotentialSpec big(scaled(c.s.potential->family, factor), c.s.grids.support_tol);
    const double s1 = quantum_shift(c.s, spec, c.s.packet.sigma_p, setup.ir.k_min).shift;
    const double s2 = quantum_shift(c.s, big, c.s.packet.sigma_p, setup.ir.k_min).shift;
    const double ratio = s1 == 0 && s2 == 0 ? factor * factor : s2 / s1;
    c.results["amplitude_scaling"] = {{"factor", factor}, {"shift", s1}, {"shift_scaled", s2}, {"ratio", ratio}};
    c.check("amplitude_scaling", rel(ratio, factor * factor), c.s.tol("amplitude_scaling"),
            "quantum shift ratio vs factor^2 under potential scaling");

    // classical log formula minus lowest order: second order in the potential
    auto gap_of = [&](const potentials::PotentialSpec& sp) {
        const auto traj = potentials::classical_trajectory(sp, P, p, c.s.policy());
        const auto d = classical_shifts::shift_difference(traj, P, {c.s.tol("ode_rel_tol")});
        return std::abs(d.log_formula - d.lowest_order);
    };
    const double g1 = gap_of(spec), g2 = gap_of(big);
    if (g1 == 0 && g2 == 0) {
        c.results["difference_contraction"] = {{"note", "equal asymptotic velocities: both formulas vanish"}};
        c.skip("contraction", "equal asymptotic velocities");
    } else {
        c.results["difference_contraction"] = {{"factor", factor}, {"gap", g1}, {"gap_scaled", g2}, {"ratio", g2 / g1}};
        c.check("contraction", rel(g2 / g1, factor * factor), c.s.tol("contraction"),
                "|log_formula - lowest_order| ratio vs factor^2");
    }
}

}  // namespace

bool Report::all_checks_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const TaskOutcome* Report::outcome(Task task) const {
    for (const auto& t : tasks)
        if (t.task == task) return &t;
    return nullptr;
}

const Check* Report::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

const Series* Report::find_series(const std::string& quantity) const {
    for (const auto& s : series)
        if (s.quantity == quantity) return &s;
    return nullptr;
}

json Report::to_json() const {
    json j;
    j["scenario_id"] = scenario_id;
    j["scenario"] = scenario;
    j["tasks"] = json::object();
    for (const auto& t : tasks) {
        json block = t.results;
        block["status"] = t.ok ? "ok" : "error";
        if (!t.ok)
            block["error"] = {{"category", to_string(t.category)}, {"type", t.error_type}, {"message", t.error_message}};
        j["tasks"][runner::to_string(t.task)] = block;
    }
    j["checks"] = json::array();
    std::size_t failed = 0;
    for (const auto& c : checks) {
        if (!c.pass) ++failed;
        j["checks"].push_back({{"name", c.name},
                               {"task", runner::to_string(c.task)},
                               {"value", number_or_null(c.value)},
                               {"threshold", c.threshold},
                               {"pass", c.pass},
                               {"skipped", c.skipped},
                               {"detail", c.detail}});
    }
    const auto errors = std::count_if(tasks.begin(), tasks.end(), [](const TaskOutcome& t) { return !t.ok; });
    j["summary"] = {{"checks", checks.size()},
                    {"failed", failed},
                    {"task_errors", errors},
                    {"all_pass", failed == 0 && errors == 0}};
    j["series"] = json::array();
    for (const auto& s : series) j["series"].push_back({{"quantity", s.quantity}, {"columns", s.columns}, {"rows", s.rows.size()}});
    j["provenance"] = provenance;
    if (wall_seconds) j["provenance"]["wall_time_seconds"] = *wall_seconds;
    return j;
}

int exit_code(const Report& report) {
    int code = 0;
    for (const auto& t : report.tasks) {
        switch (t.category) {
            case ErrorCategory::io: code = std::max(code, 4); break;
            case ErrorCategory::numerical:
            case ErrorCategory::other: code = std::max(code, 3); break;
            case ErrorCategory::validation: code = std::max(code, 2); break;
            case ErrorCategory::none: break;
        }
    }
    if (code == 0 && !report.all_checks_pass()) code = 1;
    return code;
}

Report run_scenario(const Scenario& s, const RunOptions& opts) {
    validate(s);
    const auto start = std::chrono::steady_clock::now();
    Report report;
    report.scenario_id = s.id;
    report.scenario = echo(s);
    report.provenance["library"] = "radlab";
    report.provenance["version"] = kVersion;
    report.provenance["tolerances"] = report.scenario["tolerances"];
    report.provenance["grid_sizes"] = json::object();

    for (Task task : s.tasks) {
        TaskOutcome out;
        out.task = task;
        TaskContext ctx{s, report, task, out.results};
        try {
            switch (task) {
                case Task::pathologies: task_pathologies(ctx); break;
                case Task::shifts: task_shifts(ctx); break;
                case Task::spectral: task_spectral(ctx); break;
                case Task::quantum: task_quantum(ctx); break;
                case Task::convergence_sweeps: task_sweeps(ctx); break;
            }
        } catch (const std::exception& e) {
            out.ok = false;
            out.category = category_of(e);
            out.error_type = error_type(e);
            out.error_message = e.what();
        }
        report.tasks.push_back(std::move(out));
    }
    if (opts.timing)
        report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace radlab::runner
