#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "radlab/physical_params.hpp"

namespace radlab::lorentz_dirac {

/// hbar / (m_e c^2) in seconds.
inline constexpr double kHbarOverElectronRestEnergy = 1.2881e-21;

/// F(tau) = F for tau >= onset, 0 before.
struct StepForce {
    double F = 1.0;
    double onset = 0.0;
};

/// F on [onset, onset + duration), 0 elsewhere.
struct BoxForce {
    double F = 1.0;
    double onset = 0.0;
    double duration = 1.0;
};

/// Linear interpolation of samples, held at the end values outside the grid.
struct SampledForce {
    std::vector<double> tau;
    std::vector<double> F;
};

using ForceProfile = std::variant<StepForce, BoxForce, SampledForce>;

double force_value(const ForceProfile& force, double tau);
/// Points where the force or its slope may jump.
std::vector<double> force_breakpoints(const ForceProfile& force);
std::string describe(const ForceProfile& force);

enum class SolutionKind { runaway, causal };

/// Rapidity samples; u0 = cosh(beta), u1 = sinh(beta).
struct RapiditySolution {
    std::vector<double> tau;
    std::vector<double> beta;
    std::vector<double> dbeta;  // d beta / d tau
    std::string source;
    SolutionKind kind = SolutionKind::causal;
};

struct RunawayResult {
    RapiditySolution solution;
    double residual = 0;  // max |beta' - tau0 beta''|
};

/// The force-free runaway beta0 exp(tau / tau0) on tau_grid. Grids spanning more
/// than 10 tau0 are rejected (DomainError).
RunawayResult runaway_residual(double beta0, const PhysicalParams& params, std::span<const double> tau_grid);

/// Forward integration of m beta' - m tau0 beta'' = F with (beta, beta')(tau_0) given,
/// reported on tau_grid. A zero force and beta'(0) = beta0 / tau0 reproduces the runaway.
RapiditySolution integrate_rapidity(const ForceProfile& force, const PhysicalParams& params, double beta0,
                                    double dbeta0, std::span<const double> tau_grid, double rel_tol = 1e-11);

/// m beta'(tau) = int_0^inf e^{-s} F(tau + tau0 s) ds.
double kernel_force(const ForceProfile& force, const PhysicalParams& params, double tau, double tol = 1e-13);

/// Causal (runaway-free) solution with beta = 0 at the first grid point.
RapiditySolution causal_solution(const ForceProfile& force, const PhysicalParams& params,
                                 std::span<const double> tau_grid, double tol = 1e-13);

/// Least-squares slope of log|y| against x over samples with x in [lo, hi].
double log_slope(std::span<const double> x, std::span<const double> y, double lo, double hi);

/// tau0 in seconds for a mass given in electron masses.
double tau0_seconds(const PhysicalParams& params);

}  // namespace radlab::lorentz_dirac
