#pragma once

#include <vector>

#include "radlab/physical_params.hpp"
#include "radlab/trajectory.hpp"

namespace radlab::classical_shifts {

enum class Theory { lorentz_dirac, larmor };

const char* to_string(Theory theory);

/// First-order-in-alpha corrections along an unperturbed trajectory, on traj.t.
struct ShiftResult {
    Theory theory = Theory::larmor;
    std::vector<double> t;
    std::vector<double> delta_z;
    std::vector<double> delta_v;
    /// w = v dv - a dz, the energy correction divided by m.
    std::vector<double> w;
    double delta_z_at_0 = 0;
    double delta_z_final = 0;
    double p_bar = 0;
    /// tau0 max|da/dt| / max|a|: size of the reaction term relative to the external force.
    double perturbation_ratio = 0;
};

struct ShiftOptions {
    double rel_tol = 1e-11;
};

/// Integrates w' = RHS/m and dz' = (w + a dz)/v from the first sample, where
/// RHS_D = (2 alpha/3) v'' v and RHS_L = -(2 alpha/3) a^2 use the unperturbed motion.
/// The solve is done at unit alpha and scaled, so results are exactly linear in alpha.
ShiftResult shift_ode(const potentials::Trajectory& traj, Theory theory, const PhysicalParams& params,
                      const ShiftOptions& opts = {});

struct ShiftDifference {
    double ode_diff = 0;       // final D - L from two shift_ode runs
    double log_formula = 0;    // (2 alpha/3m) v_f ln(v_f / v_i)
    double lowest_order = 0;   // (2 alpha/3m)(v_f - v_i)
    ShiftResult ld;
    ShiftResult larmor;
};

ShiftDifference shift_difference(const potentials::Trajectory& traj, const PhysicalParams& params,
                                 const ShiftOptions& opts = {});

/// m times the mean velocity (dz/dt) over the samples where |a| exceeds
/// support_tol times its peak; m v_fin when a vanishes.
double default_p_bar(const potentials::Trajectory& traj, double support_tol = numerics::kDefaultSupportTol);

/// (2 alpha / 3 p_bar) int t a(t)^2 dt. Throws DomainError if a has support at t > 0.
double larmor_shift_closed_form(const potentials::AccelerationProfile& accel, double p_bar,
                                const PhysicalParams& params);

}  // namespace radlab::classical_shifts
