#include "radlab/classical_shifts.hpp"

#include <algorithm>
#include <cmath>

#include "radlab/error.hpp"
#include "radlab/numerics/ode.hpp"
#include "radlab/numerics/quadrature.hpp"
#include "radlab/numerics/spline.hpp"

namespace radlab::classical_shifts {

const char* to_string(Theory theory) { return theory == Theory::lorentz_dirac ? "lorentz_dirac" : "larmor"; }

ShiftResult shift_ode(const potentials::Trajectory& traj, Theory theory, const PhysicalParams& params,
                      const ShiftOptions& opts) {
    params.validate();
    if (traj.t.size() < 2 || !traj.map) throw ValidationError("shift_ode: trajectory is empty");
    const double m = params.m;
    const double t0 = traj.t.front(), t1 = traj.t.back();

    double a_max = 0, jerk_max = 0, v_min = traj.v.front(), a2_int = 0;
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const auto k = traj.at_position(traj.z[i]);
        a_max = std::max(a_max, std::abs(k.a));
        jerk_max = std::max(jerk_max, std::abs(k.jerk));
        v_min = std::min(v_min, k.v);
    }
    for (std::size_t i = 1; i < traj.t.size(); ++i)
        a2_int += 0.5 * (traj.t[i] - traj.t[i - 1]) * (traj.a[i] * traj.a[i] + traj.a[i - 1] * traj.a[i - 1]);

    // state: z, w / alpha, dz / alpha
    auto rhs = [&](double, std::span<const double> y, std::span<double> d) {
        const auto k = traj.at_position(y[0]);
        const double source = theory == Theory::lorentz_dirac ? (2.0 / 3.0) * k.jerk * k.v : -(2.0 / 3.0) * k.a * k.a;
        d[0] = k.v;
        d[1] = source / m;
        d[2] = (y[1] + k.a * y[2]) / k.v;
    };
    const double span = t1 - t0;
    const double w_scale = (2.0 / 3.0) * (a2_int + jerk_max * traj.v_fin * span) / m + 1e-300;
    const double z_scale = w_scale * span / v_min;
    numerics::OdeOptions ode;
    ode.rel_tol = opts.rel_tol;
    ode.abs_tol_components = {1e-3 * opts.rel_tol * (std::abs(traj.z.front()) + std::abs(traj.z.back())),
                              1e-3 * opts.rel_tol * w_scale, 1e-3 * opts.rel_tol * z_scale};
    ode.max_step = span / 64;
    auto path = numerics::integrate_ode(rhs, {traj.z.front(), 0.0, 0.0}, t0, t1, ode);

    ShiftResult out;
    out.theory = theory;
    out.t = traj.t;
    out.p_bar = default_p_bar(traj);
    out.perturbation_ratio = a_max > 0 ? params.tau0() * jerk_max / a_max : 0.0;
    const double alpha = params.alpha;
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const auto y = path(traj.t[i]);
        const double w = alpha * y[1], dz = alpha * y[2];
        out.w.push_back(w);
        out.delta_z.push_back(dz);
        out.delta_v.push_back((w + traj.a[i] * dz) / traj.v[i]);
        if (traj.t[i] == 0.0) out.delta_z_at_0 = dz;
    }
    out.delta_z_final = out.delta_z.back();
    return out;
}

ShiftDifference shift_difference(const potentials::Trajectory& traj, const PhysicalParams& params,
                                 const ShiftOptions& opts) {
    ShiftDifference out;
    out.ld = shift_ode(traj, Theory::lorentz_dirac, params, opts);
    out.larmor = shift_ode(traj, Theory::larmor, params, opts);
    out.ode_diff = out.ld.delta_z_final - out.larmor.delta_z_final;
    const double c = 2 * params.alpha / (3 * params.m);
    out.log_formula = c * traj.v_fin * std::log(traj.v_fin / traj.v_init);
    out.lowest_order = c * (traj.v_fin - traj.v_init);
    return out;
}

double default_p_bar(const potentials::Trajectory& traj, double support_tol) {
    double peak = 0;
    for (double a : traj.a) peak = std::max(peak, std::abs(a));
    if (peak == 0) return traj.params.m * traj.v_fin;
    std::size_t lo = traj.a.size(), hi = 0;
    for (std::size_t i = 0; i < traj.a.size(); ++i)
        if (std::abs(traj.a[i]) > support_tol * peak) {
            lo = std::min(lo, i);
            hi = i;
        }
    if (hi <= lo) return traj.params.m * traj.v[lo];
    return traj.params.m * (traj.z[hi] - traj.z[lo]) / (traj.t[hi] - traj.t[lo]);
}

double larmor_shift_closed_form(const potentials::AccelerationProfile& accel, double p_bar,
                                const PhysicalParams& params) {
    params.validate();
    if (!(p_bar > 0)) throw ValidationError("p_bar must be positive");
    const auto& sig = accel.signal;
    const auto& t = sig.grid();
    const auto& a = sig.values();
    if (sig.peak() == 0) return 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] > 0 && std::abs(a[i]) > sig.support_tol() * sig.peak())
            throw DomainError("closed-form Larmor shift needs a(t) = 0 for t > 0; |a| = " +
                              std::to_string(std::abs(a[i])) + " at t = " + std::to_string(t[i]));
    numerics::CubicSpline<double> s(t, a);
    // t s(t)^2 is a degree-7 polynomial on each panel
    const double moment = numerics::integrate_over_knots<4>(t, [&](double x) {
        const double v = s(x);
        return x * v * v;
    });
    return 2 * params.alpha / (3 * p_bar) * moment;
}

}  // namespace radlab::classical_shifts
