#include "radlab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "radlab/error.hpp"
#include "radlab/numerics/quadrature.hpp"

namespace radlab::potentials {

FlightMap::FlightMap(PotentialSpec spec, PhysicalParams params, double p, Window z_range, double dz)
    : spec_(std::move(spec)), params_(params), p_(p), dz_(dz) {
    const long j_lo = static_cast<long>(std::floor(std::min(z_range.lo, 0.0) / dz_));
    const long j_hi = static_cast<long>(std::ceil(std::max(z_range.hi, 0.0) / dz_));
    const std::size_t count = static_cast<std::size_t>(j_hi - j_lo + 1);
    const std::size_t zero = static_cast<std::size_t>(-j_lo);
    z_.resize(count);
    t_.resize(count);
    for (std::size_t i = 0; i < count; ++i) z_[i] = static_cast<double>(j_lo + static_cast<long>(i)) * dz_;
    auto slowness = [this](double z) { return 1.0 / velocity(z); };
    t_[zero] = 0.0;
    for (std::size_t i = zero + 1; i < count; ++i)
        t_[i] = t_[i - 1] + numerics::gauss_legendre<20>(slowness, z_[i - 1], z_[i]);
    for (std::size_t i = zero; i-- > 0;) t_[i] = t_[i + 1] - numerics::gauss_legendre<20>(slowness, z_[i], z_[i + 1]);
    for (double z : z_) v_max_ = std::max(v_max_, velocity(z));
    guess_ = numerics::MonotoneCubic(t_, z_);
}

double FlightMap::velocity(double z) const {
    const double kin = p_ * p_ - 2 * params_.m * spec_.value(z);
    if (!(kin > 0)) throw RegimeError("turning point: p^2 - 2mV <= 0 at z = " + std::to_string(z));
    return std::sqrt(kin) / params_.m;
}

double FlightMap::time_at(double z) const {
    if (z <= z_.front()) return t_.front() + (z - z_.front()) / velocity(z_.front());
    if (z >= z_.back()) return t_.back() + (z - z_.back()) / velocity(z_.back());
    std::size_t j = static_cast<std::size_t>((z - z_.front()) / dz_);
    j = std::min(j, z_.size() - 2);
    return t_[j] + numerics::gauss_legendre<20>([this](double x) { return 1.0 / velocity(x); }, z_[j], z);
}

double FlightMap::position_at(double t) const {
    if (t <= t_.front()) return z_.front() + (t - t_.front()) * velocity(z_.front());
    if (t >= t_.back()) return z_.back() + (t - t_.back()) * velocity(z_.back());
    double z = guess_(t);
    for (int it = 0; it < 8; ++it) {
        const double step = (time_at(z) - t) * velocity(z);
        z -= step;
        if (std::abs(step) <= 1e-15 * (std::abs(z) + dz_)) break;
    }
    return z;
}

Kinematics Trajectory::at_position(double zpos) const {
    const auto pv = potential.eval(zpos);
    const double vel = map->velocity(zpos);
    return {zpos, vel, -pv.dV / params.m, -pv.d2V * vel / params.m};
}

Kinematics Trajectory::at(double time) const { return at_position(map->position_at(time)); }

void check_regime(const PotentialSpec& spec, const PhysicalParams& params, double p, double kinetic_dominance) {
    params.validate();
    if (!(p > 0) || !std::isfinite(p)) throw ValidationError("momentum p must be positive");
    const double energy = p * p / (2 * params.m);
    const double vmax = spec.max_potential();
    if (!(p * p - 2 * params.m * vmax > 0))
        throw RegimeError("turning point: p^2 <= 2 m max V (max V = " + std::to_string(vmax) + " at z = " +
                          std::to_string(spec.argmax_potential()) + ")");
    if (energy - vmax < kinetic_dominance * energy)
        throw RegimeError("kinetic dominance violated: (E - V)/E = " + std::to_string((energy - vmax) / energy) +
                          " < " + std::to_string(kinetic_dominance) + " at worst z = " +
                          std::to_string(spec.argmax_potential()));
}

Trajectory classical_trajectory(const PotentialSpec& spec, const PhysicalParams& params, double p,
                                const SamplingPolicy& policy) {
    check_regime(spec, params, p, policy.kinetic_dominance);
    if (policy.samples_per_scale < 4) throw ValidationError("samples_per_scale must be >= 4");
    const Window window = policy.window.value_or(spec.support_window());
    if (!(window.hi > window.lo)) throw ValidationError("trajectory window must have positive width");
    const double scale = spec.length_scale();
    const double dz = scale / static_cast<double>(policy.samples_per_scale);

    Trajectory traj;
    traj.p = p;
    traj.E = p * p / (2 * params.m);
    traj.potential = spec;
    traj.params = params;
    traj.map = std::make_shared<FlightMap>(spec, params, p, window, dz);
    const auto& map = *traj.map;
    traj.v_init = map.velocity(std::min(window.lo, 0.0));
    traj.v_fin = map.velocity(std::max(window.hi, 0.0));

    const double dt = scale / (map.max_velocity() * static_cast<double>(policy.samples_per_scale));
    const double t_lo = map.time_at(std::min(window.lo, 0.0));
    const double t_hi = map.time_at(std::max(window.hi, 0.0));
    const long i_lo = static_cast<long>(std::ceil(t_lo / dt));
    const long i_hi = static_cast<long>(std::floor(t_hi / dt));
    for (long i = i_lo; i <= i_hi; ++i) {
        const double time = static_cast<double>(i) * dt;
        const auto kin = traj.at(i == 0 ? 0.0 : time);
        traj.t.push_back(time);
        traj.z.push_back(i == 0 ? 0.0 : kin.z);
        traj.v.push_back(kin.v);
        traj.a.push_back(kin.a);
    }
    return traj;
}

const char* to_string(AccelMode mode) {
    switch (mode) {
        case AccelMode::exact: return "exact";
        case AccelMode::straight_line: return "straight_line";
        case AccelMode::sampled: return "sampled";
    }
    return "unknown";
}

namespace {

// Integral of f(z) over [lo, hi]. Tabulated potentials are only piecewise smooth,
// so integrate knot panel by knot panel instead of bisecting at every knot.
template <typename F>
double integrate_in_z(const PotentialSpec& spec, F&& f, double lo, double hi) {
    const auto* tab = std::get_if<Tabulated>(&spec.family());
    if (!tab) return numerics::quad_adaptive(f, lo, hi, 1e-12);
    std::vector<double> breaks{lo};
    for (double z : tab->z)
        if (z > lo && z < hi) breaks.push_back(z);
    breaks.push_back(hi);
    return numerics::integrate_over_knots<20>(breaks, f);
}

}  // namespace

AccelerationProfile acceleration_profile(const PotentialSpec& spec, const PhysicalParams& params, double p,
                                         AccelMode mode, const SamplingPolicy& policy) {
    AccelerationProfile prof;
    prof.mode = mode;
    prof.p = p;
    const Window window = policy.window.value_or(spec.support_window());
    const double z_lo = std::min(window.lo, 0.0), z_hi = std::max(window.hi, 0.0);

    if (mode == AccelMode::exact) {
        auto traj = classical_trajectory(spec, params, p, policy);
        prof.signal = numerics::SampledSignal(traj.t, traj.a, policy.support_tol);
        const auto& map = *traj.map;
        // a dt = (a / v) dz along the path.
        prof.integral = integrate_in_z(
            spec, [&](double z) { return -spec.eval(z).dV / (params.m * map.velocity(z)); }, z_lo, z_hi);
        return prof;
    }
    if (mode != AccelMode::straight_line) throw ValidationError("acceleration_profile: mode must be exact or straight_line");

    params.validate();
    if (!(p > 0)) throw ValidationError("momentum p must be positive");
    const double dz = spec.length_scale() / static_cast<double>(policy.samples_per_scale);
    const long j_lo = static_cast<long>(std::floor(z_lo / dz));
    const long j_hi = static_cast<long>(std::ceil(z_hi / dz));
    std::vector<double> t, a;
    t.reserve(static_cast<std::size_t>(j_hi - j_lo + 1));
    a.reserve(t.capacity());
    for (long j = j_lo; j <= j_hi; ++j) {
        const double z = static_cast<double>(j) * dz;
        t.push_back(params.m * z / p);
        a.push_back(-spec.eval(z).dV / params.m);
    }
    prof.signal = numerics::SampledSignal(std::move(t), std::move(a), policy.support_tol);
    // a dt = -V'(z) dz / p on the straight line z = p t / m
    prof.integral = integrate_in_z(
        spec, [&](double z) { return -spec.eval(z).dV / p; }, p * prof.signal.front() / params.m,
        p * prof.signal.back() / params.m);
    return prof;
}

AccelerationProfile profile_from_signal(numerics::SampledSignal signal, double p) {
    AccelerationProfile prof;
    prof.mode = AccelMode::sampled;
    prof.p = p;
    numerics::CubicSpline<double> s(signal.grid(), signal.values());
    prof.integral = numerics::integrate_over_knots(signal.grid(), [&](double t) { return s(t); });
    prof.signal = std::move(signal);
    return prof;
}

}  // namespace radlab::potentials
