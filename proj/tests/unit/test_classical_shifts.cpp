#include <cmath>
#include <vector>

#include "doctest.h"
#include "radlab/classical_shifts.hpp"
#include "radlab/error.hpp"

using namespace radlab;
using namespace radlab::classical_shifts;
using namespace radlab::potentials;

namespace {

PhysicalParams params_with(double alpha) {
    PhysicalParams p;
    p.m = 1.0;
    p.alpha = alpha;
    return p;
}

double max_abs(const std::vector<double>& x) {
    double m = 0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

AccelerationProfile gaussian_pulse(double a0, double t0, double sigma) {
    std::vector<double> t, a;
    const double h = sigma / 64;
    for (int i = -8 * 64; i <= 8 * 64; ++i) {
        const double x = t0 + i * h;
        t.push_back(x);
        a.push_back(a0 * std::exp(-(x - t0) * (x - t0) / (2 * sigma * sigma)));
    }
    return profile_from_signal(numerics::SampledSignal(t, a), 1.0);
}

double route_gap(const PotentialSpec& spec, const PhysicalParams& params, double p) {
    auto traj = classical_trajectory(spec, params, p);
    auto ode = shift_ode(traj, Theory::larmor, params);
    auto accel = acceleration_profile(spec, params, p, AccelMode::exact);
    const double closed = larmor_shift_closed_form(accel, default_p_bar(traj), params);
    return std::abs(ode.delta_z_at_0 - closed);
}

}  // namespace

TEST_CASE("free particle is not shifted") {
    const auto params = params_with(0.01);
    auto traj = classical_trajectory(PotentialSpec(GaussianBump{0.0, 1.0, 0.0}), params, 1.0);
    for (auto theory : {Theory::lorentz_dirac, Theory::larmor}) {
        auto r = shift_ode(traj, theory, params);
        CHECK(max_abs(r.delta_z) == 0.0);
        CHECK(max_abs(r.delta_v) == 0.0);
    }
}

TEST_CASE("energy difference accumulates to (2 alpha/3m) v a") {
    const auto params = params_with(1 / 137.036);
    const PotentialSpec specs[] = {PotentialSpec(SmoothStep{0.05, 1.0, -2.0}),
                                   PotentialSpec(GaussianBump{-0.1, 0.7, 1.0})};
    for (const auto& spec : specs) {
        auto traj = classical_trajectory(spec, params, 1.0);
        auto d = shift_difference(traj, params);
        double scale = 0, worst = 0;
        for (std::size_t i = 0; i < traj.t.size(); ++i) {
            const double expected = 2 * params.alpha / (3 * params.m) * traj.v[i] * traj.a[i];
            scale = std::max(scale, std::abs(expected));
            worst = std::max(worst, std::abs(d.ld.w[i] - d.larmor.w[i] - expected));
        }
        CHECK(worst <= 1e-9 * scale);
    }
}

TEST_CASE("both theories end with the same velocity") {
    const auto params = params_with(1 / 137.036);
    const double p = 1.0;
    auto traj = classical_trajectory(PotentialSpec(SmoothStep{0.05, 1.0, 0.0}), params, p);
    auto d = shift_difference(traj, params);
    CHECK(std::abs(d.ld.delta_v.back() - d.larmor.delta_v.back()) <= 1e-8 * p / params.m);
}

TEST_CASE("equal asymptotic velocities give no final shift difference") {
    const auto params = params_with(1 / 137.036);
    auto traj = classical_trajectory(PotentialSpec(GaussianBump{0.08, 1.0, 0.0}), params, 1.0);
    auto d = shift_difference(traj, params);
    CHECK(d.log_formula == 0.0);
    CHECK(d.lowest_order == 0.0);
    CHECK(std::abs(d.ode_diff) <= 1e-8 * std::abs(d.larmor.delta_z_final));
}

TEST_CASE("smooth step: final shift difference matches v_f ln(v_f/v_i)") {
    const auto params = params_with(1 / 137.036);
    for (double V0 : {0.01, -0.02, 0.05}) {
        auto traj = classical_trajectory(PotentialSpec(SmoothStep{V0, 1.3, 0.0}), params, 1.0);
        auto d = shift_difference(traj, params);
        CHECK(d.ode_diff == doctest::Approx(d.log_formula).epsilon(1e-3));
    }
}

TEST_CASE("log formula minus lowest order is second order in V0") {
    const auto params = params_with(1 / 137.036);
    auto gap = [&](double V0) {
        auto traj = classical_trajectory(PotentialSpec(SmoothStep{V0, 1.0, 0.0}), params, 1.0);
        auto d = shift_difference(traj, params);
        return std::abs(d.log_formula - d.lowest_order);
    };
    CHECK(gap(0.02) / gap(0.01) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("shift invariants: start at rest, dv = d(dz)/dt, linear in alpha") {
    const auto p1 = params_with(0.005), p2 = params_with(0.01);
    auto spec = PotentialSpec(SmoothStep{0.04, 0.8, -1.0});
    auto traj = classical_trajectory(spec, p1, 1.2);
    for (auto theory : {Theory::lorentz_dirac, Theory::larmor}) {
        auto r1 = shift_ode(traj, theory, p1);
        auto r2 = shift_ode(traj, theory, p2);
        const double zs = max_abs(r1.delta_z), vs = max_abs(r1.delta_v);
        CHECK(std::abs(r1.delta_z.front()) <= 1e-12 * zs);
        CHECK(std::abs(r1.delta_v.front()) <= 1e-12 * vs);
        for (std::size_t i = 0; i < traj.t.size(); ++i)
            CHECK(r2.delta_z[i] == doctest::Approx(2 * r1.delta_z[i]).epsilon(1e-12));
        double worst = 0;
        for (std::size_t i = 1; i + 1 < traj.t.size(); ++i) {
            const double fd = (r1.delta_z[i + 1] - r1.delta_z[i - 1]) / (traj.t[i + 1] - traj.t[i - 1]);
            worst = std::max(worst, std::abs(fd - r1.delta_v[i]));
        }
        CHECK(worst <= 1e-3 * vs);
    }
}

TEST_CASE("closed-form Larmor shift") {
    const auto params = params_with(1 / 137.036);
    SUBCASE("zero acceleration") {
        auto zero = profile_from_signal(numerics::SampledSignal({-2.0, -1.0, 0.0}, {0.0, 0.0, 0.0}), 1.0);
        CHECK(larmor_shift_closed_form(zero, 1.0, params) == 0.0);
    }
    SUBCASE("shifted Gaussian pulse") {
        const double a0 = 0.03, sigma = 0.9, t0 = -10 * sigma, pbar = 1.1;
        auto accel = gaussian_pulse(a0, t0, sigma);
        const double expected = 2 * params.alpha / (3 * pbar) * t0 * a0 * a0 * sigma * std::sqrt(M_PI);
        CHECK(larmor_shift_closed_form(accel, pbar, params) == doctest::Approx(expected).epsilon(1e-8));
    }
    SUBCASE("symmetric pulse: linear in the centre, vanishing as it reaches 0") {
        const double a0 = 0.03, sigma = 0.9;
        double prev = 0;
        for (double c : {-12.0, -10.0, -8.0}) {
            const double r = larmor_shift_closed_form(gaussian_pulse(a0, c * sigma, sigma), 1.0, params);
            CHECK(r < 0);
            if (prev != 0) CHECK(std::abs(r) < std::abs(prev));
            CHECK(r / c == doctest::Approx(2 * params.alpha / 3 * a0 * a0 * sigma * sigma * std::sqrt(M_PI)).epsilon(1e-8));
            prev = r;
        }
    }
    SUBCASE("support after t = 0 is rejected") {
        CHECK_THROWS_AS(larmor_shift_closed_form(gaussian_pulse(0.03, 0.0, 1.0), 1.0, params), DomainError);
    }
}

TEST_CASE("Larmor shift at t = 0 is negative after a pulse") {
    const auto params = params_with(1 / 137.036);
    for (const auto& spec : {PotentialSpec(GaussianBump{0.05, 1.0, -20.0}),
                             PotentialSpec(SmoothStep{-0.05, 1.0, -20.0})}) {
        auto traj = classical_trajectory(spec, params, 1.0);
        auto r = shift_ode(traj, Theory::larmor, params);
        CHECK(r.delta_z_at_0 < 0);
    }
}

TEST_CASE("time-domain and closed-form Larmor shifts converge at weak potential") {
    const auto params = params_with(1 / 137.036);
    for (auto make : {+[](double V0) { return PotentialSpec(GaussianBump{V0, 1.0, -20.0}); },
                      +[](double V0) { return PotentialSpec(SmoothStep{V0, 1.0, -20.0}); }}) {
        const double g1 = route_gap(make(0.04), params, 1.0);
        const double g2 = route_gap(make(0.02), params, 1.0);
        CHECK(g1 / g2 >= 4.0);
    }
}
