#include <cmath>
#include <vector>

#include "doctest.h"
#include "radlab/error.hpp"
#include "radlab/lorentz_dirac.hpp"

using namespace radlab;
using namespace radlab::lorentz_dirac;

namespace {

PhysicalParams fine_structure() {
    PhysicalParams p;
    p.m = 1.0;
    p.alpha = 1.0 / 137.036;
    return p;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return x;
}

}  // namespace

TEST_CASE("zero runaway amplitude") {
    const auto params = fine_structure();
    const auto tau = linspace(0, 5 * params.tau0(), 11);
    auto r = runaway_residual(0.0, params, tau);
    for (double b : r.solution.beta) CHECK(b == 0.0);
    CHECK(r.residual == 0.0);
}

TEST_CASE("runaway grows by e^5 over five tau0") {
    const auto params = fine_structure();
    const double tau0 = params.tau0();
    const auto tau = linspace(0, 5 * tau0, 501);
    auto r = runaway_residual(1e-6, params, tau);
    const auto& beta = r.solution.beta;
    CHECK(std::abs(beta.back() / beta.front() - std::exp(5.0)) < 1e-10 * std::exp(5.0));
    double max_d = 0;
    for (double d : r.solution.dbeta) max_d = std::max(max_d, std::abs(d));
    CHECK(r.residual <= 1e-12 * max_d);
    for (std::size_t i = 1; i < beta.size(); ++i) {
        CHECK(beta[i] / beta[0] > 0);
        CHECK(std::abs(beta[i]) > std::abs(beta[i - 1]));
    }
    CHECK(log_slope(tau, beta, 0, 5 * tau0) == doctest::Approx(1 / tau0).epsilon(1e-6));
}

TEST_CASE("forward integration reproduces the runaway") {
    const auto params = fine_structure();
    const double tau0 = params.tau0(), beta0 = 1e-6;
    const auto tau = linspace(0, 5 * tau0, 51);
    auto num = integrate_rapidity(StepForce{0.0, 0.0}, params, beta0, beta0 / tau0, tau);
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const double exact = beta0 * std::exp(tau[i] / tau0);
        CHECK(std::abs(num.beta[i] - exact) < 1e-9 * exact);
    }
    CHECK(log_slope(num.tau, num.beta, 0, 5 * tau0) == doctest::Approx(1 / tau0).epsilon(1e-6));
}

TEST_CASE("forward integration of a driven particle runs away") {
    // Starting at rest with the force on, the initial-value problem picks up the
    // homogeneous exponential: |beta'| grows like e^{tau / tau0}.
    const auto params = fine_structure();
    const double tau0 = params.tau0();
    const auto tau = linspace(0, 8 * tau0, 81);
    auto num = integrate_rapidity(StepForce{1.0, -1.0}, params, 0.0, 0.0, tau);
    // closed form: beta' = (F/m)(1 - e^{tau/tau0})
    for (std::size_t i = 0; i < tau.size(); ++i)
        CHECK(num.dbeta[i] == doctest::Approx(1.0 - std::exp(tau[i] / tau0)).epsilon(1e-8));
}

TEST_CASE("runaway grid guard") {
    const auto params = fine_structure();
    const auto tau = linspace(0, 11 * params.tau0(), 5);
    CHECK_THROWS_AS(runaway_residual(1.0, params, tau), DomainError);
    PhysicalParams free = params;
    free.alpha = 0;
    CHECK_THROWS_AS(runaway_residual(1.0, free, linspace(0, 1, 3)), ValidationError);
}

TEST_CASE("zero force gives zero causal solution") {
    const auto params = fine_structure();
    const auto tau = linspace(-10 * params.tau0(), 10 * params.tau0(), 41);
    auto sol = causal_solution(StepForce{0.0, 0.0}, params, tau);
    for (std::size_t i = 0; i < tau.size(); ++i) {
        CHECK(sol.beta[i] == 0.0);
        CHECK(sol.dbeta[i] == 0.0);
    }
}

TEST_CASE("step force: preacceleration e^{tau/tau0} before onset") {
    const auto params = fine_structure();
    const double tau0 = params.tau0(), F = 0.3;
    ForceProfile step = StepForce{F, 0.0};
    CHECK(kernel_force(step, params, -3 * tau0) == doctest::Approx(F * std::exp(-3.0)).epsilon(1e-8));
    CHECK(kernel_force(step, params, 0.0) == doctest::Approx(F).epsilon(1e-12));
    CHECK(kernel_force(step, params, 2 * tau0) == doctest::Approx(F).epsilon(1e-12));

    const auto tau = linspace(-5 * tau0, -tau0, 81);
    auto sol = causal_solution(step, params, tau);
    CHECK(log_slope(sol.tau, sol.dbeta, -5 * tau0, -tau0) == doctest::Approx(1 / tau0).epsilon(1e-6));
    CHECK(params.m * sol.dbeta.back() > 0);  // at tau = -tau0, before the force acts
}

TEST_CASE("box force: closed-form kernel and total rapidity change") {
    const auto params = fine_structure();
    const double tau0 = params.tau0(), F = -0.7, T = 50 * tau0;
    ForceProfile box = BoxForce{F, 0.0, T};
    auto exact = [&](double tau) {
        if (tau < 0) return F * std::exp(tau / tau0) * (1 - std::exp(-T / tau0));
        if (tau < T) return F * (1 - std::exp((tau - T) / tau0));
        return 0.0;
    };
    for (double x : {-8.0, -1.0, 0.0, 0.5, 25.0, 49.9, 50.0, 53.0})
        CHECK(std::abs(kernel_force(box, params, x * tau0) - exact(x * tau0)) < 1e-12 * std::abs(F));

    const auto tau = linspace(-30 * tau0, T + 30 * tau0, 441);
    auto sol = causal_solution(box, params, tau);
    const double dbeta = sol.beta.back() - sol.beta.front();
    CHECK(dbeta == doctest::Approx(F * T / params.m).epsilon(1e-8));
}

TEST_CASE("causal solution satisfies the rapidity equation") {
    const auto params = fine_structure();
    const double tau0 = params.tau0();
    SampledForce pulse;
    for (double x = -20; x <= 20; x += 0.05) {
        pulse.tau.push_back(x * tau0);
        pulse.F.push_back(0.2 * std::exp(-x * x / 8));
    }
    const auto tau = linspace(-40 * tau0, 40 * tau0, 1601);
    auto sol = causal_solution(pulse, params, tau);
    const double h = tau[1] - tau[0];
    double worst = 0, scale = 0;
    for (std::size_t i = 1; i + 1 < tau.size(); ++i) {
        const double d2 = (sol.dbeta[i + 1] - sol.dbeta[i - 1]) / (2 * h);
        const double lhs = params.m * sol.dbeta[i] - params.m * tau0 * d2;
        worst = std::max(worst, std::abs(lhs - force_value(pulse, tau[i])));
        scale = std::max(scale, std::abs(force_value(pulse, tau[i])));
    }
    CHECK(worst < 1e-3 * scale);

    // beta against the Simpson integral of beta'
    double cum = 0, beta_err = 0;
    for (std::size_t i = 2; i < tau.size(); i += 2) {
        cum += h / 3 * (sol.dbeta[i - 2] + 4 * sol.dbeta[i - 1] + sol.dbeta[i]);
        beta_err = std::max(beta_err, std::abs(cum - sol.beta[i]));
    }
    CHECK(beta_err < 1e-7 * std::abs(sol.beta.back()));
    // no runaway after the pulse
    CHECK(std::abs(sol.dbeta.back()) < 1e-12);
}

TEST_CASE("causal solution depends only on the future force") {
    const auto params = fine_structure();
    const double tau0 = params.tau0();
    SampledForce a, b;
    for (double x = -10; x <= 10; x += 0.25) {
        a.tau.push_back(x * tau0);
        b.tau.push_back(x * tau0);
        a.F.push_back(std::sin(x));
        b.F.push_back(x < 0 ? 5.0 * std::cos(3 * x) : std::sin(x));
    }
    const auto tau = linspace(0, 10 * tau0, 21);
    auto sa = causal_solution(a, params, tau);
    auto sb = causal_solution(b, params, tau);
    for (std::size_t i = 0; i < tau.size(); ++i) CHECK(sa.dbeta[i] == sb.dbeta[i]);
}

TEST_CASE("tau0 for an electron") {
    const auto params = fine_structure();
    const double s = tau0_seconds(params);
    CHECK(s == doctest::Approx(6.3e-24).epsilon(0.01));
    CHECK(s >= 1e-24);
    CHECK(s < 1e-23);
}

TEST_CASE("invalid force profiles") {
    const auto params = fine_structure();
    const auto tau = linspace(0, 1, 3);
    CHECK_THROWS_AS(causal_solution(BoxForce{1.0, 0.0, 0.0}, params, tau), ValidationError);
    CHECK_THROWS_AS(causal_solution(SampledForce{{0.0}, {1.0}}, params, tau), ValidationError);
    CHECK_THROWS_AS(causal_solution(StepForce{1.0, 0.0}, params, std::vector<double>{0.0, 0.0}), ValidationError);
}
