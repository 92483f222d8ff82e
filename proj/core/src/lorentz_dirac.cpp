#include "radlab/lorentz_dirac.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "radlab/error.hpp"
#include "radlab/numerics/ode.hpp"
#include "radlab/numerics/quadrature.hpp"

namespace radlab::lorentz_dirac {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_grid(std::span<const double> tau) {
    if (tau.size() < 2) throw ValidationError("tau grid needs at least 2 points");
    for (std::size_t i = 1; i < tau.size(); ++i)
        if (!(tau[i] > tau[i - 1])) throw ValidationError("tau grid must increase strictly");
}

void require_radiation(const PhysicalParams& params) {
    params.validate();
    if (!(params.alpha > 0)) throw ValidationError("radiation reaction needs alpha > 0");
}

void check_force(const ForceProfile& force) {
    std::visit(overloaded{[](const StepForce& f) {
                              if (!std::isfinite(f.F) || !std::isfinite(f.onset))
                                  throw ValidationError("step force must be finite");
                          },
                          [](const BoxForce& f) {
                              if (!std::isfinite(f.F) || !std::isfinite(f.onset) || !(f.duration > 0))
                                  throw ValidationError("box force needs finite F and duration > 0");
                          },
                          [](const SampledForce& f) {
                              if (f.tau.size() < 2 || f.tau.size() != f.F.size())
                                  throw ValidationError("sampled force needs >= 2 matching samples");
                              check_grid(f.tau);
                              for (double v : f.F)
                                  if (!std::isfinite(v)) throw ValidationError("sampled force must be finite");
                          }},
               force);
}

// Integral of F from a to b (a <= b).
double force_integral(const ForceProfile& force, double a, double b) {
    return std::visit(
        overloaded{[&](const StepForce& f) { return f.F * std::max(0.0, b - std::max(a, f.onset)); },
                   [&](const BoxForce& f) {
                       const double lo = std::max(a, f.onset), hi = std::min(b, f.onset + f.duration);
                       return f.F * std::max(0.0, hi - lo);
                   },
                   [&](const SampledForce& f) {
                       // piecewise linear: trapezoid over the knots inside (a, b) is exact
                       std::vector<double> pts{a};
                       for (double x : f.tau)
                           if (x > a && x < b) pts.push_back(x);
                       pts.push_back(b);
                       double sum = 0;
                       for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                           sum += 0.5 * (pts[i + 1] - pts[i]) *
                                  (force_value(force, pts[i]) + force_value(force, pts[i + 1]));
                       return sum;
                   }},
        force);
}

}  // namespace

double force_value(const ForceProfile& force, double tau) {
    return std::visit(overloaded{[&](const StepForce& f) { return tau >= f.onset ? f.F : 0.0; },
                                 [&](const BoxForce& f) {
                                     return tau >= f.onset && tau < f.onset + f.duration ? f.F : 0.0;
                                 },
                                 [&](const SampledForce& f) {
                                     if (tau <= f.tau.front()) return f.F.front();
                                     if (tau >= f.tau.back()) return f.F.back();
                                     auto it = std::upper_bound(f.tau.begin(), f.tau.end(), tau);
                                     const std::size_t i = static_cast<std::size_t>(it - f.tau.begin()) - 1;
                                     const double s = (tau - f.tau[i]) / (f.tau[i + 1] - f.tau[i]);
                                     return f.F[i] + s * (f.F[i + 1] - f.F[i]);
                                 }},
                      force);
}

std::vector<double> force_breakpoints(const ForceProfile& force) {
    return std::visit(overloaded{[](const StepForce& f) { return std::vector<double>{f.onset}; },
                                 [](const BoxForce& f) {
                                     return std::vector<double>{f.onset, f.onset + f.duration};
                                 },
                                 [](const SampledForce& f) { return f.tau; }},
                      force);
}

std::string describe(const ForceProfile& force) {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{[&](const StepForce& f) { os << "step(F=" << f.F << ", onset=" << f.onset << ")"; },
                          [&](const BoxForce& f) {
                              os << "box(F=" << f.F << ", onset=" << f.onset << ", duration=" << f.duration
                                 << ")";
                          },
                          [&](const SampledForce& f) { os << "sampled(" << f.tau.size() << " points)"; }},
               force);
    return os.str();
}

RunawayResult runaway_residual(double beta0, const PhysicalParams& params, std::span<const double> tau_grid) {
    require_radiation(params);
    check_grid(tau_grid);
    const double tau0 = params.tau0();
    if (tau_grid.back() - tau_grid.front() > 10 * tau0)
        throw DomainError("runaway grid spans more than 10 tau0; exp growth would overflow the guard");

    RunawayResult out;
    auto& sol = out.solution;
    sol.kind = SolutionKind::runaway;
    sol.source = "none";
    sol.tau.assign(tau_grid.begin(), tau_grid.end());
    for (double tau : tau_grid) {
        const double beta = beta0 * std::exp(tau / tau0);
        const double d1 = beta / tau0, d2 = beta / (tau0 * tau0);
        sol.beta.push_back(beta);
        sol.dbeta.push_back(d1);
        out.residual = std::max(out.residual, std::abs(d1 - tau0 * d2));
    }
    return out;
}

RapiditySolution integrate_rapidity(const ForceProfile& force, const PhysicalParams& params, double beta0,
                                    double dbeta0, std::span<const double> tau_grid, double rel_tol) {
    require_radiation(params);
    check_force(force);
    check_grid(tau_grid);
    const double tau0 = params.tau0(), m = params.m;
    auto rhs = [&](double tau, std::span<const double> y, std::span<double> d) {
        d[0] = y[1];
        d[1] = (y[1] - force_value(force, tau) / m) / tau0;
    };
    numerics::OdeOptions opts;
    opts.rel_tol = rel_tol;
    opts.abs_tol = 0;
    opts.abs_tol_components = {1e-30 + 1e-3 * rel_tol * std::abs(beta0),
                               1e-30 + 1e-3 * rel_tol * std::abs(dbeta0)};
    opts.max_step = (tau_grid.back() - tau_grid.front()) / 16;
    auto path = numerics::integrate_ode(rhs, {beta0, dbeta0}, tau_grid.front(), tau_grid.back(), opts);

    RapiditySolution sol;
    sol.kind = SolutionKind::runaway;
    sol.source = describe(force);
    sol.tau.assign(tau_grid.begin(), tau_grid.end());
    for (double tau : tau_grid) {
        const auto y = path(tau);
        sol.beta.push_back(y[0]);
        sol.dbeta.push_back(y[1]);
    }
    return sol;
}

double kernel_force(const ForceProfile& force, const PhysicalParams& params, double tau, double tol) {
    const double tau0 = params.tau0();
    // split s at the force's breakpoints ahead of tau
    std::vector<double> cuts{0.0};
    for (double b : force_breakpoints(force))
        if (b > tau) cuts.push_back((b - tau) / tau0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto integrand = [&](double s) { return std::exp(-s) * force_value(force, tau + tau0 * s); };
    double sum = 0;
    // beyond s ~ 745 the weight underflows
    constexpr double s_far = 745.0;
    for (std::size_t i = 0; i + 1 < cuts.size() && cuts[i] < s_far; ++i) {
        const double hi = std::min(cuts[i + 1], s_far);
        // linear or constant pieces times e^{-s}: high-order GL is enough on short panels
        if (hi - cuts[i] < 1.0)
            sum += numerics::gauss_legendre<20>(integrand, cuts[i], hi);
        else
            sum += numerics::quad_adaptive(integrand, cuts[i], hi, tol);
    }
    if (cuts.back() < s_far) sum += numerics::quad_adaptive(integrand, cuts.back(), INFINITY, tol, 1.0);
    return sum;
}

RapiditySolution causal_solution(const ForceProfile& force, const PhysicalParams& params,
                                 std::span<const double> tau_grid, double tol) {
    require_radiation(params);
    check_force(force);
    check_grid(tau_grid);
    const double tau0 = params.tau0(), m = params.m;

    RapiditySolution sol;
    sol.kind = SolutionKind::causal;
    sol.source = describe(force);
    sol.tau.assign(tau_grid.begin(), tau_grid.end());
    sol.dbeta.reserve(tau_grid.size());
    for (double tau : tau_grid) sol.dbeta.push_back(kernel_force(force, params, tau, tol) / m);

    // Integrating m beta' - m tau0 beta'' = F from the first sample:
    //   beta(tau) = tau0 (beta'(tau) - beta'(a)) + (1/m) int_a^tau F.
    const double a = tau_grid.front();
    sol.beta.reserve(tau_grid.size());
    sol.beta.push_back(0.0);
    double impulse = 0;
    for (std::size_t i = 1; i < tau_grid.size(); ++i) {
        impulse += force_integral(force, tau_grid[i - 1], tau_grid[i]);
        sol.beta.push_back(tau0 * (sol.dbeta[i] - sol.dbeta[0]) + impulse / m);
    }
    return sol;
}

double log_slope(std::span<const double> x, std::span<const double> y, double lo, double hi) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo || x[i] > hi) continue;
        if (y[i] == 0) throw DomainError("log_slope: zero sample in fit range");
        const double ly = std::log(std::abs(y[i]));
        n += 1;
        sx += x[i];
        sy += ly;
        sxx += x[i] * x[i];
        sxy += x[i] * ly;
    }
    if (n < 2) throw DomainError("log_slope: fewer than 2 samples in fit range");
    const double xm = sx / n;
    return (sxy - n * xm * (sy / n)) / (sxx - n * xm * xm);
}

double tau0_seconds(const PhysicalParams& params) { return params.tau0() * kHbarOverElectronRestEnergy; }

}  // namespace radlab::lorentz_dirac
