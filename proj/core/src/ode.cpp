#include "radlab/numerics/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "radlab/error.hpp"

namespace radlab::numerics {
namespace {

// Dormand-Prince 5(4) tableau with Hairer-Wanner dense-output weights.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

}  // namespace

std::size_t OdeSolution::locate(double t) const {
    const bool forward = t_end_ >= t_begin_;
    std::size_t idx;
    if (forward) {
        auto it = std::upper_bound(step_start_.begin(), step_start_.end(), t);
        idx = it == step_start_.begin() ? 0 : static_cast<std::size_t>(it - step_start_.begin()) - 1;
    } else {
        auto it = std::upper_bound(step_start_.begin(), step_start_.end(), t, std::greater<>());
        idx = it == step_start_.begin() ? 0 : static_cast<std::size_t>(it - step_start_.begin()) - 1;
    }
    return idx;
}

double OdeSolution::component(double t, std::size_t i) const {
    const double lo = std::min(t_begin_, t_end_), hi = std::max(t_begin_, t_end_);
    if (t < lo - 1e-12 * (1 + std::abs(lo)) || t > hi + 1e-12 * (1 + std::abs(hi)))
        throw DomainError("ODE solution queried outside its span at t = " + std::to_string(t));
    if (step_start_.empty()) return final_state_[i];
    const std::size_t s = locate(t);
    const double theta = (t - step_start_[s]) / step_size_[s];
    const double theta1 = 1 - theta;
    const double* r = dense_.data() + 5 * dim_ * s;
    const double r1 = r[i], r2 = r[dim_ + i], r3 = r[2 * dim_ + i], r4 = r[3 * dim_ + i],
                 r5 = r[4 * dim_ + i];
    return r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
}

std::vector<double> OdeSolution::operator()(double t) const {
    std::vector<double> out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) out[i] = component(t, i);
    return out;
}

OdeSolution integrate_ode(const OdeRhs& rhs, std::vector<double> y, double t0, double t1,
                          const OdeOptions& opts) {
    if (!(opts.rel_tol > 1e-14 && opts.rel_tol < 1e-2))
        throw ValidationError("ODE rel_tol must lie in (1e-14, 1e-2)");
    const std::size_t n = y.size();
    if (n == 0) throw ValidationError("ODE state must be non-empty");
    if (!opts.abs_tol_components.empty() && opts.abs_tol_components.size() != n)
        throw ValidationError("ODE abs_tol_components length must match the state");

    OdeSolution sol;
    sol.dim_ = n;
    sol.t_begin_ = t0;
    sol.t_end_ = t1;
    if (t0 == t1) {
        sol.final_state_ = y;
        return sol;
    }
    const double dir = t1 > t0 ? 1.0 : -1.0;
    auto atol = [&](std::size_t i) {
        return opts.abs_tol_components.empty() ? opts.abs_tol : opts.abs_tol_components[i];
    };

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);
    auto eval = [&](double t, const std::vector<double>& state, std::vector<double>& out) {
        rhs(t, state, out);
        ++sol.rhs_evals_;
    };

    double t = t0;
    eval(t, y, k1);

    double h = opts.initial_step;
    if (!(h > 0)) {
        // Hairer's starting-step heuristic.
        double d0 = 0, dd1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = atol(i) + opts.rel_tol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            dd1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / n);
        dd1 = std::sqrt(dd1 / n);
        double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
        h0 = std::min(h0, std::abs(t1 - t0));
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + dir * h0 * k1[i];
        eval(t + dir * h0, ytmp, k2);
        double d2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = atol(i) + opts.rel_tol * std::abs(y[i]);
            d2 += ((k2[i] - k1[i]) / sc) * ((k2[i] - k1[i]) / sc);
        }
        d2 = std::sqrt(d2 / n) / h0;
        const double dm = std::max(dd1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        h = std::min(100 * h0, h1);
    }
    h = std::min({h, opts.max_step, std::abs(t1 - t0)});

    double err_old = 1e-4;
    bool last_rejected = false;
    std::size_t steps = 0;
    while (dir * (t1 - t) > 0) {
        if (++steps > opts.max_steps) throw StepSizeError("ODE step budget exhausted", t);
        if (h < 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
            throw StepSizeError("ODE step size underflow", t);
        bool final_step = false;
        if (dir * (t + dir * h - t1) >= 0) {
            h = std::abs(t1 - t);
            final_step = true;
        }
        const double hs = dir * h;

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
        eval(t + c2 * hs, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        eval(t + c3 * hs, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        eval(t + c4 * hs, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        eval(t + c5 * hs, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        eval(t + hs, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        eval(t + hs, ynew, k7);

        double err = 0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = atol(i) + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (e / sc) * (e / sc);
            finite = finite && std::isfinite(ynew[i]);
        }
        err = std::sqrt(err / n);
        if (!finite || !std::isfinite(err)) {
            h *= 0.2;
            last_rejected = true;
            ++sol.rejected_;
            continue;
        }

        if (err <= 1.0) {
            // Continuous extension coefficients for this step.
            const std::size_t base = sol.dense_.size();
            sol.dense_.resize(base + 5 * n);
            double* r = sol.dense_.data() + base;
            for (std::size_t i = 0; i < n; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = hs * k1[i] - ydiff;
                r[i] = y[i];
                r[n + i] = ydiff;
                r[2 * n + i] = bspl;
                r[3 * n + i] = ydiff - hs * k7[i] - bspl;
                r[4 * n + i] =
                    hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            sol.step_start_.push_back(t);
            sol.step_size_.push_back(hs);

            t = final_step ? t1 : t + hs;
            y.swap(ynew);
            k1.swap(k7);
            for (std::size_t i = 0; i < n; ++i)
                if (std::abs(y[i]) > opts.overflow_guard)
                    throw StepSizeError("ODE state exceeded overflow guard (runaway growth)", t);

            // PI step-size controller.
            const double e = std::max(err, 1e-10);
            double fac = 0.9 * std::pow(e, -0.17) * std::pow(err_old, 0.04);
            fac = std::clamp(fac, 0.2, 10.0);
            if (last_rejected) fac = std::min(fac, 1.0);
            h = std::min(h * fac, opts.max_step);
            err_old = e;
            last_rejected = false;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            last_rejected = true;
            ++sol.rejected_;
        }
    }
    sol.final_state_ = y;
    return sol;
}

}  // namespace radlab::numerics
