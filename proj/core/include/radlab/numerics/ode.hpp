#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace radlab::numerics {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// Per-component absolute tolerances; overrides abs_tol when non-empty.
    std::vector<double> abs_tol_components;
    double initial_step = 0;  // 0: automatic
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 2'000'000;
    /// Any |y_i| above this aborts the integration (runaway growth).
    double overflow_guard = 1e150;
};

/// Dense solution of an initial-value problem, queryable anywhere in the span.
class OdeSolution {
public:
    std::size_t dimension() const noexcept { return dim_; }
    double t_begin() const noexcept { return t_begin_; }
    double t_end() const noexcept { return t_end_; }
    std::size_t accepted_steps() const noexcept { return step_start_.size(); }
    std::size_t rejected_steps() const noexcept { return rejected_; }
    std::size_t rhs_evaluations() const noexcept { return rhs_evals_; }

    std::vector<double> operator()(double t) const;
    double component(double t, std::size_t i) const;
    const std::vector<double>& final_state() const noexcept { return final_state_; }

private:
    friend OdeSolution integrate_ode(const OdeRhs&, std::vector<double>, double, double, const OdeOptions&);

    std::size_t locate(double t) const;

    std::size_t dim_ = 0;
    double t_begin_ = 0, t_end_ = 0;
    std::vector<double> step_start_;
    std::vector<double> step_size_;
    std::vector<double> dense_;  // 5 * dim_ continuous-extension coefficients per step
    std::vector<double> final_state_;
    std::size_t rejected_ = 0;
    std::size_t rhs_evals_ = 0;
};

/// Dormand-Prince 5(4) with step-size control and 4th-order dense output.
/// Integrates forward or backward (t1 < t0). Throws StepSizeError naming the
/// failure time on step-size underflow, overflow-guard breach or step budget exhaustion.
OdeSolution integrate_ode(const OdeRhs& rhs, std::vector<double> state0, double t0, double t1,
                          const OdeOptions& opts = {});

}  // namespace radlab::numerics
