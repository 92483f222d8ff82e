#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>

#include <boost/math/quadrature/gauss.hpp>

namespace radlab::numerics {

inline constexpr double kDefaultQuadTol = 1e-10;

struct QuadOptions {
    double tol = kDefaultQuadTol;
    /// Length scale of exponential decay; required when a limit is infinite.
    double decay_scale = 0;
    unsigned max_depth = 40;
};

struct QuadResult {
    double value = 0;
    double error = 0;
};

/// Adaptive Gauss-Kronrod integration of f over [a, b]. Either limit may be
/// infinite provided opts.decay_scale > 0; the half-line is mapped onto [0, 1)
/// through x = a + L u / (1 - u). Throws QuadratureError (carrying the best
/// estimate and its error bound) when |error| > tol (1 + |value|) after the
/// maximum refinement depth.
QuadResult quad_adaptive_detailed(const std::function<double(double)>& f, double a, double b,
                                  const QuadOptions& opts = {});

double quad_adaptive(const std::function<double(double)>& f, double a, double b,
                     double tol = kDefaultQuadTol, double decay_scale = 0);

/// Fixed N-point Gauss-Legendre rule on [a, b].
template <unsigned N = 20, typename F>
double gauss_legendre(F&& f, double a, double b) {
    return boost::math::quadrature::gauss<double, N>::integrate(std::forward<F>(f), a, b);
}

/// Sum of N-point Gauss-Legendre rules over consecutive panels [x_i, x_{i+1}].
/// Exact for piecewise polynomials of degree < 2N whose breaks are the knots.
template <unsigned N = 8, typename F>
double integrate_over_knots(std::span<const double> knots, F&& f) {
    double sum = 0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) sum += gauss_legendre<N>(f, knots[i], knots[i + 1]);
    return sum;
}

}  // namespace radlab::numerics
