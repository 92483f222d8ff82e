#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "radlab/error.hpp"

namespace radlab::numerics {

enum class SplineBoundary { not_a_knot, natural, clamped };

/// Piecewise cubic C^2 interpolant. On panel i, with u = x - x_i,
///   s(x) = c0 + c1 u + c2 u^2 + c3 u^3.
/// T may be real or complex; the knot abscissae are always real.
template <typename T>
class CubicSpline {
public:
    using Coeffs = std::array<T, 4>;

    CubicSpline() = default;

    CubicSpline(std::span<const double> x, std::span<const T> y,
                SplineBoundary boundary = SplineBoundary::not_a_knot, T slope_front = T{},
                T slope_back = T{})
        : x_(x.begin(), x.end()) {
        const std::size_t npts = x.size();
        if (npts < 2 || y.size() != npts) throw ValidationError("cubic spline needs >= 2 matching samples");
        for (std::size_t i = 1; i < npts; ++i)
            if (!(x[i] > x[i - 1])) throw ValidationError("cubic spline abscissae must increase strictly");
        if (npts < 4 && boundary == SplineBoundary::not_a_knot) boundary = SplineBoundary::natural;

        const std::size_t n = npts - 1;
        std::vector<double> h(n);
        for (std::size_t i = 0; i < n; ++i) h[i] = x[i + 1] - x[i];
        std::vector<T> m(npts, T{});  // second derivatives at knots

        if (n >= 2) {
            std::vector<double> sub, diag, sup;
            std::vector<T> rhs;
            auto slope = [&](std::size_t i) { return (y[i + 1] - y[i]) / h[i]; };
            std::size_t first = 1, last = n - 1;  // unknown M indices
            if (boundary == SplineBoundary::clamped) { first = 0; last = n; }
            const std::size_t count = last - first + 1;
            sub.assign(count, 0.0);
            diag.assign(count, 0.0);
            sup.assign(count, 0.0);
            rhs.assign(count, T{});
            for (std::size_t i = 1; i <= n - 1; ++i) {
                const std::size_t r = i - first;
                sub[r] = h[i - 1];
                diag[r] = 2 * (h[i - 1] + h[i]);
                sup[r] = h[i];
                rhs[r] = 6.0 * (slope(i) - slope(i - 1));
            }
            if (boundary == SplineBoundary::clamped) {
                diag[0] = 2 * h[0];
                sup[0] = h[0];
                rhs[0] = 6.0 * (slope(0) - slope_front);
                sub[count - 1] = h[n - 1];
                diag[count - 1] = 2 * h[n - 1];
                rhs[count - 1] = 6.0 * (slope_back - slope(n - 1));
            } else if (boundary == SplineBoundary::not_a_knot) {
                // M0 and Mn eliminated through continuity of the third derivative at x1, x_{n-1}.
                diag[0] += h[0] + h[0] * h[0] / h[1];
                sup[0] -= h[0] * h[0] / h[1];
                const double a = h[n - 2], b = h[n - 1];
                diag[count - 1] += b + b * b / a;
                sub[count - 1] -= b * b / a;
            }
            // Thomas algorithm.
            for (std::size_t r = 1; r < count; ++r) {
                const double w = sub[r] / diag[r - 1];
                diag[r] -= w * sup[r - 1];
                rhs[r] -= w * rhs[r - 1];
            }
            std::vector<T> sol(count);
            sol[count - 1] = rhs[count - 1] / diag[count - 1];
            for (std::size_t r = count - 1; r-- > 0;) sol[r] = (rhs[r] - sup[r] * sol[r + 1]) / diag[r];
            for (std::size_t r = 0; r < count; ++r) m[first + r] = sol[r];
            if (boundary == SplineBoundary::not_a_knot) {
                m[0] = m[1] * (1 + h[0] / h[1]) - m[2] * (h[0] / h[1]);
                const double a = h[n - 2], b = h[n - 1];
                m[n] = m[n - 1] * (1 + b / a) - m[n - 2] * (b / a);
            }
        } else if (boundary == SplineBoundary::clamped) {
            // Single panel: cubic Hermite through the end slopes.
            const T s = (y[1] - y[0]) / h[0];
            m[0] = (4.0 * (s - slope_front) - 2.0 * (slope_back - s)) / h[0];
            m[1] = (4.0 * (slope_back - s) - 2.0 * (s - slope_front)) / h[0];
        }

        coeffs_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double hi = h[i];
            coeffs_[i] = {y[i], (y[i + 1] - y[i]) / hi - hi * (2.0 * m[i] + m[i + 1]) / 6.0, m[i] / 2.0,
                          (m[i + 1] - m[i]) / (6.0 * hi)};
        }
    }

    std::size_t panels() const noexcept { return coeffs_.size(); }
    const std::vector<double>& knots() const noexcept { return x_; }
    const Coeffs& coeffs(std::size_t panel) const { return coeffs_[panel]; }
    double front() const { return x_.front(); }
    double back() const { return x_.back(); }

    /// Panel index containing x; points outside the knot range map to the end panels.
    std::size_t locate(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t idx = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        return std::min(idx, coeffs_.size() - 1);
    }

    T operator()(double x) const {
        const std::size_t i = locate(x);
        const double u = x - x_[i];
        const auto& c = coeffs_[i];
        return c[0] + u * (c[1] + u * (c[2] + u * c[3]));
    }

    T derivative(double x) const {
        const std::size_t i = locate(x);
        const double u = x - x_[i];
        const auto& c = coeffs_[i];
        return c[1] + u * (2.0 * c[2] + 3.0 * u * c[3]);
    }

    T second_derivative(double x) const {
        const std::size_t i = locate(x);
        const double u = x - x_[i];
        const auto& c = coeffs_[i];
        return 2.0 * c[2] + 6.0 * u * c[3];
    }

private:
    std::vector<double> x_;
    std::vector<Coeffs> coeffs_;
};

/// Fritsch-Carlson monotone piecewise cubic Hermite interpolant (real data).
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n) throw ValidationError("monotone cubic needs >= 2 matching samples");
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!(x_[i + 1] > x_[i])) throw ValidationError("monotone cubic abscissae must increase strictly");
            delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        }
        d_.assign(n, 0.0);
        d_.front() = delta.front();
        d_.back() = delta.back();
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0) continue;
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            const double w0 = 2 * h1 + h0, w1 = h1 + 2 * h0;
            d_[i] = (w0 + w1) / (w0 / delta[i - 1] + w1 / delta[i]);  // weighted harmonic mean
        }
    }

    double operator()(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        i = std::min(i, x_.size() - 2);
        const double h = x_[i + 1] - x_[i];
        const double s = (x - x_[i]) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
        return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
    }

private:
    std::vector<double> x_, y_, d_;
};

}  // namespace radlab::numerics
