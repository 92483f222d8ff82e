#include "radlab/numerics/fourier.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace radlab::numerics {

std::array<std::complex<double>, 5> oscillatory_moments(double k, double h) {
    using cd = std::complex<double>;
    std::array<cd, 5> m{};
    const double kh = k * h;
    if (std::abs(kh) <= 1.0) {
        // Power series in (ikh); 24 terms reach double precision for |kh| <= 1.
        cd term_base{1.0, 0.0};  // (ikh)^j / j!
        std::array<cd, 5> acc{};
        for (int j = 0; j < 24; ++j) {
            for (int order = 0; order < 5; ++order) acc[order] += term_base / static_cast<double>(order + j + 1);
            term_base *= cd{0.0, kh} / static_cast<double>(j + 1);
        }
        double hp = h;
        for (int order = 0; order < 5; ++order) {
            m[order] = acc[order] * hp;
            hp *= h;
        }
        return m;
    }
    const cd ik{0.0, k};
    const cd e = std::polar(1.0, kh);
    m[0] = (e - 1.0) / ik;
    double hp = 1.0;
    for (int order = 1; order < 5; ++order) {
        hp *= h;
        m[order] = (hp * e - static_cast<double>(order) * m[order - 1]) / ik;
    }
    return m;
}

template <typename T>
FourierTransformer<T>::FourierTransformer(const BasicSampledSignal<T>& signal)
    : spline_(signal.grid(), signal.values(), SplineBoundary::not_a_knot),
      k_limit_(2 * std::numbers::pi / (kMinSamplesPerOscillation * signal.max_spacing())) {}

template <typename T>
FourierValue FourierTransformer<T>::evaluate(double k) const {
    using cd = std::complex<double>;
    if (std::abs(k) > k_limit_ * (1 + 1e-12))
        throw ResolutionError("sample grid too coarse for k = " + std::to_string(k) +
                              " (fewer than 8 samples per oscillation; limit " + std::to_string(k_limit_) +
                              ")");
    const auto& knots = spline_.knots();
    cd value{}, moment{};
    // Nearly uniform grids differ panel to panel only by roundoff in h. Since
    // dM_n/dh = h^n e^{ikh}, a first-order update from a cached h0 is exact to
    // O((dh/h0)^2) and avoids recomputing the moments.
    double h0 = -1;
    std::array<cd, 5> m0{}, m{};
    std::array<double, 5> h0_pow{};
    cd e0{}, step{};
    cd phase{};
    for (std::size_t j = 0; j < spline_.panels(); ++j) {
        const double h = knots[j + 1] - knots[j];
        const double dh = h - h0;
        if (std::abs(dh) > 1e-9 * h0) {
            h0 = h;
            m0 = oscillatory_moments(k, h);
            e0 = std::polar(1.0, k * h);
            h0_pow[0] = 1;
            for (int n = 1; n < 5; ++n) h0_pow[n] = h0_pow[n - 1] * h;
            m = m0;
            step = e0;
        } else if (dh != 0) {
            for (int n = 0; n < 5; ++n) m[n] = m0[n] + dh * h0_pow[n] * e0;
            step = e0 * cd(1.0, k * dh);
        } else {
            m = m0;
            step = e0;
        }
        // e^{ik t_j}, re-anchored every 32 panels to bound the recurrence drift
        if (j % 32 == 0) phase = std::polar(1.0, k * knots[j]);
        const auto& c = spline_.coeffs(j);
        const cd v = c[0] * m[0] + c[1] * m[1] + c[2] * m[2] + c[3] * m[3];
        const cd w = c[0] * m[1] + c[1] * m[2] + c[2] * m[3] + c[3] * m[4];
        value += phase * v;
        moment += phase * (knots[j] * v + w);
        phase *= step;
    }
    return {value, cd{0.0, 1.0} * moment};
}

template class FourierTransformer<double>;
template class FourierTransformer<std::complex<double>>;

FourierValue fourier_integral(const SampledSignal& signal, double k) {
    return FourierTransformer<double>(signal).evaluate(k);
}

FourierValue fourier_integral(const ComplexSignal& signal, double k) {
    return FourierTransformer<std::complex<double>>(signal).evaluate(k);
}

}  // namespace radlab::numerics
