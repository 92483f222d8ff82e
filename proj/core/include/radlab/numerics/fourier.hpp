#pragma once

#include <array>
#include <complex>

#include "radlab/numerics/signal.hpp"
#include "radlab/numerics/spline.hpp"

namespace radlab::numerics {

struct FourierValue {
    std::complex<double> value;  // integral of s(t) e^{ikt} dt
    std::complex<double> d_dk;   // integral of i t s(t) e^{ikt} dt
};

/// Minimum samples per oscillation period accepted by the transformer.
inline constexpr double kMinSamplesPerOscillation = 8.0;

/// Fourier-type integrals of a compactly supported sampled signal.
///
/// The samples are interpolated by a not-a-knot cubic spline and each panel's
/// cubic times e^{ikt} is integrated in closed form (Filon-type), so accuracy
/// does not degrade with the number of oscillations across the window.
template <typename T>
class FourierTransformer {
public:
    explicit FourierTransformer(const BasicSampledSignal<T>& signal);

    FourierValue evaluate(double k) const;

    /// Largest |k| with at least kMinSamplesPerOscillation samples per period.
    double max_wavenumber() const noexcept { return k_limit_; }
    const CubicSpline<T>& interpolant() const noexcept { return spline_; }

private:
    CubicSpline<T> spline_;
    double k_limit_ = 0;
};

extern template class FourierTransformer<double>;
extern template class FourierTransformer<std::complex<double>>;

/// One-shot transform; throws ResolutionError when |k| exceeds the sampling limit.
FourierValue fourier_integral(const SampledSignal& signal, double k);
FourierValue fourier_integral(const ComplexSignal& signal, double k);

/// Moments M_n = integral over [0, h] of u^n e^{iku} du for n = 0..4.
std::array<std::complex<double>, 5> oscillatory_moments(double k, double h);

}  // namespace radlab::numerics
