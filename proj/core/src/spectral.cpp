#include "radlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "radlab/error.hpp"
#include "radlab/numerics/quadrature.hpp"

namespace radlab::spectral {

namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2 * std::numbers::pi;

}  // namespace

void append_gl_panel(std::vector<double>& k, std::vector<double>& w, double a, double b) {
    using rule = boost::math::quadrature::gauss<double, kNodesPerPanel>;
    const auto& x = rule::abscissa();
    const auto& wt = rule::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    // boost stores the non-negative half of the symmetric rule
    for (std::size_t i = x.size(); i-- > 0;) {
        if (x[i] == 0) continue;
        k.push_back(c - h * x[i]);
        w.push_back(h * wt[i]);
    }
    if (x[0] == 0) {
        k.push_back(c);
        w.push_back(h * wt[0]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        k.push_back(c + h * x[i]);
        w.push_back(h * wt[i]);
    }
}

namespace {

// Integral of t^n a(t)^2 for n = 0, 1, 2 over the spline.
std::array<double, 3> power_moments(const potentials::AccelerationProfile& accel) {
    const auto& t = accel.signal.grid();
    numerics::CubicSpline<double> s(t, accel.signal.values());
    std::array<double, 3> out{};
    for (int n = 0; n < 3; ++n)
        out[n] = numerics::integrate_over_knots<5>(t, [&](double x) {
            const double v = s(x);
            return std::pow(x, n) * v * v;
        });
    return out;
}

void check_support_before_zero(const potentials::AccelerationProfile& accel) {
    const auto& sig = accel.signal;
    for (std::size_t i = 0; i < sig.size(); ++i)
        if (sig.grid()[i] > 0 && std::abs(sig.values()[i]) > sig.support_tol() * sig.peak())
            throw DomainError("Fourier Larmor shift needs a(t) = 0 for t > 0; |a| = " +
                              std::to_string(std::abs(sig.values()[i])) + " at t = " +
                              std::to_string(sig.grid()[i]));
}

}  // namespace

void append_panels(std::vector<double>& k, std::vector<double>& w, double k_lo, double k_hi, double k_knee,
                   double dk) {
    if (!(k_lo > 0)) throw ValidationError("append_panels: k_lo must be positive");
    if (!(k_hi > k_lo)) return;
    double a = k_lo;
    if (a < k_knee) {
        const double top = std::min(k_knee, k_hi);
        // one panel per half decade
        const double ratio = std::sqrt(10.0);
        while (a < top) {
            const double b = std::min(top, a * ratio);
            append_gl_panel(k, w, a, b);
            a = b;
        }
    }
    while (a < k_hi) {
        const double b = std::min(k_hi, a + dk);
        if (k_hi - b < 1e-3 * dk) {
            append_gl_panel(k, w, a, k_hi);
            break;
        }
        append_gl_panel(k, w, a, b);
        a = b;
    }
}

KGrid make_k_grid(const potentials::AccelerationProfile& accel, const KGridOptions& opts) {
    if (!(opts.k_min_fraction > 0 && opts.k_min_fraction < 1)) throw ValidationError("k_min_fraction must be in (0, 1)");
    if (!(opts.truncation_tol > 0)) throw ValidationError("truncation_tol must be positive");
    if (!(opts.linear_panel_fraction > 0)) throw ValidationError("linear_panel_fraction must be positive");
    const auto& sig = accel.signal;
    numerics::FourierTransformer<double> ft(sig);

    KGrid grid;
    const auto mom = power_moments(accel);
    if (mom[0] > 0) {
        const double mean = mom[1] / mom[0];
        const double var = std::max(mom[2] / mom[0] - mean * mean, 0.0);
        grid.k_bandwidth = 1 / std::sqrt(var);
    }
    if (!(grid.k_bandwidth > 0) || !std::isfinite(grid.k_bandwidth))
        grid.k_bandwidth = 1 / (sig.back() - sig.front());

    const double k_cap = ft.max_wavenumber();
    // a_hat oscillates in k with period ~ 2 pi / (duration of the support)
    double t_lo = sig.back(), t_hi = sig.front();
    for (std::size_t i = 0; i < sig.size(); ++i)
        if (std::abs(sig.values()[i]) > sig.support_tol() * sig.peak()) {
            t_lo = std::min(t_lo, sig.grid()[i]);
            t_hi = std::max(t_hi, sig.grid()[i]);
        }
    const double duration = t_hi > t_lo ? t_hi - t_lo : sig.back() - sig.front();
    const double dk = opts.linear_panel_fraction * std::min(grid.k_bandwidth, 2 * std::numbers::pi / duration);
    grid.panel_width = dk;
    double peak = 0;
    for (int j = 0; j * dk <= std::min(k_cap, 4 * grid.k_bandwidth); ++j)
        peak = std::max(peak, std::abs(ft.evaluate(j * dk).value));

    // Truncate at the first scan point past the bandwidth below which |a_hat| stays
    // for a whole octave [k, 2k]. Taking the last point above the level instead would
    // chase the interpolation-noise floor that sampled data shows near k_cap.
    const std::size_t steps = static_cast<std::size_t>(std::floor(k_cap / dk));
    const double level = opts.truncation_tol * peak;
    std::vector<bool> above(steps + 1, false);
    for (std::size_t j = 1; j <= steps; ++j) above[j] = std::abs(ft.evaluate(static_cast<double>(j) * dk).value) > level;
    std::size_t j_cut = steps + 1;  // none: run to the cap
    std::size_t next_above = steps + 1;
    std::vector<std::size_t> first_above_from(steps + 2, steps + 1);
    for (std::size_t j = steps + 1; j-- > 1;) {
        if (above[j]) next_above = j;
        first_above_from[j] = next_above;
    }
    for (std::size_t j = 1; j <= steps; ++j) {
        if (static_cast<double>(j) * dk < grid.k_bandwidth) continue;
        if (first_above_from[j] > std::min(2 * j, steps)) {
            j_cut = j;
            break;
        }
    }
    grid.k_max = j_cut > steps ? k_cap : std::max(static_cast<double>(j_cut) * dk, grid.k_bandwidth);
    grid.tail_ratio = peak > 0 ? std::abs(ft.evaluate(grid.k_max).value) / peak : 0.0;

    std::vector<double> kpos, wpos;
    const double floor = opts.k_min_fraction * grid.k_bandwidth;
    append_gl_panel(kpos, wpos, 0.0, floor);
    append_panels(kpos, wpos, floor, grid.k_max, grid.k_bandwidth, dk);

    grid.k.reserve(2 * kpos.size());
    for (std::size_t i = kpos.size(); i-- > 0;) {
        grid.k.push_back(-kpos[i]);
        grid.weight.push_back(wpos[i]);
    }
    for (std::size_t i = 0; i < kpos.size(); ++i) {
        grid.k.push_back(kpos[i]);
        grid.weight.push_back(wpos[i]);
    }
    return grid;
}

SpectralAcceleration spectralize(const potentials::AccelerationProfile& accel, const KGrid& grid) {
    if (grid.k.size() != grid.weight.size()) throw ValidationError("k grid and weights differ in length");
    SpectralAcceleration out;
    out.grid = grid;
    out.source = accel;
    auto ft = std::make_shared<numerics::FourierTransformer<double>>(accel.signal);
    out.a_hat.reserve(grid.k.size());
    out.da_hat_dk.reserve(grid.k.size());
    for (double k : grid.k) {
        const auto v = ft->evaluate(k);
        out.a_hat.push_back(v.value);
        out.da_hat_dk.push_back(v.d_dk);
    }
    out.transformer = std::move(ft);
    return out;
}

SpectralAcceleration spectralize(const potentials::AccelerationProfile& accel, const KGridOptions& opts) {
    return spectralize(accel, make_k_grid(accel, opts));
}

std::complex<double> spectral_first_moment(const SpectralAcceleration& spec) {
    const auto& k = spec.grid.k;
    const std::size_t n = k.size();
    const double scale = spec.grid.k_max > 0 ? spec.grid.k_max : 1.0;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(k[i] + k[n - 1 - i]) > 1e-12 * scale ||
            spec.grid.weight[i] != spec.grid.weight[n - 1 - i])
            throw GridError("k grid is not symmetric about 0 at index " + std::to_string(i));
    cplx sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += spec.grid.weight[i] * std::conj(spec.a_hat[i]) * spec.da_hat_dk[i];
    return sum / kTwoPi;
}

std::complex<double> larmor_shift_fourier(const SpectralAcceleration& spec, double p_bar,
                                          const PhysicalParams& params) {
    params.validate();
    if (!(p_bar > 0)) throw ValidationError("p_bar must be positive");
    const cplx moment = spectral_first_moment(spec);
    check_support_before_zero(spec.source);
    return cplx(0, -2 * params.alpha / (3 * p_bar)) * moment;
}

EmissionProbability emission_probability(const SpectralAcceleration& spec, const PhysicalParams& params,
                                         double k_min) {
    params.validate();
    if (!(k_min >= 0)) throw ValidationError("k_min must be >= 0");
    EmissionProbability out;
    out.k_min = k_min;
    out.k_max = spec.grid.k_max;
    const auto& ft = *spec.transformer;
    // a_hat(0) is the integral of a; analytic profiles carry it from adaptive quadrature,
    // which stays clean where the spline transform picks up interpolation noise
    out.a_hat_zero = spec.source.mode == potentials::AccelMode::sampled ? std::abs(ft.evaluate(0.0).value)
                                                                        : std::abs(spec.source.integral);
    double peak = 0;
    for (const auto& a : spec.a_hat) peak = std::max(peak, std::abs(a));
    out.ir_divergent = out.a_hat_zero > kDivergenceTol * peak;
    if (out.ir_divergent && k_min == 0)
        throw InfraredError("emission probability diverges logarithmically at k -> 0 (|a_hat(0)| = " +
                            std::to_string(out.a_hat_zero) + "); pass an infrared cutoff k_min > 0");
    if (peak == 0 || k_min >= spec.grid.k_max) return out;

    std::vector<double> k, w;
    const double kbw = spec.grid.k_bandwidth;
    if (k_min == 0) {
        const double floor = 1e-8 * kbw;
        append_gl_panel(k, w, 0.0, floor);
        append_panels(k, w, floor, spec.grid.k_max, kbw, spec.grid.panel_width);
    } else {
        append_panels(k, w, k_min, spec.grid.k_max, kbw, spec.grid.panel_width);
    }
    double sum = 0;
    for (std::size_t i = 0; i < k.size(); ++i) sum += w[i] * std::norm(ft.evaluate(k[i]).value) / (kTwoPi * k[i]);
    out.prob = 4 * params.alpha / 3 * sum;
    return out;
}

PhotonEnergy expected_photon_energy(const potentials::AccelerationProfile& accel, const SpectralAcceleration& spec,
                                    const PhysicalParams& params) {
    params.validate();
    PhotonEnergy out;
    const double c = 2 * params.alpha / 3;
    out.time_domain = c * power_moments(accel)[0];
    double sum = 0;
    for (std::size_t i = 0; i < spec.grid.k.size(); ++i) sum += spec.grid.weight[i] * std::norm(spec.a_hat[i]);
    out.freq_domain = c * sum / kTwoPi;
    return out;
}

}  // namespace radlab::spectral
