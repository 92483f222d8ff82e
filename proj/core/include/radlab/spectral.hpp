#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "radlab/numerics/fourier.hpp"
#include "radlab/physical_params.hpp"
#include "radlab/trajectory.hpp"

namespace radlab::spectral {

struct KGridOptions {
    /// Smallest resolved |k| as a fraction of the pulse bandwidth.
    double k_min_fraction = 1e-8;
    /// |a_hat| at the grid ends relative to its peak.
    double truncation_tol = 1e-12;
    /// Linear panel width as a fraction of min(bandwidth, 2 pi / support duration).
    double linear_panel_fraction = 1.0;
};

/// Gauss-Legendre nodes and weights on [-k_max, k_max], log-dense near 0.
struct KGrid {
    std::vector<double> k;
    std::vector<double> weight;
    double k_bandwidth = 0;  // 1 / rms duration of a^2
    double k_max = 0;
    double panel_width = 0;
    /// |a_hat(k_max)| / peak actually reached (<= truncation_tol unless capped by sampling).
    double tail_ratio = 0;
};

inline constexpr unsigned kNodesPerPanel = 16;

/// Builds a symmetric grid for the given profile: log panels from k_min_fraction
/// times the bandwidth up to the bandwidth, then linear panels to the truncation point.
KGrid make_k_grid(const potentials::AccelerationProfile& accel, const KGridOptions& opts = {});

/// Appends the kNodesPerPanel-point Gauss-Legendre rule on [a, b], nodes ascending.
void append_gl_panel(std::vector<double>& k, std::vector<double>& w, double a, double b);

/// Gauss-Legendre nodes/weights covering [k_lo, k_hi], k_lo > 0, with half-decade
/// log panels below k_knee and linear panels of width dk above it.
void append_panels(std::vector<double>& k, std::vector<double>& w, double k_lo, double k_hi, double k_knee,
                   double dk);

struct SpectralAcceleration {
    KGrid grid;
    std::vector<std::complex<double>> a_hat;
    std::vector<std::complex<double>> da_hat_dk;
    potentials::AccelerationProfile source;
    std::shared_ptr<const numerics::FourierTransformer<double>> transformer;
};

SpectralAcceleration spectralize(const potentials::AccelerationProfile& accel, const KGrid& grid);
SpectralAcceleration spectralize(const potentials::AccelerationProfile& accel, const KGridOptions& opts = {});

/// -(2 i alpha / 3 p_bar) int dk/2pi conj(a_hat) d a_hat/dk. The real part is the
/// shift; the imaginary part is a quadrature diagnostic. Throws GridError on an
/// asymmetric grid and DomainError when a(t) has support at t > 0.
std::complex<double> larmor_shift_fourier(const SpectralAcceleration& spec, double p_bar,
                                          const PhysicalParams& params);

/// int dk/2pi conj(a_hat) d a_hat/dk over the grid.
std::complex<double> spectral_first_moment(const SpectralAcceleration& spec);

struct EmissionProbability {
    double prob = 0;
    bool ir_divergent = false;
    double a_hat_zero = 0;
    double k_min = 0;
    double k_max = 0;
};

/// Relative threshold on |a_hat(0)| / max |a_hat| above which the probability diverges.
inline constexpr double kDivergenceTol = 1e-10;

/// (4 alpha/3) int_{k_min}^{k_max} dk/(2 pi k) |a_hat|^2. Throws InfraredError for
/// k_min = 0 when a_hat(0) != 0.
EmissionProbability emission_probability(const SpectralAcceleration& spec, const PhysicalParams& params,
                                         double k_min);

struct PhotonEnergy {
    double time_domain = 0;
    double freq_domain = 0;
};

/// (2 alpha/3) int a^2 dt and (2 alpha/3) int dk/2pi |a_hat|^2.
PhotonEnergy expected_photon_energy(const potentials::AccelerationProfile& accel, const SpectralAcceleration& spec,
                                    const PhysicalParams& params);

}  // namespace radlab::spectral
