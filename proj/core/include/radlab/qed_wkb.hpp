#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "radlab/physical_params.hpp"
#include "radlab/potentials.hpp"
#include "radlab/spectral.hpp"
#include "radlab/trajectory.hpp"

namespace radlab::qed_wkb {

using cplx = std::complex<double>;

/// Right-moving WKB mode kappa^{-1/2} exp(i int_0^z kappa), kappa = sqrt(P^2 - 2mV).
class WKBMode {
public:
    /// Throws RegimeError if P^2 <= 2m max V.
    WKBMode(potentials::PotentialSpec spec, PhysicalParams params, double P);

    double P() const noexcept { return P_; }
    double kappa(double z) const;
    double phase(double z) const;
    double amplitude(double z) const { return 1 / std::sqrt(kappa(z)); }

private:
    potentials::PotentialSpec spec_;
    PhysicalParams params_;
    double P_;
};

struct PhaseIntegral {
    double phase = 0;
    double amplitude = 0;
};

PhaseIntegral wkb_phase_integral(const potentials::PotentialSpec& spec, const PhysicalParams& params, double P,
                                 double z);

enum class AmplitudeForm { exact_wkb, reduced };

const char* to_string(AmplitudeForm form);

struct EmissionAmplitude {
    cplx I;
    double p = 0;
    double P = 0;
    double k = 0;
    double k_z = 0;
    double hbar_eff = 1;
    AmplitudeForm form = AmplitudeForm::reduced;
    std::size_t grid_points = 0;
};

struct AmplitudeOptions {
    /// Oscillatory-quadrature resolution: max phase step 2 pi / phase_samples...
    double phase_samples = 128;
    /// ...and max z step length_scale / samples_per_scale.
    double samples_per_scale = 64;
    double support_tol = 1e-8;
};

/// I_pk by integration by parts, I = i int [A'/Phi' - A Phi''/Phi'^2] e^{i Phi} dz,
/// evaluated in the phase variable with a spline-Filon rule.
///   exact_wkb: Phi' = g/hbar - k_z, g = kappa_P - kappa_p, P^2 = p^2 + 2 m hbar k,
///              A = sqrt(p kappa_P / (P kappa_p)).
///   reduced:   Phi' = k/v_p - k_z, A = 1.
EmissionAmplitude emission_amplitude(const potentials::PotentialSpec& spec, const PhysicalParams& params, double p,
                                     double k, double k_z, AmplitudeForm form, const AmplitudeOptions& opts = {});

/// exact_wkb integrand with P fixed independently of p (energy conservation dropped).
/// Decays as hbar_eff -> 0 whenever P != p.
EmissionAmplitude decoupled_amplitude(const potentials::PotentialSpec& spec, const PhysicalParams& params, double p,
                                      double P, double k_z, const AmplitudeOptions& opts = {});

/// |d a_p/dp + a_p/p + (k/p) d a_p/dk| / max(|a_p(k)|, floor), d/dp by a centred
/// difference (fourth order) with relative step rel_step. floor = 1e-3 int |a| dt.
double scaling_identity_residual(const potentials::PotentialSpec& spec, const PhysicalParams& params, double p,
                                 double k, potentials::AccelMode mode = potentials::AccelMode::straight_line,
                                 double rel_step = 1e-4, const potentials::SamplingPolicy& policy = {});

/// Real Gaussian momentum profile times e^{-i p z_c}, on Gauss-Legendre nodes over p_bar +- 8 sigma_p.
struct WavePacket {
    double p_bar = 1;
    double sigma_p = 0.1;
    double z_c = 0;
    std::vector<double> p;
    std::vector<double> weight;
    std::vector<cplx> f;
    std::vector<cplx> df;  // df/dp

    double norm() const;
    double p_min() const { return p.front(); }
    double p_max() const { return p.back(); }
};

/// Throws ValidationError unless sigma_p <= max_width_ratio * p_bar.
WavePacket make_wave_packet(double p_bar, double sigma_p, double z_c = 0, unsigned panels = 2,
                            double max_width_ratio = 0.1);

/// Normalisation within 1e-10 and p_min >= 3 sqrt(2 m max|V|); RegimeError otherwise.
void check_packet(const WavePacket& packet, const potentials::PotentialSpec& spec, const PhysicalParams& params);

/// <A, B> = (i/2) int dp [conj(A) dB/dp - conj(dA/dp) B] over the packet's nodes.
cplx bilinear(const WavePacket& packet, const std::vector<cplx>& A, const std::vector<cplx>& dA,
              const std::vector<cplx>& B, const std::vector<cplx>& dB);

struct QuantumOptions {
    potentials::AccelMode mode = potentials::AccelMode::straight_line;
    potentials::SamplingPolicy policy;
    spectral::KGridOptions kgrid;
    /// Infrared cutoff for the reported emission-probability term.
    double k_min = 0;
};

struct QuantumShift {
    double shift = 0;
    double imag = 0;
    /// (4 alpha/3) int_{k_min} dk/(2 pi k) |a_{p_bar}|^2; NaN with ir_error set when divergent.
    double emission_prob_term = 0;
    bool ir_divergent = false;
    std::optional<std::string> ir_error;
    /// (2 alpha/3) int dk/2pi |a_{p_bar}|^2.
    double photon_energy = 0;
    std::size_t k_points = 0;
};

/// (Delta z)_0 = -(2 i alpha/3) int dp/p |f|^2 int dk/2pi conj(a_p) d a_p/dk (real part).
QuantumShift quantum_position_shift(const WavePacket& packet, const potentials::PotentialSpec& spec,
                                    const PhysicalParams& params, const QuantumOptions& opts = {});

struct DirectExpectation {
    /// (4 alpha/3) int_0^inf dk/(2 pi k) <a_p f, a_p f>, with d/dp by finite differences.
    double z0 = 0;
    /// The packet-averaged <f, f> |a_p|^2 part (emission probability times position).
    double probability_term = 0;
    /// z0 - probability_term; equals the shift when the scaling identity holds.
    double shift_term = 0;
    cplx bilinear_ff;
};

/// Direct evaluation of (z)_0 from the bilinear form without the scaling identity.
/// Requires a_{p}(0) = 0 (infrared finite).
DirectExpectation direct_position_expectation(const WavePacket& packet, const potentials::PotentialSpec& spec,
                                              const PhysicalParams& params, const QuantumOptions& opts = {},
                                              double rel_step = 1e-4);

}  // namespace radlab::qed_wkb
