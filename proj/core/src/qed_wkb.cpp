#include "radlab/qed_wkb.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "radlab/error.hpp"
#include "radlab/numerics/fourier.hpp"
#include "radlab/numerics/quadrature.hpp"

namespace radlab::qed_wkb {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

void require_no_turning_point(const potentials::PotentialSpec& spec, const PhysicalParams& params, double P,
                              const char* which) {
    if (!(P > 0) || !std::isfinite(P)) throw ValidationError(std::string(which) + " momentum must be positive");
    const double vmax = spec.max_potential();
    if (!(P * P - 2 * params.m * vmax > 0))
        throw RegimeError(std::string("turning point for ") + which + " momentum " + std::to_string(P) +
                          ": P^2 <= 2 m max V at z = " + std::to_string(spec.argmax_potential()));
}

// int_0^z f over panels no longer than step.
double integrate_from_origin(const std::function<double(double)>& f, double z, double step) {
    const double span = std::abs(z);
    if (span == 0) return 0;
    const auto n = static_cast<std::size_t>(std::ceil(span / step));
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = span * static_cast<double>(i) / static_cast<double>(n);
        const double b = span * static_cast<double>(i + 1) / static_cast<double>(n);
        sum += numerics::gauss_legendre<20>(f, z > 0 ? a : -b, z > 0 ? b : -a);
    }
    return z > 0 ? sum : -sum;
}

// int B(z) e^{i Phi(z)} dz over the window, B compactly supported, Phi' > 0.
// Changes variable to phi = Phi(z) and applies the spline-Filon rule at unit frequency.
cplx phase_filon(const potentials::PotentialSpec& spec, const std::function<double(double)>& dphi,
                 const std::function<cplx(double)>& B, const AmplitudeOptions& opts, std::size_t& points) {
    const auto window = spec.support_window();
    const double ell = spec.length_scale();
    const double width = window.hi - window.lo;

    // coarse pass for the largest phase rate
    const double coarse = ell / opts.samples_per_scale;
    double rate_max = 0;
    for (double z = window.lo; z <= window.hi + 0.5 * coarse; z += coarse) {
        const double r = dphi(std::min(z, window.hi));
        if (!(r > 0))
            throw RegimeError("phase is not increasing at z = " + std::to_string(z) +
                              " (d Phi/dz = " + std::to_string(r) + ")");
        rate_max = std::max(rate_max, r);
    }
    const double dphi_max = kTwoPi / opts.phase_samples;
    double dz = std::min(coarse, dphi_max / rate_max);
    const double phi_lo = integrate_from_origin(dphi, window.lo, ell / 8);

    for (int attempt = 0; attempt < 4; ++attempt) {
        const auto n = static_cast<std::size_t>(std::ceil(width / dz));
        std::vector<double> phi(n + 1), z(n + 1);
        std::vector<cplx> g(n + 1);
        double step_max = 0;
        phi[0] = phi_lo;
        for (std::size_t j = 0; j <= n; ++j) {
            z[j] = window.lo + width * static_cast<double>(j) / static_cast<double>(n);
            if (j > 0) {
                phi[j] = phi[j - 1] + numerics::gauss_legendre<8>(dphi, z[j - 1], z[j]);
                step_max = std::max(step_max, phi[j] - phi[j - 1]);
            }
            g[j] = B(z[j]) / dphi(z[j]);
        }
        if (step_max > dphi_max * (1 + 1e-9)) {
            dz *= 0.5 * dphi_max / step_max;
            continue;
        }
        points = n + 1;
        double peak = 0;
        for (const auto& v : g) peak = std::max(peak, std::abs(v));
        if (peak == 0) return 0.0;
        numerics::ComplexSignal signal(std::move(phi), std::move(g), opts.support_tol);
        return numerics::FourierTransformer<cplx>(signal).evaluate(1.0).value;
    }
    throw ResolutionError("phase grid did not reach the requested resolution");
}

void check_amplitude_options(const AmplitudeOptions& opts) {
    if (!(opts.phase_samples >= 16)) throw ValidationError("phase_samples must be >= 16");
    if (!(opts.samples_per_scale >= 8)) throw ValidationError("samples_per_scale must be >= 8");
    if (!(opts.support_tol > 0 && opts.support_tol < 1)) throw ValidationError("support_tol must be in (0, 1)");
}

// a_p(k) and d a_p/dk on the k nodes; zero beyond the profile's sampling limit,
// provided the transform has decayed there.
struct PSpectrum {
    std::vector<cplx> a, da;
};

PSpectrum spectrum_at(const potentials::PotentialSpec& spec, const PhysicalParams& params, double p,
                      const QuantumOptions& opts, const std::vector<double>& k) {
    auto prof = potentials::acceleration_profile(spec, params, p, opts.mode, opts.policy);
    numerics::FourierTransformer<double> ft(prof.signal);
    const double k_lim = ft.max_wavenumber();
    const auto& t = prof.signal.grid();
    const auto& a = prof.signal.values();
    double l1 = 0;
    for (std::size_t i = 1; i < t.size(); ++i) l1 += 0.5 * (t[i] - t[i - 1]) * (std::abs(a[i]) + std::abs(a[i - 1]));
    bool checked = false;
    PSpectrum out;
    out.a.reserve(k.size());
    out.da.reserve(k.size());
    for (double kk : k) {
        if (std::abs(kk) > k_lim) {
            if (!checked) {
                const double tail = std::abs(ft.evaluate(k_lim).value);
                if (tail > 1e-10 * l1)
                    throw ResolutionError("acceleration at p = " + std::to_string(p) +
                                          " is under-sampled for the packet's k range (|a_hat| = " +
                                          std::to_string(tail) + " at k = " + std::to_string(k_lim) + ")");
                checked = true;
            }
            out.a.emplace_back(0.0);
            out.da.emplace_back(0.0);
            continue;
        }
        const auto v = ft.evaluate(kk);
        out.a.push_back(v.value);
        out.da.push_back(v.d_dk);
    }
    return out;
}

spectral::KGrid packet_k_grid(const WavePacket& packet, const potentials::PotentialSpec& spec,
                              const PhysicalParams& params, const QuantumOptions& opts) {
    // the fastest member of the packet has the widest spectrum
    auto widest = potentials::acceleration_profile(spec, params, packet.p_max(), opts.mode, opts.policy);
    return spectral::make_k_grid(widest, opts.kgrid);
}

}  // namespace

WKBMode::WKBMode(potentials::PotentialSpec spec, PhysicalParams params, double P)
    : spec_(std::move(spec)), params_(params), P_(P) {
    params_.validate();
    require_no_turning_point(spec_, params_, P_, "mode");
}

double WKBMode::kappa(double z) const { return std::sqrt(P_ * P_ - 2 * params_.m * spec_.value(z)); }

double WKBMode::phase(double z) const {
    return integrate_from_origin([&](double x) { return kappa(x); }, z, spec_.length_scale() / 8);
}

PhaseIntegral wkb_phase_integral(const potentials::PotentialSpec& spec, const PhysicalParams& params, double P,
                                 double z) {
    WKBMode mode(spec, params, P);
    return {mode.phase(z), mode.amplitude(z)};
}

const char* to_string(AmplitudeForm form) { return form == AmplitudeForm::exact_wkb ? "exact_wkb" : "reduced"; }

EmissionAmplitude emission_amplitude(const potentials::PotentialSpec& spec, const PhysicalParams& params, double p,
                                     double k, double k_z, AmplitudeForm form, const AmplitudeOptions& opts) {
    params.validate();
    check_amplitude_options(opts);
    if (!(k > 0)) throw ValidationError("photon wavenumber k must be positive");
    if (!(std::abs(k_z) <= k)) throw ValidationError("|k_z| must not exceed k");
    require_no_turning_point(spec, params, p, "final");
    const double m = params.m, hbar = params.hbar_eff;

    EmissionAmplitude out;
    out.p = p;
    out.k = k;
    out.k_z = k_z;
    out.hbar_eff = hbar;
    out.form = form;

    if (form == AmplitudeForm::reduced) {
        out.P = p;
        const double v_max = std::sqrt(p * p + 2 * m * spec.max_abs_potential()) / m;
        if (!(k > k_z * v_max))
            throw RegimeError("reduced amplitude needs k > k_z v_p (k = " + std::to_string(k) +
                              ", k_z v_max = " + std::to_string(k_z * v_max) + ")");
        auto vel = [&](double z) { return std::sqrt(p * p - 2 * m * spec.value(z)) / m; };
        auto dphi = [&](double z) { return k / vel(z) - k_z; };
        auto B = [&](double z) {
            const double v = vel(z);
            const double dv = -spec.eval(z).dV / (m * v);
            const double d = k - k_z * v;
            return cplx(0, k * dv / (d * d));
        };
        out.I = phase_filon(spec, dphi, B, opts, out.grid_points);
        return out;
    }

    const double P2 = p * p + 2 * m * hbar * k;
    out.P = std::sqrt(P2);
    require_no_turning_point(spec, params, out.P, "initial");
    auto kappas = [&](double z, double& kP, double& kp) {
        const double V = spec.value(z);
        kP = std::sqrt(P2 - 2 * m * V);
        kp = std::sqrt(p * p - 2 * m * V);
    };
    // g / hbar without cancellation: 2 m k / (kappa_P + kappa_p)
    auto dphi = [&](double z) {
        double kP, kp;
        kappas(z, kP, kp);
        return 2 * m * k / (kP + kp) - k_z;
    };
    auto B = [&](double z) {
        double kP, kp;
        kappas(z, kP, kp);
        const double dV = spec.eval(z).dV;
        const double g_over_hbar = 2 * m * k / (kP + kp);
        const double rate = g_over_hbar - k_z;
        const double d_rate = m * dV * g_over_hbar / (kP * kp);
        const double A = std::sqrt(p * kP / (out.P * kp));
        const double dA = 0.5 * A * m * dV * (P2 - p * p) / (kP * kP * kp * kp);
        return cplx(0, dA / rate - A * d_rate / (rate * rate));
    };
    out.I = phase_filon(spec, dphi, B, opts, out.grid_points);
    return out;
}

EmissionAmplitude decoupled_amplitude(const potentials::PotentialSpec& spec, const PhysicalParams& params, double p,
                                      double P, double k_z, const AmplitudeOptions& opts) {
    params.validate();
    check_amplitude_options(opts);
    require_no_turning_point(spec, params, p, "final");
    require_no_turning_point(spec, params, P, "initial");
    if (!(P > p)) throw ValidationError("decoupled amplitude needs P > p");
    const double m = params.m, hbar = params.hbar_eff;
    auto kappas = [&](double z, double& kP, double& kp) {
        const double V = spec.value(z);
        kP = std::sqrt(P * P - 2 * m * V);
        kp = std::sqrt(p * p - 2 * m * V);
    };
    auto dphi = [&](double z) {
        double kP, kp;
        kappas(z, kP, kp);
        return (P * P - p * p) / ((kP + kp) * hbar) - k_z;
    };
    auto B = [&](double z) {
        double kP, kp;
        kappas(z, kP, kp);
        const double dV = spec.eval(z).dV;
        const double rate = (P * P - p * p) / ((kP + kp) * hbar) - k_z;
        const double d_rate = m * dV * (kP - kp) / (kP * kp * hbar);
        const double A = std::sqrt(p * kP / (P * kp));
        const double dA = 0.5 * A * m * dV * (P * P - p * p) / (kP * kP * kp * kp);
        return cplx(0, dA / rate - A * d_rate / (rate * rate));
    };
    EmissionAmplitude out;
    out.p = p;
    out.P = P;
    out.k = (P * P - p * p) / (2 * m * hbar);
    out.k_z = k_z;
    out.hbar_eff = hbar;
    out.form = AmplitudeForm::exact_wkb;
    out.I = phase_filon(spec, dphi, B, opts, out.grid_points);
    return out;
}

double scaling_identity_residual(const potentials::PotentialSpec& spec, const PhysicalParams& params, double p,
                                 double k, potentials::AccelMode mode, double rel_step,
                                 const potentials::SamplingPolicy& policy) {
    if (!(rel_step > 0 && rel_step < 0.1)) throw ValidationError("rel_step must be in (0, 0.1)");
    const double dp = rel_step * p;
    auto transform = [&](double pp) {
        auto prof = potentials::acceleration_profile(spec, params, pp, mode, policy);
        return numerics::FourierTransformer<double>(prof.signal).evaluate(k);
    };
    auto prof = potentials::acceleration_profile(spec, params, p, mode, policy);
    const auto& t = prof.signal.grid();
    const auto& a = prof.signal.values();
    double l1 = 0;
    for (std::size_t i = 1; i < t.size(); ++i) l1 += 0.5 * (t[i] - t[i - 1]) * (std::abs(a[i]) + std::abs(a[i - 1]));
    if (l1 == 0) return 0.0;
    const auto centre = numerics::FourierTransformer<double>(prof.signal).evaluate(k);
    // fourth-order centred stencil on the step dp
    const cplx dadp = (8.0 * (transform(p + dp).value - transform(p - dp).value) -
                       (transform(p + 2 * dp).value - transform(p - 2 * dp).value)) /
                      (12 * dp);
    const cplx residual = dadp + centre.value / p + (k / p) * centre.d_dk;
    return std::abs(residual) / std::max(std::abs(centre.value), 1e-3 * l1);
}

double WavePacket::norm() const {
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += weight[i] * std::norm(f[i]);
    return s;
}

WavePacket make_wave_packet(double p_bar, double sigma_p, double z_c, unsigned panels, double max_width_ratio) {
    if (!(p_bar > 0)) throw ValidationError("packet p_bar must be positive");
    if (!(sigma_p > 0)) throw ValidationError("packet sigma_p must be positive");
    if (sigma_p > max_width_ratio * p_bar * (1 + 1e-12))
        throw ValidationError("packet is not sharply peaked: sigma_p = " + std::to_string(sigma_p) + " > " +
                              std::to_string(max_width_ratio) + " p_bar");
    if (panels < 1) throw ValidationError("packet needs at least one panel");
    if (p_bar - 8 * sigma_p <= 0) throw ValidationError("packet extends to non-positive momenta");
    WavePacket w;
    w.p_bar = p_bar;
    w.sigma_p = sigma_p;
    w.z_c = z_c;
    const double lo = p_bar - 8 * sigma_p, span = 16 * sigma_p;
    std::vector<double> nodes, weights;
    for (unsigned i = 0; i < panels; ++i)
        spectral::append_gl_panel(nodes, weights, lo + span * i / panels, lo + span * (i + 1) / panels);
    const double c = std::pow(2 * std::numbers::pi * sigma_p * sigma_p, -0.25);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = nodes[i] - p_bar;
        const double amp = c * std::exp(-x * x / (4 * sigma_p * sigma_p));
        const cplx f = amp * std::polar(1.0, -nodes[i] * z_c);
        w.p.push_back(nodes[i]);
        w.weight.push_back(weights[i]);
        w.f.push_back(f);
        w.df.push_back(f * cplx(-x / (2 * sigma_p * sigma_p), -z_c));
    }
    return w;
}

void check_packet(const WavePacket& packet, const potentials::PotentialSpec& spec, const PhysicalParams& params) {
    params.validate();
    const double n = packet.norm();
    if (std::abs(n - 1) > 1e-10) throw ValidationError("packet normalisation off by " + std::to_string(n - 1));
    const double floor = 3 * std::sqrt(2 * params.m * spec.max_abs_potential());
    if (packet.p_min() < floor)
        throw RegimeError("packet reaches p = " + std::to_string(packet.p_min()) +
                          " below 3 sqrt(2 m max|V|) = " + std::to_string(floor));
}

cplx bilinear(const WavePacket& packet, const std::vector<cplx>& A, const std::vector<cplx>& dA,
              const std::vector<cplx>& B, const std::vector<cplx>& dB) {
    const std::size_t n = packet.p.size();
    if (A.size() != n || dA.size() != n || B.size() != n || dB.size() != n)
        throw ValidationError("bilinear: vectors must match the packet grid");
    cplx s = 0;
    for (std::size_t i = 0; i < n; ++i) s += packet.weight[i] * (std::conj(A[i]) * dB[i] - std::conj(dA[i]) * B[i]);
    return cplx(0, 0.5) * s;
}

QuantumShift quantum_position_shift(const WavePacket& packet, const potentials::PotentialSpec& spec,
                                    const PhysicalParams& params, const QuantumOptions& opts) {
    check_packet(packet, spec, params);
    const auto grid = packet_k_grid(packet, spec, params, opts);
    const auto& k = grid.k;

    QuantumShift out;
    out.k_points = k.size();
    cplx total = 0;
    for (std::size_t i = 0; i < packet.p.size(); ++i) {
        const auto s = spectrum_at(spec, params, packet.p[i], opts, k);
        cplx moment = 0;
        for (std::size_t j = 0; j < k.size(); ++j) moment += grid.weight[j] * std::conj(s.a[j]) * s.da[j];
        total += packet.weight[i] * std::norm(packet.f[i]) / packet.p[i] * moment / kTwoPi;
    }
    const cplx shift = cplx(0, -2 * params.alpha / 3) * total;
    out.shift = shift.real();
    out.imag = shift.imag();

    // emission terms at the packet centre
    auto centre = potentials::acceleration_profile(spec, params, packet.p_bar, opts.mode, opts.policy);
    const auto centre_spec = spectral::spectralize(centre, grid);
    double energy = 0;
    for (std::size_t j = 0; j < k.size(); ++j) energy += grid.weight[j] * std::norm(centre_spec.a_hat[j]);
    out.photon_energy = 2 * params.alpha / 3 * energy / kTwoPi;
    try {
        const auto prob = spectral::emission_probability(centre_spec, params, opts.k_min);
        out.emission_prob_term = prob.prob;
        out.ir_divergent = prob.ir_divergent;
    } catch (const InfraredError& e) {
        out.emission_prob_term = std::nan("");
        out.ir_divergent = true;
        out.ir_error = e.what();
    }
    return out;
}

DirectExpectation direct_position_expectation(const WavePacket& packet, const potentials::PotentialSpec& spec,
                                              const PhysicalParams& params, const QuantumOptions& opts,
                                              double rel_step) {
    check_packet(packet, spec, params);
    if (!(rel_step > 0 && rel_step < 0.1)) throw ValidationError("rel_step must be in (0, 0.1)");
    const auto grid = packet_k_grid(packet, spec, params, opts);
    std::vector<double> k, wk;
    for (std::size_t j = 0; j < grid.k.size(); ++j)
        if (grid.k[j] > 0) {
            k.push_back(grid.k[j]);
            wk.push_back(grid.weight[j]);
        }

    const std::size_t np = packet.p.size(), nk = k.size();
    std::vector<std::vector<cplx>> a(np), dadp(np);
    for (std::size_t i = 0; i < np; ++i) {
        const double p = packet.p[i], dp = rel_step * p;
        a[i] = spectrum_at(spec, params, p, opts, k).a;
        const auto up = spectrum_at(spec, params, p + dp, opts, k).a;
        const auto dn = spectrum_at(spec, params, p - dp, opts, k).a;
        const auto up2 = spectrum_at(spec, params, p + 2 * dp, opts, k).a;
        const auto dn2 = spectrum_at(spec, params, p - 2 * dp, opts, k).a;
        dadp[i].resize(nk);
        for (std::size_t j = 0; j < nk; ++j)
            dadp[i][j] = (8.0 * (up[j] - dn[j]) - (up2[j] - dn2[j])) / (12 * dp);
    }
    {
        auto centre = potentials::acceleration_profile(spec, params, packet.p_bar, opts.mode, opts.policy);
        const auto& t = centre.signal.grid();
        const auto& av = centre.signal.values();
        double l1 = 0;
        for (std::size_t i = 1; i < t.size(); ++i)
            l1 += 0.5 * (t[i] - t[i - 1]) * (std::abs(av[i]) + std::abs(av[i - 1]));
        const double a0 = std::abs(numerics::FourierTransformer<double>(centre.signal).evaluate(0.0).value);
        if (a0 > spectral::kDivergenceTol * l1)
            throw InfraredError("direct (z)_0 diverges at k -> 0 unless a_p(0) = 0 (|a_hat(0)| = " +
                                std::to_string(a0) + ")");
    }

    DirectExpectation out;
    out.bilinear_ff = bilinear(packet, packet.f, packet.df, packet.f, packet.df);
    double z0 = 0, prob = 0;
    std::vector<cplx> A(np), dA(np);
    for (std::size_t j = 0; j < nk; ++j) {
        double mass = 0;
        for (std::size_t i = 0; i < np; ++i) {
            A[i] = a[i][j] * packet.f[i];
            dA[i] = dadp[i][j] * packet.f[i] + a[i][j] * packet.df[i];
            // -Im(conj f f') is the position density of the undisturbed packet
            mass += packet.weight[i] * std::norm(a[i][j]) * -std::imag(std::conj(packet.f[i]) * packet.df[i]);
        }
        const double w = wk[j] / (kTwoPi * k[j]);
        z0 += w * bilinear(packet, A, dA, A, dA).real();
        prob += w * mass;
    }
    const double c = 4 * params.alpha / 3;
    out.z0 = c * z0;
    out.probability_term = c * prob;
    out.shift_term = out.z0 - out.probability_term;
    return out;
}

}  // namespace radlab::qed_wkb
