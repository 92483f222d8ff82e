#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "radlab/error.hpp"
#include "radlab/numerics/quadrature.hpp"
#include "radlab/qed_wkb.hpp"
#include "radlab/spectral.hpp"

using namespace radlab;
using namespace radlab::qed_wkb;
using namespace radlab::potentials;

namespace {

PhysicalParams fine(double hbar = 1.0) {
    PhysicalParams p;
    p.alpha = 1 / 137.036;
    p.hbar_eff = hbar;
    return p;
}

// Oracle: plain Gauss-Legendre panels in z on the integrated-by-parts form,
// with the phase carried panel to panel. Fine for slow oscillation only.
cplx brute_force_reduced(const PotentialSpec& spec, const PhysicalParams& params, double p, double k, double k_z) {
    const double m = params.m;
    auto vel = [&](double z) { return std::sqrt(p * p - 2 * m * spec.value(z)) / m; };
    auto rate = [&](double z) { return k / vel(z) - k_z; };
    const auto w = spec.support_window();
    const int n = 4000;
    const double h = (w.hi - w.lo) / n;
    double phase = -numerics::quad_adaptive(rate, w.lo, 0.0, 1e-14);
    cplx sum = 0;
    for (int i = 0; i < n; ++i) {
        const double a = w.lo + i * h;
        auto integrand = [&](double z) {
            const double v = vel(z), dv = -spec.eval(z).dV / (m * v), d = k - k_z * v;
            return cplx(0, k * dv / (d * d)) * std::polar(1.0, phase + numerics::gauss_legendre<8>(rate, a, z));
        };
        sum += cplx(numerics::gauss_legendre<20>([&](double z) { return integrand(z).real(); }, a, a + h),
                    numerics::gauss_legendre<20>([&](double z) { return integrand(z).imag(); }, a, a + h));
        phase += numerics::gauss_legendre<20>(rate, a, a + h);
    }
    return sum;
}

}  // namespace

TEST_SUITE("wkb modes") {
    TEST_CASE("free mode") {
        PotentialSpec flat(SmoothStep{0.0, 1.0, 0.0});
        for (double z : {-3.0, 0.0, 2.5}) {
            auto r = wkb_phase_integral(flat, fine(), 1.7, z);
            CHECK(r.phase == doctest::Approx(1.7 * z).epsilon(1e-14));
            CHECK(r.amplitude == doctest::Approx(1 / std::sqrt(1.7)).epsilon(1e-14));
        }
    }

    TEST_CASE("smooth step: free phase plus a constant offset downstream") {
        PotentialSpec step(SmoothStep{0.1, 1.0, 0.0});
        const double P = 1.2;
        const double off1 = wkb_phase_integral(step, fine(), P, 30.0).phase - P * 30.0;
        const double off2 = wkb_phase_integral(step, fine(), P, 45.0).phase - P * 45.0;
        CHECK(std::abs(off1 - off2) < 1e-10);
        CHECK(off1 != 0.0);
    }

    TEST_CASE("Gaussian bump: amplitude at the centre, increasing phase") {
        const double V0 = 0.2, P = 1.1;
        PotentialSpec bump(GaussianBump{V0, 0.8, 0.5});
        CHECK(wkb_phase_integral(bump, fine(), P, 0.5).amplitude ==
              doctest::Approx(std::pow(P * P - 2 * V0, -0.25)).epsilon(1e-14));
        WKBMode mode(bump, fine(), P);
        double prev = mode.phase(-6.0);
        for (double z = -5.5; z <= 6; z += 0.5) {
            const double ph = mode.phase(z);
            CHECK(ph > prev);
            prev = ph;
        }
    }

    TEST_CASE("turning point") {
        PotentialSpec bump(GaussianBump{0.9, 1.0, 0.0});
        CHECK_THROWS_AS(wkb_phase_integral(bump, fine(), 1.0, 0.0), RegimeError);
    }
}

TEST_SUITE("emission amplitude") {
    TEST_CASE("no potential, no emission") {
        PotentialSpec flat(GaussianBump{0.0, 1.0, 0.0});
        for (auto form : {AmplitudeForm::exact_wkb, AmplitudeForm::reduced})
            CHECK(std::abs(emission_amplitude(flat, fine(), 1.0, 0.5, 0.0, form).I) == 0.0);
    }

    TEST_CASE("reduced amplitude is (i/k) a_hat(k) on the classical trajectory") {
        const auto params = fine();
        PotentialSpec step(SmoothStep{0.02, 1.0, 0.0});
        const double p = 1.0;
        auto accel = acceleration_profile(step, params, p, AccelMode::exact);
        for (double k : {0.3, 1.0, 3.0, 6.0}) {
            const auto I = emission_amplitude(step, params, p, k, 0.0, AmplitudeForm::reduced).I;
            const cplx expected = cplx(0, 1 / k) * numerics::fourier_integral(accel.signal, k).value;
            CHECK(std::abs(I - expected) <= 1e-6 * std::abs(expected));
        }
    }

    TEST_CASE("reduced amplitude with k_z against panel quadrature") {
        const auto params = fine();
        PotentialSpec bump(GaussianBump{0.05, 1.0, 0.0});
        for (double kz : {0.0, 0.3, -0.4}) {
            const double k = 0.5;
            const auto I = emission_amplitude(bump, params, 1.0, k, kz, AmplitudeForm::reduced).I;
            const cplx ref = brute_force_reduced(bump, params, 1.0, k, kz);
            CHECK(std::abs(I - ref) <= 1e-8 * std::abs(ref));
        }
    }

    TEST_CASE("accuracy does not degrade with the number of oscillations") {
        const auto params = fine();
        PotentialSpec step(SmoothStep{0.02, 0.25, -10.0});
        auto accel = acceleration_profile(step, params, 1.0, AccelMode::exact);
        for (double k : {2.0, 8.0, 20.0}) {
            const auto I = emission_amplitude(step, params, 1.0, k, 0.0, AmplitudeForm::reduced).I;
            const cplx expected = cplx(0, 1 / k) * numerics::fourier_integral(accel.signal, k).value;
            CHECK(std::abs(I - expected) <= 1e-6 * std::abs(expected));
        }
    }

    TEST_CASE("exact WKB approaches the reduced form as hbar -> 0") {
        PotentialSpec step(SmoothStep{0.02, 1.0, 0.0});
        const double p = 1.0, k = 3.0;
        double prev = 0;
        for (int i = 0; i < 6; ++i) {
            const auto params = fine(1e-2 * p * p / (2 * k) / std::pow(2.0, i));
            const auto e = emission_amplitude(step, params, p, k, 0.0, AmplitudeForm::exact_wkb);
            const auto r = emission_amplitude(step, params, p, k, 0.0, AmplitudeForm::reduced);
            CHECK(e.P == doctest::Approx(std::sqrt(p * p + 2 * params.m * params.hbar_eff * k)));
            const double gap = std::abs(e.I - r.I) / std::abs(r.I);
            if (i > 0) {
                CHECK(gap < prev);
                CHECK(std::log2(prev / gap) >= 0.95);
            }
            prev = gap;
        }
    }

    TEST_CASE("fixed P != p: amplitude dies out in the classical limit") {
        PotentialSpec step(SmoothStep{0.02, 1.0, 0.0});
        double prev = INFINITY;
        for (double hbar : {0.1, 0.05, 0.025, 0.0125}) {
            const double mag = std::abs(decoupled_amplitude(step, fine(hbar), 1.0, 1.05, 0.0).I);
            CHECK(mag < prev);
            prev = mag;
        }
        CHECK(prev < 1e-2 * std::abs(decoupled_amplitude(step, fine(0.1), 1.0, 1.05, 0.0).I));
    }

    TEST_CASE("regime checks") {
        PotentialSpec bump(GaussianBump{0.05, 1.0, 0.0});
        CHECK_THROWS_AS(emission_amplitude(bump, fine(), 1.0, -1.0, 0.0, AmplitudeForm::reduced), ValidationError);
        CHECK_THROWS_AS(emission_amplitude(bump, fine(), 1.0, 1.0, 1.5, AmplitudeForm::reduced), ValidationError);
        CHECK_THROWS_AS(emission_amplitude(bump, fine(), 0.2, 1.0, 0.0, AmplitudeForm::reduced), RegimeError);
        // photon faster than the phase velocity allows
        PotentialSpec fast(GaussianBump{0.05, 1.0, 0.0});
        CHECK_THROWS_AS(emission_amplitude(fast, fine(), 3.0, 1.0, 0.9, AmplitudeForm::reduced), RegimeError);
    }
}

TEST_SUITE("momentum scaling identity") {
    TEST_CASE("k = 0 on the smooth step") {
        PotentialSpec step(SmoothStep{0.02, 1.0, 0.0});
        CHECK(scaling_identity_residual(step, fine(), 1.0, 0.0) <= 1e-8);
    }

    TEST_CASE("straight-line profiles satisfy it at any (p, k)") {
        const PotentialSpec specs[] = {PotentialSpec(SmoothStep{0.02, 1.0, 0.0}),
                                       PotentialSpec(GaussianBump{-0.03, 0.7, 2.0})};
        for (const auto& spec : specs)
            for (double p : {0.8, 1.0, 1.7})
                for (double k : {0.1, 0.9, 2.5})
                    CHECK(scaling_identity_residual(spec, fine(), p, k) <= 1e-6);
    }

    TEST_CASE("exact trajectories break it at first order in V0 (diagnostic only)") {
        PotentialSpec step(SmoothStep{0.02, 1.0, 0.0});
        const double r1 = scaling_identity_residual(step, fine(), 1.0, 0.5, AccelMode::exact);
        PotentialSpec half(SmoothStep{0.01, 1.0, 0.0});
        const double r2 = scaling_identity_residual(half, fine(), 1.0, 0.5, AccelMode::exact);
        CHECK(r1 > 1e-4);
        CHECK(r1 / r2 == doctest::Approx(2.0).epsilon(0.1));
    }
}

TEST_SUITE("wave packet") {
    TEST_CASE("normalisation, sharpness, potential floor") {
        auto pk = make_wave_packet(2.0, 0.1);
        CHECK(std::abs(pk.norm() - 1) < 1e-10);
        CHECK_THROWS_AS(make_wave_packet(1.0, 0.2), ValidationError);
        PotentialSpec strong(GaussianBump{0.05, 1.0, 0.0});
        CHECK_THROWS_AS(check_packet(make_wave_packet(1.0, 0.1), strong, fine()), RegimeError);
        CHECK_NOTHROW(check_packet(make_wave_packet(3.0, 0.1), strong, fine()));
    }

    TEST_CASE("bilinear form: real packets have no position, displaced ones sit at z_c") {
        auto real_packet = make_wave_packet(1.0, 0.05);
        CHECK(std::abs(bilinear(real_packet, real_packet.f, real_packet.df, real_packet.f, real_packet.df)) < 1e-14);
        for (double zc : {-2.0, 0.7, 5.0}) {
            auto pk = make_wave_packet(1.0, 0.05, zc);
            const cplx ff = bilinear(pk, pk.f, pk.df, pk.f, pk.df);
            CHECK(ff.real() == doctest::Approx(zc).epsilon(1e-10));
            CHECK(std::abs(ff.imag()) < 1e-12);
        }
    }
}

TEST_SUITE("quantum position shift") {
    TEST_CASE("no potential, no shift") {
        PotentialSpec flat(GaussianBump{0.0, 1.0, -20.0});
        auto q = quantum_position_shift(make_wave_packet(1.0, 0.1), flat, fine());
        CHECK(q.shift == 0.0);
        CHECK(q.emission_prob_term == 0.0);
    }

    TEST_CASE("converges to the classical Larmor shift as the packet narrows") {
        const auto params = fine();
        PotentialSpec bump(GaussianBump{0.002, 1.0, -20.0});
        const double p = 1.0;
        auto centre = acceleration_profile(bump, params, p, AccelMode::straight_line);
        auto spec = spectral::spectralize(centre);
        const double classical = spectral::larmor_shift_fourier(spec, p, params).real();
        double prev = INFINITY;
        for (double ratio : {0.1, 0.05, 0.025}) {
            auto q = quantum_position_shift(make_wave_packet(p, ratio * p), bump, params);
            const double gap = std::abs(q.shift - classical);
            CHECK(gap < prev);
            prev = gap;
            CHECK(std::abs(q.imag) <= 1e-10 * std::abs(q.shift) + 1e-14);
            // same formula through the spectral module
            const auto prob = spectral::emission_probability(spec, params, 0.0);
            CHECK(q.emission_prob_term == doctest::Approx(prob.prob).epsilon(1e-10));
            const auto energy = spectral::expected_photon_energy(centre, spec, params);
            CHECK(q.photon_energy == doctest::Approx(energy.freq_domain).epsilon(1e-10));
        }
        CHECK(prev < 5e-3 * std::abs(classical));
    }

    TEST_CASE("second order in the potential") {
        const auto params = fine();
        auto pk = make_wave_packet(1.0, 0.05);
        const double s1 = quantum_position_shift(pk, PotentialSpec(GaussianBump{0.001, 1.0, -20.0}), params).shift;
        const double s2 = quantum_position_shift(pk, PotentialSpec(GaussianBump{0.002, 1.0, -20.0}), params).shift;
        CHECK(s2 / s1 == doctest::Approx(4.0).epsilon(1e-3));
        CHECK(s1 < 0);
    }

    TEST_CASE("smooth step: shift is finite, probability term reports the divergence") {
        const auto params = fine();
        PotentialSpec step(SmoothStep{-0.002, 1.0, -20.0});
        auto q = quantum_position_shift(make_wave_packet(1.0, 0.05), step, params);
        CHECK(std::isfinite(q.shift));
        CHECK(q.ir_divergent);
        CHECK(q.ir_error.has_value());
        CHECK(std::isnan(q.emission_prob_term));
        QuantumOptions cut;
        cut.k_min = 1e-4;
        auto qc = quantum_position_shift(make_wave_packet(1.0, 0.05), step, params, cut);
        CHECK(qc.emission_prob_term > 0);
        CHECK(qc.shift == doctest::Approx(q.shift).epsilon(1e-14));
    }

    TEST_CASE("direct (z)_0: probability times position plus the shift") {
        const auto params = fine();
        PotentialSpec bump(GaussianBump{0.002, 1.0, -20.0});
        const double zc = 3.0;
        auto pk = make_wave_packet(1.0, 0.05, zc);
        auto d = direct_position_expectation(pk, bump, params);
        auto q = quantum_position_shift(pk, bump, params);
        CHECK(d.bilinear_ff.real() == doctest::Approx(zc).epsilon(1e-10));
        CHECK(d.shift_term == doctest::Approx(q.shift).epsilon(1e-8));
        // packet-averaged probability term approaches <f,f> P(p_bar)
        CHECK(d.probability_term == doctest::Approx(zc * q.emission_prob_term).epsilon(0.02));
    }
}
