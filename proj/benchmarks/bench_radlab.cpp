#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "radlab/classical_shifts.hpp"
#include "radlab/lorentz_dirac.hpp"
#include "radlab/numerics/fourier.hpp"
#include "radlab/qed_wkb.hpp"
#include "radlab/spectral.hpp"

using namespace radlab;
using namespace radlab::potentials;

namespace {

const PotentialSpec& bump() {
    static const PotentialSpec spec(GaussianBump{0.002, 1.0, -20.0});
    return spec;
}

const PotentialSpec& step() {
    static const PotentialSpec spec(SmoothStep{0.002, 1.0, -20.0});
    return spec;
}

}  // namespace

// One Filon-type transform of a sampled pulse, per wavenumber.
static void BM_FourierEvaluate(benchmark::State& state) {
    const auto accel = acceleration_profile(bump(), PhysicalParams{}, 1.0, AccelMode::exact);
    const numerics::FourierTransformer<double> ft(accel.signal);
    double k = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ft.evaluate(k));
        k = k < 5 ? k + 0.37 : 0.1;
    }
    state.counters["samples"] = static_cast<double>(accel.signal.size());
}
BENCHMARK(BM_FourierEvaluate);

static void BM_ClassicalTrajectory(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(classical_trajectory(step(), PhysicalParams{}, 1.0));
}
BENCHMARK(BM_ClassicalTrajectory)->Unit(benchmark::kMillisecond);

static void BM_ShiftDifference(benchmark::State& state) {
    const auto traj = classical_trajectory(step(), PhysicalParams{}, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(classical_shifts::shift_difference(traj, PhysicalParams{}));
}
BENCHMARK(BM_ShiftDifference)->Unit(benchmark::kMillisecond);

static void BM_Spectralize(benchmark::State& state) {
    const auto accel = acceleration_profile(bump(), PhysicalParams{}, 1.0, AccelMode::exact);
    for (auto _ : state) benchmark::DoNotOptimize(spectral::spectralize(accel));
}
BENCHMARK(BM_Spectralize)->Unit(benchmark::kMillisecond);

static void BM_KernelForce(benchmark::State& state) {
    const lorentz_dirac::ForceProfile box = lorentz_dirac::BoxForce{1.0, 0.0, 1.0};
    PhysicalParams P;
    double tau = -0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lorentz_dirac::kernel_force(box, P, tau));
        tau = tau < 1.1 ? tau + 0.013 : -0.01;
    }
}
BENCHMARK(BM_KernelForce);

// Arg: wavenumber in tenths
static void BM_EmissionAmplitude(benchmark::State& state) {
    const double k = static_cast<double>(state.range(0)) / 10;
    const auto form = state.range(1) ? qed_wkb::AmplitudeForm::exact_wkb : qed_wkb::AmplitudeForm::reduced;
    PhysicalParams P;
    P.hbar_eff = 1e-3;
    for (auto _ : state) benchmark::DoNotOptimize(qed_wkb::emission_amplitude(bump(), P, 1.0, k, 0.0, form));
}
BENCHMARK(BM_EmissionAmplitude)->Args({5, 0})->Args({5, 1})->Args({30, 0})->Args({30, 1})->Unit(benchmark::kMillisecond);

static void BM_QuantumShift(benchmark::State& state) {
    const auto packet = qed_wkb::make_wave_packet(1.0, 0.05);
    for (auto _ : state) benchmark::DoNotOptimize(qed_wkb::quantum_position_shift(packet, bump(), PhysicalParams{}));
}
BENCHMARK(BM_QuantumShift)->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK_MAIN();
