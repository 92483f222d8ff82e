#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "radlab/numerics/signal.hpp"
#include "radlab/numerics/spline.hpp"
#include "radlab/physical_params.hpp"
#include "radlab/potentials.hpp"

namespace radlab::potentials {

struct SamplingPolicy {
    /// Samples per characteristic length (or its transit time).
    std::size_t samples_per_scale = 64;
    double support_tol = numerics::kDefaultSupportTol;
    /// Minimum of (E - V) / E along the path.
    double kinetic_dominance = 0.5;
    /// Overrides the potential's support window.
    std::optional<Window> window;
};

/// Exact z <-> t map of the radiation-free motion with final momentum p, t(0) = 0.
class FlightMap {
public:
    FlightMap(PotentialSpec spec, PhysicalParams params, double p, Window z_range, double dz);

    /// v_p(z) = sqrt(p^2 - 2 m V(z)) / m.
    double velocity(double z) const;
    double time_at(double z) const;
    double position_at(double t) const;

    double z_front() const noexcept { return z_.front(); }
    double z_back() const noexcept { return z_.back(); }
    double t_front() const noexcept { return t_.front(); }
    double t_back() const noexcept { return t_.back(); }
    double max_velocity() const noexcept { return v_max_; }

private:
    PotentialSpec spec_;
    PhysicalParams params_;
    double p_;
    double dz_;
    std::vector<double> z_, t_;
    double v_max_ = 0;
    numerics::MonotoneCubic guess_;  // t -> z
};

struct Kinematics {
    double z = 0;
    double v = 0;
    double a = 0;
    double jerk = 0;  // dv/dt twice: -V''(z) v / m
};

/// Sampled unperturbed motion. t = 0 at z = 0 and t = 0 is always a sample.
struct Trajectory {
    double p = 0;
    double E = 0;
    double v_init = 0;
    double v_fin = 0;
    std::vector<double> t, z, v, a;

    PotentialSpec potential{potentials::GaussianBump{}};
    PhysicalParams params;
    std::shared_ptr<const FlightMap> map;

    /// Exact kinematics at arbitrary t (through the flight map, not the samples).
    Kinematics at(double time) const;
    Kinematics at_position(double zpos) const;
};

/// Throws RegimeError on a turning point or a kinetic-dominance violation.
void check_regime(const PotentialSpec& spec, const PhysicalParams& params, double p, double kinetic_dominance);

Trajectory classical_trajectory(const PotentialSpec& spec, const PhysicalParams& params, double p,
                                const SamplingPolicy& policy = {});

enum class AccelMode { exact, straight_line, sampled };

const char* to_string(AccelMode mode);

struct AccelerationProfile {
    numerics::SampledSignal signal;
    AccelMode mode = AccelMode::sampled;
    double p = 0;
    /// Integral of a dt, by adaptive quadrature of the analytic profile.
    double integral = 0;
};

/// exact: a(t) = -V'(z(t))/m along the trajectory; straight_line: a(t) = -V'(p t/m)/m.
/// The straight-line samples sit at t_j = m z_j / p on a p-independent z grid.
AccelerationProfile acceleration_profile(const PotentialSpec& spec, const PhysicalParams& params, double p,
                                         AccelMode mode, const SamplingPolicy& policy = {});

/// Wraps an externally sampled acceleration (mode = sampled).
AccelerationProfile profile_from_signal(numerics::SampledSignal signal, double p);

}  // namespace radlab::potentials
