#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "radlab/numerics/spline.hpp"
#include "radlab/physical_params.hpp"

namespace radlab::potentials {

/// V(z) = (V0/2)(1 - tanh((z - z0)/L)); V0 on the far left, 0 on the far right.
struct SmoothStep {
    double V0 = 0;
    double L = 1;
    double z0 = 0;
};

/// V(z) = V0 exp(-(z - z0)^2 / 2 w^2); equal asymptotic potentials.
struct GaussianBump {
    double V0 = 0;
    double w = 1;
    double z0 = 0;
};

enum class Extrapolation { constant, none };

/// Knot data interpolated by a clamped cubic spline with zero end slopes.
struct Tabulated {
    std::vector<double> z;
    std::vector<double> V;
    Extrapolation extrapolation = Extrapolation::constant;
};

using PotentialFamily = std::variant<SmoothStep, GaussianBump, Tabulated>;

struct PotentialValue {
    double V = 0;
    double dV = 0;
    double d2V = 0;
};

struct Window {
    double lo = 0;
    double hi = 0;
    double width() const noexcept { return hi - lo; }
};

/// An asymptotically constant smooth 1D potential with analytic derivatives.
///
/// The support window is the interval outside of which |V'| <= support_tol * max|V'|
/// (widened by one length scale on each side).
class PotentialSpec {
public:
    explicit PotentialSpec(PotentialFamily family, double support_tol = 1e-12);

    PotentialValue eval(double z) const;
    double value(double z) const { return eval(z).V; }

    const PotentialFamily& family() const noexcept { return family_; }
    Window support_window() const noexcept { return window_; }
    double support_tol() const noexcept { return support_tol_; }

    double max_potential() const noexcept { return v_max_; }
    /// Location of the potential maximum (a window edge when the supremum is asymptotic).
    double argmax_potential() const noexcept { return z_at_max_; }
    double max_abs_potential() const noexcept { return v_abs_max_; }
    double max_abs_force() const noexcept { return dv_abs_max_; }

    /// Characteristic length over which V varies.
    double length_scale() const noexcept { return length_; }

    /// Family name: "smooth_step", "gaussian_bump" or "tabulated".
    std::string family_name() const;

private:
    PotentialFamily family_;
    double support_tol_;
    std::optional<numerics::CubicSpline<double>> spline_;
    Window window_;
    double v_max_ = 0, z_at_max_ = 0, v_abs_max_ = 0, dv_abs_max_ = 0, length_ = 1;
};

PotentialValue potential_eval(const PotentialSpec& spec, double z);

/// Reads a two-column (z, V) text file; '#' starts a comment, z must increase strictly.
Tabulated load_tabulated_potential(const std::filesystem::path& path,
                                   Extrapolation extrapolation = Extrapolation::constant);

}  // namespace radlab::potentials
