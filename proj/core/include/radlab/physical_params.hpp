#pragma once

namespace radlab {

/// Mass, coupling alpha = e^2 / 4 pi and the semiclassical scale, in units hbar = c = 1.
struct PhysicalParams {
    double m = 1.0;
    double alpha = 1.0 / 137.036;
    double hbar_eff = 1.0;

    /// Throws ValidationError unless m > 0, alpha >= 0 and hbar_eff > 0.
    void validate() const;

    /// Radiation-reaction time 2 alpha / 3m.
    double tau0() const noexcept { return 2.0 * alpha / (3.0 * m); }
};

}  // namespace radlab
