#include "radlab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "radlab/error.hpp"

namespace radlab {

void PhysicalParams::validate() const {
    if (!(m > 0) || !std::isfinite(m)) throw ValidationError("physical params: mass m must be positive");
    if (!(alpha >= 0) || !std::isfinite(alpha)) throw ValidationError("physical params: alpha must be >= 0");
    if (!(hbar_eff > 0) || !std::isfinite(hbar_eff))
        throw ValidationError("physical params: hbar_eff must be positive");
}

}  // namespace radlab

namespace radlab::potentials {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

PotentialValue eval_step(const SmoothStep& s, double z) {
    const double u = (z - s.z0) / s.L;
    const double c = std::cosh(u);
    const double sech2 = std::isinf(c) ? 0.0 : 1.0 / (c * c);
    // 1 - tanh(u) = e^{-u} / cosh(u) keeps full relative precision on the right tail.
    const double one_minus_tanh = u < -20 ? 1.0 - std::tanh(u) : (std::isinf(c) ? 0.0 : std::exp(-u) / c);
    return {0.5 * s.V0 * one_minus_tanh, -0.5 * s.V0 / s.L * sech2, s.V0 / (s.L * s.L) * sech2 * std::tanh(u)};
}

PotentialValue eval_bump(const GaussianBump& b, double z) {
    const double x = (z - b.z0) / b.w;
    const double e = std::exp(-0.5 * x * x);
    return {b.V0 * e, -b.V0 * x * e / b.w, b.V0 * (x * x - 1) * e / (b.w * b.w)};
}

// Largest x > 1 with x exp((1 - x^2)/2) = tol: the Gaussian force relative to its peak.
double bump_support_halfwidth(double tol) {
    double lo = 1.0, hi = 60.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid * std::exp(0.5 * (1 - mid * mid)) > tol)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace

PotentialSpec::PotentialSpec(PotentialFamily family, double support_tol)
    : family_(std::move(family)), support_tol_(support_tol) {
    if (!(support_tol_ > 0 && support_tol_ < 1)) throw ValidationError("potential support_tol must lie in (0, 1)");
    std::visit(
        overloaded{
            [&](const SmoothStep& s) {
                if (!(s.L > 0)) throw ValidationError("smooth_step: L must be positive");
                if (!std::isfinite(s.V0) || !std::isfinite(s.z0)) throw ValidationError("smooth_step: non-finite V0/z0");
                const double u = std::acosh(1.0 / std::sqrt(support_tol_));
                window_ = {s.z0 - s.L * (u + 1), s.z0 + s.L * (u + 1)};
                length_ = s.L;
                v_abs_max_ = std::abs(s.V0);
                dv_abs_max_ = std::abs(s.V0) / (2 * s.L);
                if (s.V0 > 0) {
                    v_max_ = s.V0;
                    z_at_max_ = window_.lo;
                } else {
                    v_max_ = 0;
                    z_at_max_ = window_.hi;
                }
            },
            [&](const GaussianBump& b) {
                if (!(b.w > 0)) throw ValidationError("gaussian_bump: w must be positive");
                if (!std::isfinite(b.V0) || !std::isfinite(b.z0))
                    throw ValidationError("gaussian_bump: non-finite V0/z0");
                const double x = bump_support_halfwidth(support_tol_);
                window_ = {b.z0 - b.w * (x + 1), b.z0 + b.w * (x + 1)};
                length_ = b.w;
                v_abs_max_ = std::abs(b.V0);
                dv_abs_max_ = std::abs(b.V0) * std::exp(-0.5) / b.w;
                if (b.V0 > 0) {
                    v_max_ = b.V0;
                    z_at_max_ = b.z0;
                } else {
                    v_max_ = 0;
                    z_at_max_ = window_.hi;
                }
            },
            [&](const Tabulated& t) {
                if (t.z.size() < 4 || t.z.size() != t.V.size())
                    throw ValidationError("tabulated potential needs >= 4 (z, V) knots");
                spline_.emplace(t.z, t.V, numerics::SplineBoundary::clamped, 0.0, 0.0);
                window_ = {t.z.front(), t.z.back()};
                length_ = 4 * window_.width() / static_cast<double>(t.z.size() - 1);
                v_max_ = -INFINITY;
                for (std::size_t i = 0; i + 1 < t.z.size(); ++i) {
                    for (int j = 0; j <= 16; ++j) {
                        const double z = t.z[i] + (t.z[i + 1] - t.z[i]) * j / 16.0;
                        const double v = (*spline_)(z);
                        if (v > v_max_) {
                            v_max_ = v;
                            z_at_max_ = z;
                        }
                        v_abs_max_ = std::max(v_abs_max_, std::abs(v));
                        dv_abs_max_ = std::max(dv_abs_max_, std::abs(spline_->derivative(z)));
                    }
                }
            },
        },
        family_);
}

PotentialValue PotentialSpec::eval(double z) const {
    if (!std::isfinite(z)) {
        if (std::isnan(z)) throw DomainError("potential evaluated at NaN");
    }
    return std::visit(overloaded{
                          [&](const SmoothStep& s) {
                              if (std::isinf(z)) return PotentialValue{z < 0 ? s.V0 : 0.0, 0.0, 0.0};
                              return eval_step(s, z);
                          },
                          [&](const GaussianBump& b) {
                              if (std::isinf(z)) return PotentialValue{};
                              return eval_bump(b, z);
                          },
                          [&](const Tabulated& t) {
                              if (z < t.z.front() || z > t.z.back()) {
                                  if (t.extrapolation == Extrapolation::none)
                                      throw DomainError("tabulated potential queried outside its knot range at z = " +
                                                        std::to_string(z));
                                  return PotentialValue{z < t.z.front() ? t.V.front() : t.V.back(), 0.0, 0.0};
                              }
                              return PotentialValue{(*spline_)(z), spline_->derivative(z),
                                                    spline_->second_derivative(z)};
                          },
                      },
                      family_);
}

std::string PotentialSpec::family_name() const {
    return std::visit(overloaded{[](const SmoothStep&) { return std::string("smooth_step"); },
                                 [](const GaussianBump&) { return std::string("gaussian_bump"); },
                                 [](const Tabulated&) { return std::string("tabulated"); }},
                      family_);
}

PotentialValue potential_eval(const PotentialSpec& spec, double z) { return spec.eval(z); }

Tabulated load_tabulated_potential(const std::filesystem::path& path, Extrapolation extrapolation) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tabulated potential file " + path.string());
    Tabulated tab;
    tab.extrapolation = extrapolation;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        double z, v;
        if (!(fields >> z)) continue;  // blank or comment-only line
        if (!(fields >> v))
            throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected two columns (z, V)");
        std::string extra;
        if (fields >> extra)
            throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": unexpected third column");
        if (!tab.z.empty() && !(z > tab.z.back()))
            throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": z must increase strictly");
        tab.z.push_back(z);
        tab.V.push_back(v);
    }
    if (tab.z.size() < 4) throw ValidationError(path.string() + ": need at least 4 knots");
    return tab;
}

}  // namespace radlab::potentials
