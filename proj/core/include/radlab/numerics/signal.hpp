#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "radlab/error.hpp"

namespace radlab::numerics {

inline constexpr double kDefaultSupportTol = 1e-12;

/// Samples of a compactly supported function on a strictly increasing grid.
///
/// Compact support is checked at construction: both endpoint magnitudes must
/// not exceed `support_tol` times the peak magnitude.
template <typename T>
class BasicSampledSignal {
public:
    using value_type = T;

    BasicSampledSignal() = default;

    BasicSampledSignal(std::vector<double> grid, std::vector<T> values,
                       double support_tol = kDefaultSupportTol)
        : grid_(std::move(grid)), values_(std::move(values)), support_tol_(support_tol) {
        if (grid_.size() < 2) throw ValidationError("sampled signal needs at least 2 samples");
        if (grid_.size() != values_.size())
            throw ValidationError("sampled signal: grid and values differ in length");
        for (std::size_t i = 1; i < grid_.size(); ++i)
            if (!(grid_[i] > grid_[i - 1]))
                throw ValidationError("sampled signal: grid not strictly increasing at index " +
                                      std::to_string(i));
        if (!(support_tol_ > 0)) throw ValidationError("sampled signal: support_tol must be positive");
        for (const auto& v : values_) peak_ = std::max(peak_, std::abs(v));
        const double limit = support_tol_ * peak_;
        if (std::abs(values_.front()) > limit || std::abs(values_.back()) > limit)
            throw SupportError("sampled signal does not decay to support_tol at the window edges (|front| = " +
                               std::to_string(std::abs(values_.front())) + ", |back| = " +
                               std::to_string(std::abs(values_.back())) + ", peak = " +
                               std::to_string(peak_) + ")");
    }

    const std::vector<double>& grid() const noexcept { return grid_; }
    const std::vector<T>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return grid_.size(); }
    double support_tol() const noexcept { return support_tol_; }
    double peak() const noexcept { return peak_; }
    double front() const { return grid_.front(); }
    double back() const { return grid_.back(); }

    double max_spacing() const {
        double h = 0;
        for (std::size_t i = 1; i < grid_.size(); ++i) h = std::max(h, grid_[i] - grid_[i - 1]);
        return h;
    }

private:
    std::vector<double> grid_;
    std::vector<T> values_;
    double support_tol_ = kDefaultSupportTol;
    double peak_ = 0;
};

using SampledSignal = BasicSampledSignal<double>;
using ComplexSignal = BasicSampledSignal<std::complex<double>>;

}  // namespace radlab::numerics
