#pragma once

#include <algorithm>
#include <cmath>
#include <string_view>
#include <vector>

#include "tlss/distribution.hpp"

namespace tlss {

enum class ModeKind { Maximum, Minimum, Inflection };

inline std::string_view to_string(ModeKind kind) {
    switch (kind) {
    case ModeKind::Maximum: return "maximum";
    case ModeKind::Minimum: return "minimum";
    case ModeKind::Inflection: return "inflection";
    }
    return "unknown";
}

/// A stationary point of the TLSS density.
struct ModeResult {
    double location = 0.0;
    ModeKind kind = ModeKind::Maximum;
    /// f_X'/f_X^2 - lambda tanh(lambda F_X / 2) at location; 0 at the Laplace kink.
    double residual = 0.0;
    /// True for the non-differentiable Laplace centre.
    bool at_kink = false;
};

inline constexpr double kDefaultModeRadius = 10.0;
inline constexpr int kDefaultModeGridPoints = 400;

namespace detail {

// Second derivative of the density by central differences.
inline double pdf_second_derivative(const TlssDistribution& d, double y) {
    const double h = 1e-4 * d.kernel().scale();
    return (d.pdf(y + h) - 2.0 * d.pdf(y) + d.pdf(y - h)) / (h * h);
}

inline ModeKind classify(const TlssDistribution& d, double y) {
    const double curvature = pdf_second_derivative(d, y);
    if (std::fabs(curvature) <= 1e-7) return ModeKind::Inflection;
    return curvature < 0.0 ? ModeKind::Maximum : ModeKind::Minimum;
}

} // namespace detail

/// Stationary points of f_Y, from the stationarity condition
///
///   f_X'(y) / f_X(y)^2 = lambda tanh(lambda F_X(y) / 2),
///
/// which is (1+e^{-t}) f_X' - lambda f_X^2 (1-e^{-t}) = 0 with t = lambda F_X.
/// Sign changes are bracketed on a uniform grid over location +- radius*scale,
/// refined by bisection, and classified by the numerical second derivative.
/// The Laplace centre is examined separately through one-sided slopes.
/// Results are sorted by location; an empty list means no sign change.
inline std::vector<ModeResult> find_modes(const TlssDistribution& d,
                                          double search_radius = kDefaultModeRadius,
                                          int grid_points = kDefaultModeGridPoints) {
    if (grid_points < 16) throw DomainError("find_modes needs at least 16 grid points");
    if (!(search_radius > 0.0) || !std::isfinite(search_radius)) {
        throw DomainError("search radius must be positive");
    }
    const KernelSpec& k = d.kernel();
    const double lambda = d.is_limit() ? 0.0 : d.lambda();
    const bool laplace = k.family() == Family::Laplace;
    const double center = k.location();

    // Sign of d f_Y / dy up to the positive factor weight_peak * sech^2.
    auto slope_with = [&](double y, double derivative) {
        const double f = k.pdf(y);
        return derivative - lambda * f * f * std::tanh(0.5 * lambda * k.cdf(y));
    };
    auto slope_left = [&](double y) { return slope_with(y, k.pdf_derivative_left(y)); };
    auto slope_right = [&](double y) { return slope_with(y, k.pdf_derivative_right(y)); };
    auto residual = [&](double y) {
        const double f = k.pdf(y);
        return k.pdf_derivative(y) / (f * f) - lambda * std::tanh(0.5 * lambda * k.cdf(y));
    };

    std::vector<double> grid(static_cast<std::size_t>(grid_points));
    const double lo = center - search_radius * k.scale();
    const double hi = center + search_radius * k.scale();
    for (int i = 0; i < grid_points; ++i) {
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / (grid_points - 1);
    }
    if (laplace) {
        grid.push_back(center);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    }

    std::vector<ModeResult> modes;
    auto add_root = [&](double y) {
        modes.push_back({y, detail::classify(d, y), residual(y), false});
    };

    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        double a = grid[i];
        double b = grid[i + 1];
        const double sa = slope_right(a);
        const double sb = slope_left(b);
        if (sa == 0.0 && !(laplace && a == center) && k.pdf(a) > 0.0) {
            add_root(a);
            continue;
        }
        if (!(sa * sb < 0.0)) continue;
        double fa = sa;
        for (int iter = 0; iter < 200 && b - a > 1e-12 * std::max(1.0, std::fabs(a)); ++iter) {
            const double m = 0.5 * (a + b);
            const double fm = slope_right(m);
            if (fm == 0.0) {
                a = b = m;
                break;
            }
            if ((fm < 0.0) == (fa < 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        add_root(0.5 * (a + b));
    }

    if (laplace) {
        const double left = slope_left(center);
        const double right = slope_right(center);
        if (left > 0.0 && right < 0.0) {
            modes.push_back({center, ModeKind::Maximum, 0.0, true});
        } else if (left < 0.0 && right > 0.0) {
            modes.push_back({center, ModeKind::Minimum, 0.0, true});
        }
    }

    std::sort(modes.begin(), modes.end(),
              [](const ModeResult& x, const ModeResult& y) { return x.location < y.location; });
    return modes;
}

} // namespace tlss
