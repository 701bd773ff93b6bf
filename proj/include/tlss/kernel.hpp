#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "tlss/errors.hpp"
#include "tlss/normal.hpp"

namespace tlss {

enum class Family { Normal, Laplace, Cauchy, Logistic };

inline std::string_view to_string(Family family) {
    switch (family) {
    case Family::Normal: return "normal";
    case Family::Laplace: return "laplace";
    case Family::Cauchy: return "cauchy";
    case Family::Logistic: return "logistic";
    }
    return "unknown";
}

inline std::optional<Family> parse_family(std::string_view name) {
    if (name == "normal") return Family::Normal;
    if (name == "laplace") return Family::Laplace;
    if (name == "cauchy") return Family::Cauchy;
    if (name == "logistic") return Family::Logistic;
    return std::nullopt;
}

/// Kernels whose raw moments of every order exist.
inline bool has_moments(Family family) { return family != Family::Cauchy; }

namespace detail {

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}

inline void require_probability(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("probability must lie in the open interval (0,1)");
    }
}

// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

} // namespace detail

/// A symmetric base distribution: one of four families with a location and a
/// positive scale (sigma, b, xi or s depending on the family).
///
/// Every density formula is written in the standardized variable
/// z = (x - location) / scale. Values are immutable after construction.
class KernelSpec {
public:
    KernelSpec(Family family, double location, double scale)
        : family_(family), location_(location), scale_(scale) {
        detail::require_finite(location, "kernel location");
        if (!(scale > 0.0) || !std::isfinite(scale)) {
            throw DomainError("kernel scale must be positive and finite");
        }
    }

    static KernelSpec standard(Family family) { return KernelSpec(family, 0.0, 1.0); }

    Family family() const noexcept { return family_; }
    double location() const noexcept { return location_; }
    double scale() const noexcept { return scale_; }

    double standardize(double x) const noexcept { return (x - location_) / scale_; }

    double pdf(double x) const {
        detail::require_finite(x, "x");
        return std_pdf(family_, standardize(x)) / scale_;
    }

    /// Evaluated without forming the density, so far tails stay finite.
    double log_pdf(double x) const {
        detail::require_finite(x, "x");
        return std_log_pdf(family_, standardize(x)) - std::log(scale_);
    }

    double cdf(double x) const {
        if (std::isnan(x)) throw DomainError("x must not be NaN");
        if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
        return std_cdf(family_, standardize(x));
    }

    double log_cdf(double x) const {
        detail::require_finite(x, "x");
        return std_log_cdf(family_, standardize(x));
    }

    /// 1 - F(x) computed from the mirrored lower tail.
    double survival(double x) const {
        detail::require_finite(x, "x");
        return std_cdf(family_, -standardize(x));
    }

    double quantile(double p) const {
        detail::require_probability(p);
        return location_ + scale_ * std_quantile(family_, p);
    }

    /// f'(x). Throws SingularityError for the Laplace kernel at its location.
    double pdf_derivative(double x) const {
        detail::require_finite(x, "x");
        const double z = standardize(x);
        if (family_ == Family::Laplace && z == 0.0) {
            throw SingularityError("Laplace density is not differentiable at its location");
        }
        return std_pdf_derivative(family_, z) / (scale_ * scale_);
    }

    /// One-sided derivative limits at x; differ only at the Laplace kink.
    double pdf_derivative_left(double x) const {
        const double z = standardize(x);
        if (family_ == Family::Laplace && z == 0.0) return 0.5 / (scale_ * scale_);
        return pdf_derivative(x);
    }

    double pdf_derivative_right(double x) const {
        const double z = standardize(x);
        if (family_ == Family::Laplace && z == 0.0) return -0.5 / (scale_ * scale_);
        return pdf_derivative(x);
    }

    // Standardized forms (location 0, scale 1).

    static double std_pdf(Family family, double z) {
        switch (family) {
        case Family::Normal: return normal::pdf(z);
        case Family::Laplace: return 0.5 * std::exp(-std::fabs(z));
        case Family::Cauchy: return 1.0 / (std::numbers::pi * (1.0 + z * z));
        case Family::Logistic: {
            const double e = std::exp(-std::fabs(z));
            return e / ((1.0 + e) * (1.0 + e));
        }
        }
        return 0.0;
    }

    static double std_log_pdf(Family family, double z) {
        switch (family) {
        case Family::Normal: return normal::log_pdf(z);
        case Family::Laplace: return -std::fabs(z) - std::numbers::ln2;
        case Family::Cauchy: {
            const double a = std::fabs(z);
            if (a > 1e8) return -std::log(std::numbers::pi) - 2.0 * std::log(a) - std::log1p(1.0 / (a * a));
            return -std::log(std::numbers::pi) - std::log1p(z * z);
        }
        case Family::Logistic: {
            const double a = std::fabs(z);
            return -a - 2.0 * std::log1p(std::exp(-a));
        }
        }
        return 0.0;
    }

    static double std_cdf(Family family, double z) {
        switch (family) {
        case Family::Normal: return normal::cdf(z);
        case Family::Laplace: return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
        case Family::Cauchy:
            // atan(-1/z)/pi keeps relative precision in the lower tail.
            if (z < -1.0) return std::atan(-1.0 / z) / std::numbers::pi;
            return 0.5 + std::atan(z) / std::numbers::pi;
        case Family::Logistic: return 1.0 / (1.0 + std::exp(-z));
        }
        return 0.0;
    }

    static double std_log_cdf(Family family, double z) {
        switch (family) {
        case Family::Normal: return normal::log_cdf(z);
        case Family::Laplace:
            return z < 0.0 ? z - std::numbers::ln2 : std::log1p(-0.5 * std::exp(-z));
        case Family::Cauchy:
            if (z < -1.0) return std::log(std::atan(-1.0 / z) / std::numbers::pi);
            return std::log(0.5 + std::atan(z) / std::numbers::pi);
        case Family::Logistic: return -detail::softplus(-z);
        }
        return 0.0;
    }

    static double std_quantile(Family family, double p) {
        switch (family) {
        case Family::Normal: return normal::quantile(p);
        case Family::Laplace:
            return p < 0.5 ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p));
        case Family::Cauchy:
            if (p == 0.5) return 0.0;
            return p < 0.5 ? -1.0 / std::tan(std::numbers::pi * p)
                           : 1.0 / std::tan(std::numbers::pi * (1.0 - p));
        case Family::Logistic: return std::log(p) - std::log1p(-p);
        }
        return 0.0;
    }

    static double std_pdf_derivative(Family family, double z) {
        switch (family) {
        case Family::Normal: return -z * normal::pdf(z);
        case Family::Laplace: return (z > 0.0 ? -0.5 : 0.5) * std::exp(-std::fabs(z));
        case Family::Cauchy: {
            const double d = 1.0 + z * z;
            return -2.0 * z / (std::numbers::pi * d * d);
        }
        case Family::Logistic: return -std_pdf(family, z) * std::tanh(0.5 * z);
        }
        return 0.0;
    }

private:
    Family family_;
    double location_;
    double scale_;
};

inline bool operator==(const KernelSpec& a, const KernelSpec& b) {
    return a.family() == b.family() && a.location() == b.location() && a.scale() == b.scale();
}

} // namespace tlss
