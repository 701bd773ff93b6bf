#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "tlss/errors.hpp"
#include "tlss/kernel.hpp"

namespace tlss {

/// |lambda| below this is treated as the lambda -> 0 limit (the kernel itself).
inline constexpr double kLimitThreshold = 1e-6;

/// Largest supported |lambda|; beyond it the law is numerically degenerate.
inline constexpr double kMaxAbsLambda = 1e4;

namespace detail {

// log(cosh(x)) for any finite x.
inline double log_cosh(double x) {
    const double a = std::fabs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// log(sinh(a)) for a > 0.
inline double log_sinh(double a) {
    if (a < 20.0) return std::log(std::sinh(a));
    return a - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * a));
}

// log(tanh(a)) for a > 0.
inline double log_tanh(double a) {
    if (a < 1e-8) return std::log(a);
    if (a < 1.0) return std::log(std::tanh(a));
    const double e = std::exp(-2.0 * a);
    return std::log1p(-2.0 * e / (1.0 + e));
}

// sech^2(x) = 1/cosh^2(x); underflows gracefully to 0.
inline double sech2(double x) {
    const double c = std::cosh(x);
    return 1.0 / (c * c);
}

} // namespace detail

/// Normalizing constant 2(1+e^{-lambda})/(1-e^{-lambda}) of the truncated
/// logistic weight, written as 2/tanh(lambda/2).
inline double normalizer(double lambda) {
    if (lambda == 0.0 || !std::isfinite(lambda)) {
        throw DomainError("normalizer is undefined at lambda = 0; use the limit path");
    }
    return 2.0 / std::tanh(0.5 * lambda);
}

/// lambda * normalizer(lambda) / 4 = lambda / (2 tanh(lambda/2)), the maximum of
/// the weight function. Even in lambda, equal to 1 in the limit.
inline double weight_peak(double lambda) {
    const double a = std::fabs(lambda);
    if (a < kLimitThreshold) return 1.0 + lambda * lambda / 12.0;
    return 0.5 * a / std::tanh(0.5 * a);
}

inline double log_weight_peak(double lambda) {
    const double a = std::fabs(lambda);
    if (a < kLimitThreshold) return lambda * lambda / 12.0;
    return std::log(0.5 * a) - detail::log_tanh(0.5 * a);
}

struct TailRatios {
    double left;  ///< lim f_Y/f_X as y -> -inf
    double right; ///< lim f_Y/f_X as y -> +inf
};

/// Exact tail ratios of the density against its kernel:
/// left = lambda/(2 tanh(lambda/2)), right = lambda/sinh(lambda).
inline TailRatios tail_ratio_constants(double lambda) {
    const double a = std::fabs(lambda);
    if (a < kLimitThreshold) return {1.0, 1.0};
    const double right = a < 700.0 ? a / std::sinh(a) : std::exp(std::log(a) - detail::log_sinh(a));
    return {weight_peak(lambda), right};
}

/// The truncated-logistic skew-symmetric law: a symmetric kernel reweighted by
/// a truncated logistic density evaluated at the kernel cdf,
///
///   f_Y(y) = C(lambda) lambda f_X(y) e^{-lambda F_X(y)} / (1 + e^{-lambda F_X(y)})^2.
///
/// Internally the weight is written as weight_peak(lambda) * sech^2(lambda F/2).
/// Both factors are even in lambda, so the law for -lambda equals the law for
/// lambda.
class TlssDistribution {
public:
    TlssDistribution(KernelSpec kernel, double lambda) : kernel_(kernel), lambda_(lambda) {
        if (!std::isfinite(lambda) || std::fabs(lambda) > kMaxAbsLambda) {
            throw DomainError("lambda must be finite with |lambda| <= 1e4");
        }
    }

    const KernelSpec& kernel() const noexcept { return kernel_; }
    double lambda() const noexcept { return lambda_; }

    /// True when evaluations are routed to the kernel.
    bool is_limit() const noexcept { return std::fabs(lambda_) < kLimitThreshold; }

    double pdf(double y) const {
        const double f = kernel_.pdf(y);
        if (is_limit()) return f;
        const double cdf = kernel_.cdf(y);
        return f * weight_peak(lambda_) * detail::sech2(0.5 * lambda_ * cdf);
    }

    double log_pdf(double y) const {
        const double lf = kernel_.log_pdf(y);
        if (is_limit()) return lf;
        const double cdf = kernel_.cdf(y);
        return lf + log_weight_peak(lambda_) - 2.0 * detail::log_cosh(0.5 * lambda_ * cdf);
    }

    /// tanh(lambda F/2) / tanh(lambda/2); identical to the exponential form of
    /// the cdf via (1-e^{-t})/(1+e^{-t}) = tanh(t/2).
    double cdf(double y) const {
        const double f = kernel_.cdf(y);
        if (is_limit()) return f;
        const double a = 0.5 * std::fabs(lambda_);
        return std::tanh(a * f) / std::tanh(a);
    }

    double log_cdf(double y) const {
        if (!std::isinf(y) && kernel_.cdf(y) > 0.5) return std::log1p(-survival(y));
        const double lf = kernel_.log_cdf(y);
        if (is_limit()) return lf;
        const double a = 0.5 * std::fabs(lambda_);
        const double x = a * std::exp(lf);
        const double num = x < 1e-8 ? std::log(a) + lf : detail::log_tanh(x);
        return num - detail::log_tanh(a);
    }

    /// 1 - F_Y(y) = sinh(lambda S/2) / (sinh(lambda/2) cosh(lambda F/2)) with
    /// S = 1 - F_X(y) taken from the kernel's mirrored tail.
    double log_survival(double y) const {
        detail::require_finite(y, "y");
        const double z = kernel_.standardize(y);
        const double log_s = KernelSpec::std_log_cdf(kernel_.family(), -z);
        if (is_limit()) return log_s;
        const double a = 0.5 * std::fabs(lambda_);
        const double x = a * std::exp(log_s);
        const double num = x < 1e-8 ? std::log(a) + log_s : detail::log_sinh(x);
        return num - detail::log_sinh(a) - detail::log_cosh(a * kernel_.cdf(y));
    }

    double survival(double y) const {
        if (std::isinf(y)) return y > 0 ? 0.0 : 1.0;
        return std::exp(log_survival(y));
    }

    /// Closed-form inverse of the cdf: F_X(y) = (2/lambda) artanh(u tanh(lambda/2)).
    /// For u > 1/2 the kernel survival probability is computed directly so the
    /// upper tail keeps relative precision.
    double quantile(double u) const {
        detail::require_probability(u);
        if (is_limit()) return kernel_.quantile(u);
        const Family family = kernel_.family();
        const double a = 0.5 * std::fabs(lambda_);
        const double t = std::tanh(a);
        double z;
        if (u <= 0.5) {
            const double f = std::atanh(u * t) / a;
            z = KernelSpec::std_quantile(family, clamp_open(f));
        } else {
            const double v = 1.0 - u;
            double s;
            if (a <= 1.0) {
                s = std::atanh(t * v / (1.0 - u * t * t)) / a;
            } else {
                // Same identity with 1 - u t^2 - t v factored to avoid cancellation.
                const double e2 = std::exp(-2.0 * a);
                const double sum = v * t * t + 4.0 * e2 / ((1.0 + e2) * (1.0 + e2)) + t * v;
                const double log_diff =
                    -2.0 * a - std::log1p(e2) + std::log(4.0 / (1.0 + e2) - 2.0 * t * v);
                s = 0.5 * (std::log(sum) - log_diff) / a;
            }
            z = -KernelSpec::std_quantile(family, clamp_open(s));
        }
        return kernel_.location() + kernel_.scale() * z;
    }

private:
    static double clamp_open(double p) {
        if (p <= 0.0) return std::numeric_limits<double>::min();
        if (p >= 1.0) return std::nextafter(1.0, 0.0);
        return p;
    }

    KernelSpec kernel_;
    double lambda_;
};

} // namespace tlss
