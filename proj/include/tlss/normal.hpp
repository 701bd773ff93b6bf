#pragma once

// Standard normal special functions shared by the Normal kernel, the
// lognormal competitor model and the interval code.

#include <cmath>
#include <numbers>

namespace tlss::normal {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

inline double pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

inline double log_pdf(double z) { return -0.5 * z * z - kLogSqrt2Pi; }

/// Phi(z) through glibc erfc, which is accurate to a few ulp over the whole
/// range, so the lower tail keeps full relative precision down to ~1e-308.
inline double cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0); }

inline double log_cdf(double z) {
    if (z > 0.0) {
        return std::log1p(-0.5 * std::erfc(z * std::numbers::sqrt2 / 2.0));
    }
    if (z > -37.0) {
        return std::log(cdf(z));
    }
    // Mills-ratio asymptotic series; relative error below 1e-13 for z < -37.
    const double w = 1.0 / (z * z);
    const double series = 1.0 - w * (1.0 - w * (3.0 - w * (15.0 - w * 105.0)));
    return log_pdf(z) - std::log(-z) + std::log(series);
}

namespace detail {

// Wichura's AS241 (PPND16) rational approximations, |error| ~ 1e-16.
inline double as241(double p) {
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            ((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608;
        const double den =
            ((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0;
        return q * num / den;
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            ((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
             4.6303378461565452959) * r + 1.42343711074968357734;
        const double den =
            ((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
             2.05319162663775882187) * r + 1.0;
        value = num / den;
    } else {
        r -= 5.0;
        const double num =
            ((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
             5.4637849111641143699) * r + 6.6579046435011037772;
        const double den =
            ((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
             0.59983220655588793769) * r + 1.0;
        value = num / den;
    }
    return q < 0.0 ? -value : value;
}

} // namespace detail

/// Phi^{-1}(p) for p in (0,1). The upper half is computed as -Phi^{-1}(1-p),
/// which is exact in floating point for p >= 1/2, followed by one Halley
/// step against erfc.
inline double quantile(double p) {
    if (p > 0.5) {
        return -quantile(1.0 - p);
    }
    double x = detail::as241(p);
    const double density = pdf(x);
    if (density > 0.0) {
        const double step = (cdf(x) - p) / density;
        x -= step / (1.0 + 0.5 * x * step);
    }
    return x;
}

} // namespace tlss::normal
