#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "tlss/distribution.hpp"
#include "tlss/quadrature.hpp"

namespace tlss {

enum class MomentMethod { Quadrature, Series };

struct SeriesTruncation {
    int j_terms = 60;
    int k_terms = 60;
};

/// A request for E[Y^r].
struct MomentRequest {
    TlssDistribution distribution;
    int order = 1;
    MomentMethod method = MomentMethod::Quadrature;
    SeriesTruncation truncation{};
    double tolerance = 1e-9;
};

struct MomentValue {
    double value = 0.0;
    double error_bound = 0.0;
};

/// Largest |lambda| accepted by moment_series.
inline constexpr double kSeriesMaxAbsLambda = 2.0;

namespace detail {

inline void require_moments(const KernelSpec& k) {
    if (!has_moments(k.family())) {
        throw MomentError("moments of a Cauchy-kernel law do not exist");
    }
}

inline void require_order(int r) {
    if (r < 1) throw DomainError("moment order must be >= 1");
}

inline double ipow(double x, int r) {
    double result = 1.0;
    for (int i = 0; i < r; ++i) result *= x;
    return result;
}

/// Euler-transformed sum of the alternating series sum_{j>=1} (-1)^{j+1} j^n
/// using its first `terms` terms, evaluated in exact integer arithmetic.
/// Once terms > n every forward difference beyond order n vanishes and the
/// result is the Abel sum eta(-n) exactly.
inline double euler_alternating_power_sum(int n, int terms) {
    using boost::multiprecision::cpp_int;
    if (terms <= 0) return 0.0;
    std::vector<cpp_int> row(static_cast<std::size_t>(terms));
    for (int j = 0; j < terms; ++j) row[j] = boost::multiprecision::pow(cpp_int(j + 1), n);
    // numerator over 2^terms: sum_m (-1)^m (Delta^m a)_1 2^{terms-1-m}
    cpp_int numerator = 0;
    for (int m = 0; m < terms; ++m) {
        cpp_int head = row[0] << (terms - 1 - m);
        if (m % 2 == 0) numerator += head; else numerator -= head;
        for (int j = 0; j + 1 < terms - m; ++j) row[j] = row[j + 1] - row[j];
    }
    if (numerator == 0) return 0.0;
    const bool negative = numerator < 0;
    if (negative) numerator = -numerator;
    const auto bits = static_cast<int>(boost::multiprecision::msb(numerator));
    int shift = 0;
    if (bits > 62) {
        shift = bits - 62;
        numerator >>= shift;
    }
    const double mantissa = numerator.convert_to<double>();
    const double value = std::ldexp(mantissa, shift - terms);
    return negative ? -value : value;
}

} // namespace detail

/// E[Y^r] by adaptive tanh-sinh quadrature in kernel-probability coordinates.
inline double moment_quadrature(const TlssDistribution& d, int r) {
    detail::require_moments(d.kernel());
    detail::require_order(r);
    return expectation(d, [r](double y) { return detail::ipow(y, r); }).value;
}

/// E[|Y|^r].
inline double absolute_moment(const TlssDistribution& d, int r) {
    detail::require_moments(d.kernel());
    detail::require_order(r);
    return expectation(d, [r](double y) { return detail::ipow(std::fabs(y), r); }).value;
}

inline double mean(const TlssDistribution& d) { return moment_quadrature(d, 1); }

inline double variance(const TlssDistribution& d) {
    detail::require_moments(d.kernel());
    const double m = mean(d);
    return expectation(d, [m](double y) { return (y - m) * (y - m); }).value;
}

inline double skewness(const TlssDistribution& d) {
    detail::require_moments(d.kernel());
    const double m = mean(d);
    const double v = variance(d);
    const double c3 = expectation(d, [m](double y) { return detail::ipow(y - m, 3); }).value;
    return c3 / std::pow(v, 1.5);
}

/// E[X_{m:m}^r], the r-th raw moment of the maximum of m kernel draws.
inline double order_statistic_moment(const KernelSpec& k, int r, int m) {
    detail::require_moments(k);
    detail::require_order(r);
    if (m < 1) throw DomainError("order statistic sample size must be >= 1");
    return kernel_max_expectation(k, m, [r](double y) { return detail::ipow(y, r); }).value;
}

struct SeriesResult {
    double value = 0.0;
    double tail_bound = 0.0;
};

/// Double-series expansion of E[Y^r] in kernel order-statistic moments:
///
///   E[Y^r] = lambda C(lambda) sum_{k>=0} sum_{j>=1} (-1)^{j+1+k} j (lambda j)^k / k!
///            * E[X^r_{k+1:k+1}] / (k+1).
///
/// The j-sum diverges classically at F_X = 0, so for each k it is taken as the
/// Euler transform of its first j_terms terms, which is exact once
/// j_terms >= k+2; k-terms whose j-sum is not yet exact are left out. The
/// k-sum is the Taylor series of sech^2 and converges for |lambda| < pi.
/// tail_bound is the summed magnitude of the next four k-terms.
inline SeriesResult moment_series(const TlssDistribution& d, int r, int j_terms, int k_terms) {
    detail::require_moments(d.kernel());
    detail::require_order(r);
    const double lambda = d.lambda();
    if (std::fabs(lambda) > kSeriesMaxAbsLambda) {
        throw SeriesRangeError("moment series requires |lambda| <= 2; use moment_quadrature");
    }
    if (j_terms < 0 || k_terms < 0 || j_terms > 200 || k_terms > 200) {
        throw DomainError("series truncation indices must lie in [0, 200]");
    }
    const double prefactor = 4.0 * weight_peak(lambda); // lambda * C(lambda)

    auto term = [&](int k, int terms_j) {
        const double eta = detail::euler_alternating_power_sum(k + 1, terms_j);
        if (eta == 0.0) return 0.0;
        double coefficient = 1.0; // (-lambda)^k / k!
        for (int i = 1; i <= k; ++i) coefficient *= -lambda / i;
        const double shell = order_statistic_moment(d.kernel(), r, k + 1) / (k + 1);
        return prefactor * coefficient * eta * shell;
    };

    const int used = std::max(0, std::min(k_terms, j_terms - 1));
    SeriesResult result;
    for (int k = 0; k < used; ++k) result.value += term(k, j_terms);
    for (int k = used; k < used + 4; ++k) result.tail_bound += std::fabs(term(k, k + 2));
    return result;
}

/// E[e^{tY}]. Laplace and Logistic kernels require |t| < 1/scale.
inline double mgf_numeric(const TlssDistribution& d, double t) {
    const KernelSpec& k = d.kernel();
    detail::require_moments(k);
    if (!std::isfinite(t)) throw DomainError("t must be finite");
    if (k.family() != Family::Normal && !(std::fabs(t) * k.scale() < 1.0)) {
        throw DomainError("t lies outside the moment generating function domain |t| < 1/scale");
    }
    return expectation(d, [t](double y) { return std::exp(t * y); }).value;
}

namespace detail {

// Heavy tails make the probability-scale integrand oscillate without bound;
// integrate the even and odd parts of the standardized density against
// cos and sin on (0, inf) instead.
inline std::complex<double> chf_fourier(const TlssDistribution& d, double t) {
    thread_local boost::math::quadrature::ooura_fourier_cos<double> cos_rule(1e-13, 12);
    thread_local boost::math::quadrature::ooura_fourier_sin<double> sin_rule(1e-13, 12);
    const KernelSpec& k = d.kernel();
    const double loc = k.location();
    const double s = k.scale();
    auto even = [&](double z) { return s * (d.pdf(loc + s * z) + d.pdf(loc - s * z)); };
    auto odd = [&](double z) { return s * (d.pdf(loc + s * z) - d.pdf(loc - s * z)); };
    const double w = std::fabs(t) * s;
    const double re = cos_rule.integrate(even, w).first;
    const double im = std::copysign(1.0, t) * sin_rule.integrate(odd, w).first;
    return std::complex<double>(re, im) * std::polar(1.0, t * loc);
}

} // namespace detail

/// E[e^{itY}] as (E cos tY, E sin tY). Defined for every kernel and t.
inline std::complex<double> chf_numeric(const TlssDistribution& d, double t) {
    if (!std::isfinite(t)) throw DomainError("t must be finite");
    if (t == 0.0) return {1.0, 0.0};
    if (d.kernel().family() == Family::Cauchy) return detail::chf_fourier(d, t);
    const double re = expectation(d, [t](double y) { return std::cos(t * y); }).value;
    const double im = expectation(d, [t](double y) { return std::sin(t * y); }).value;
    return {re, im};
}

inline MomentValue evaluate(const MomentRequest& request) {
    if (request.method == MomentMethod::Series) {
        const auto s = moment_series(request.distribution, request.order, request.truncation.j_terms,
                                     request.truncation.k_terms);
        return {s.value, s.tail_bound};
    }
    detail::require_moments(request.distribution.kernel());
    detail::require_order(request.order);
    const int r = request.order;
    const auto q = expectation(request.distribution, [r](double y) { return detail::ipow(y, r); });
    return {q.value, q.error};
}

} // namespace tlss
