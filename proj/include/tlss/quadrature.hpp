#pragma once

// Expectations under a TLSS law, integrated in kernel-probability coordinates
// u = F_X(y) so every integral is over a finite interval. The interval is
// folded at u = 1/2 onto (0, 1/2] and the symmetric kernel quantile
// z(1 - v) = -z(v) is used for the upper half; both endpoint behaviours then
// sit at v -> 0 where the tanh-sinh rule clusters its nodes.

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "tlss/distribution.hpp"

namespace tlss {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0; ///< absolute error estimate
};

namespace detail {

// One rule per thread: the rule refines its abscissa tables lazily.
inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
    thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
    return rule;
}

/// Integral of h over (0, 1/2] with an absolute error estimate.
template <class H>
QuadratureResult integrate_half(H&& h, double rel_tol) {
    double error = 0.0;
    double l1 = 0.0;
    const double value = tanh_sinh_rule().integrate(
        [&](double v) { return v > 0.0 ? h(v) : 0.0; }, 0.0, 0.5, rel_tol, &error, &l1);
    return {value, error};
}

// Weight of the TLSS law in u-coordinates: w(u) = weight_peak * sech^2(lambda u / 2).
struct UnitWeight {
    double peak;
    double half_lambda;
    bool limit;

    explicit UnitWeight(const TlssDistribution& d)
        : peak(weight_peak(d.lambda())), half_lambda(0.5 * d.lambda()), limit(d.is_limit()) {}

    double operator()(double u) const { return limit ? 1.0 : peak * sech2(half_lambda * u); }
};

} // namespace detail

/// E[g(Y)] for Y ~ d, where g is called with the variate y.
template <class G>
QuadratureResult expectation(const TlssDistribution& d, G&& g, double rel_tol = 1e-12) {
    const KernelSpec& k = d.kernel();
    const detail::UnitWeight w(d);
    const Family family = k.family();
    const double loc = k.location();
    const double scale = k.scale();
    auto folded = [&](double v) {
        const double z = KernelSpec::std_quantile(family, v);
        return g(loc + scale * z) * w(v) + g(loc - scale * z) * w(1.0 - v);
    };
    return detail::integrate_half(folded, rel_tol);
}

/// m * integral of g(y) f_X(y) F_X(y)^{m-1} dy: E[g(max of m kernel draws)].
template <class G>
QuadratureResult kernel_max_expectation(const KernelSpec& k, int m, G&& g, double rel_tol = 1e-12) {
    const Family family = k.family();
    const double loc = k.location();
    const double scale = k.scale();
    auto folded = [&](double v) {
        const double z = KernelSpec::std_quantile(family, v);
        const double lower = m == 1 ? 1.0 : std::pow(v, m - 1);
        const double upper = m == 1 ? 1.0 : std::pow(1.0 - v, m - 1);
        return m * (g(loc + scale * z) * lower + g(loc - scale * z) * upper);
    };
    return detail::integrate_half(folded, rel_tol);
}

} // namespace tlss
