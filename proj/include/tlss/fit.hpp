#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tlss/errors.hpp"
#include "tlss/models.hpp"
#include "tlss/nelder_mead.hpp"
#include "tlss/normal.hpp"

namespace tlss {

/// The likelihood of every TLSS model is even in lambda, so the data carry no
/// information about its sign. The estimate is reported with this sign.
enum class LambdaSign { Positive, Negative };

struct FitOptions {
    LambdaSign lambda_sign = LambdaSign::Positive;
    /// |lambda| is kept below this bound during the search.
    double lambda_bound = 500.0;
    NelderMeadOptions optimizer{1e-8, 4000};
    /// Number of Nelder-Mead restarts from the incumbent after the first run.
    int polish_restarts = 1;
    double level = 0.95;
    /// When set, the search starts from this parameter vector alone.
    std::optional<std::vector<double>> initial;
};

struct Interval {
    double lower = std::numeric_limits<double>::quiet_NaN();
    double upper = std::numeric_limits<double>::quiet_NaN();
    bool computable = false;
};

struct OptimizerTrace {
    std::size_t evaluations = 0;
    std::size_t iterations = 0;
    int starts_tried = 0;
    double simplex_size = std::numeric_limits<double>::infinity();
};

struct FitResult {
    ModelSpec model;
    std::vector<double> estimates;
    double max_log_likelihood = -std::numeric_limits<double>::infinity();
    double aic = std::numeric_limits<double>::infinity();
    bool converged = false;
    /// Observed information, present when every stencil point was finite.
    std::optional<Eigen::MatrixXd> information;
    std::optional<Eigen::MatrixXd> covariance;
    std::vector<Interval> intervals;
    double level = 0.95;
    OptimizerTrace trace;
    std::vector<std::string> diagnostics;
};

inline double aic(double max_log_likelihood, int parameter_count) {
    return 2.0 * parameter_count - 2.0 * max_log_likelihood;
}

/// Negative Hessian of the log-likelihood at params by central differences,
/// step h_j = 1e-4 max(1, |theta_j|). Throws StencilError naming the first
/// parameter whose stencil leaves the parameter space or yields a non-finite value.
inline Eigen::MatrixXd observed_information(const ModelSpec& model, std::span<const double> params,
                                            std::span<const Observation> data) {
    const int k = model.parameter_count();
    detail::require_parameter_count(model, params);
    std::vector<double> theta(params.begin(), params.end());
    std::vector<double> h(k);
    for (int j = 0; j < k; ++j) h[j] = 1e-4 * std::max(1.0, std::fabs(theta[j]));

    const auto names = model.parameter_names();
    auto ll_at = [&](int i, double di, int j, double dj) {
        std::vector<double> x = theta;
        x[i] += di;
        x[j] += dj;
        double value = 0.0;
        try {
            value = log_likelihood(model, x, data);
        } catch (const DomainError&) {
            value = std::numeric_limits<double>::quiet_NaN();
        }
        if (!std::isfinite(value)) {
            const int culprit = (di != 0.0) ? i : j;
            throw StencilError("log-likelihood is not finite on the difference stencil along " +
                                   names[culprit],
                               culprit);
        }
        return value;
    };

    const double center = ll_at(0, 0.0, 0, 0.0);
    Eigen::MatrixXd info(k, k);
    for (int i = 0; i < k; ++i) {
        const double plus = ll_at(i, h[i], i, 0.0);
        const double minus = ll_at(i, -h[i], i, 0.0);
        info(i, i) = -(plus - 2.0 * center + minus) / (h[i] * h[i]);
        for (int j = 0; j < i; ++j) {
            const double pp = ll_at(i, h[i], j, h[j]);
            const double pm = ll_at(i, h[i], j, -h[j]);
            const double mp = ll_at(i, -h[i], j, h[j]);
            const double mm = ll_at(i, -h[i], j, -h[j]);
            info(i, j) = info(j, i) = -(pp - pm - mp + mm) / (4.0 * h[i] * h[j]);
        }
    }
    return info;
}

/// Wald intervals theta_i +- z sqrt(V_ii) with V the inverse observed
/// information. A parameter whose variance is not positive gets a
/// non-computable interval; a singular information makes all of them so.
inline std::vector<Interval> confidence_intervals(std::span<const double> estimates,
                                                  const Eigen::MatrixXd& information, double level,
                                                  Eigen::MatrixXd* covariance_out = nullptr) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0,1)");
    const auto k = static_cast<Eigen::Index>(estimates.size());
    if (information.rows() != k || information.cols() != k) {
        throw DomainError("information matrix does not match the parameter vector");
    }
    std::vector<Interval> out(estimates.size());
    if (!information.allFinite()) return out;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(information);
    if (!lu.isInvertible()) return out;
    const Eigen::MatrixXd cov = lu.inverse();
    if (!cov.allFinite()) return out;
    if (covariance_out) *covariance_out = cov;
    const double z = normal::quantile(0.5 + 0.5 * level);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double v = cov(i, i);
        if (!(v > 0.0)) continue;
        const double half = z * std::sqrt(v);
        out[i] = {estimates[i] - half, estimates[i] + half, true};
    }
    return out;
}

namespace detail {

inline double sample_quantile(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double sd_of(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean_of(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

// Unconstrained coordinates used by the optimizer.
class Reparameterization {
public:
    Reparameterization(const ModelSpec& model, double lambda_bound)
        : model_(model), bound_(lambda_bound) {}

    std::vector<double> to_natural(const std::vector<double>& u) const {
        switch (model_.kind) {
        case ModelKind::Lognormal: return {u[0], std::exp(u[1])};
        case ModelKind::Weibull: return {std::exp(u[0]), std::exp(u[1])};
        default: return {u[0], std::exp(u[1]), bound_ * std::tanh(u[2] / bound_)};
        }
    }

    std::vector<double> to_free(const std::vector<double>& p) const {
        switch (model_.kind) {
        case ModelKind::Lognormal: return {p[0], std::log(p[1])};
        case ModelKind::Weibull: return {std::log(p[0]), std::log(p[1])};
        default: {
            const double ratio = std::clamp(p[2] / bound_, -0.999999, 0.999999);
            return {p[0], std::log(p[1]), bound_ * std::atanh(ratio)};
        }
        }
    }

private:
    ModelSpec model_;
    double bound_;
};

struct StartPoint {
    std::vector<double> natural;
    std::vector<double> step;
};

// Candidate starts for a TLSS fit: for each shape magnitude on a grid, location
// and scale are matched to the sample median and interquartile range.
inline std::vector<StartPoint> tlss_candidates(ModelKind kind, const std::vector<double>& sorted,
                                               LambdaSign sign) {
    const double median = sample_quantile(sorted, 0.5);
    const double iqr = sample_quantile(sorted, 0.75) - sample_quantile(sorted, 0.25);
    const double spread = iqr > 0.0 ? iqr : (sd_of(sorted) > 0.0 ? sd_of(sorted) : 1.0);
    const double direction = sign == LambdaSign::Positive ? 1.0 : -1.0;
    static constexpr double kMagnitudes[] = {0.05, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0};
    std::vector<StartPoint> out;
    for (double magnitude : kMagnitudes) {
        const double lambda = direction * magnitude;
        const TlssDistribution standard(KernelSpec::standard(kernel_family(kind)), lambda);
        const double scale = spread / (standard.quantile(0.75) - standard.quantile(0.25));
        const double location = median - scale * standard.quantile(0.5);
        out.push_back({{location, scale, lambda}, {0.1 * scale, 0.1, 0.25 * std::max(1.0, magnitude)}});
    }
    return out;
}

inline std::vector<StartPoint> start_points(const ModelSpec& model, std::span<const Observation> data,
                                            LambdaSign sign) {
    std::vector<double> values;
    values.reserve(data.size());
    for (const auto& obs : data) values.push_back(obs.value);
    std::sort(values.begin(), values.end());

    if (is_tlss(model.kind)) return tlss_candidates(model.kind, values, sign);

    for (double y : values) require_positive_support(y);
    std::vector<double> logs(values.size());
    std::transform(values.begin(), values.end(), logs.begin(), [](double y) { return std::log(y); });
    const double m = mean_of(logs);
    double s = sd_of(logs);
    if (!(s > 0.0)) s = 1.0;
    if (model.kind == ModelKind::Lognormal) return {{{m, s}, {0.25 * s, 0.25}}};
    // Gumbel moments of log y: sd = pi / (alpha sqrt 6), mean = log beta - gamma / alpha.
    const double alpha = 3.141592653589793 / (s * std::sqrt(6.0));
    const double beta = std::exp(m + 0.5772156649015329 / alpha);
    return {{{alpha, beta}, {0.25, 0.25}}};
}

} // namespace detail

/// Maximum-likelihood fit by multi-start Nelder-Mead on unconstrained
/// coordinates (log scale, bounded lambda), followed by the observed
/// information, Wald intervals and AIC. Non-convergence is reported through
/// FitResult::converged; a failed information computation leaves the
/// estimates intact and marks every interval non-computable.
inline FitResult fit_mle(const ModelSpec& model, std::span<const Observation> data, int starts = 2,
                         const FitOptions& options = {}) {
    if (data.size() < static_cast<std::size_t>(model.parameter_count())) {
        throw DataError("too few observations to fit " + std::string(to_string(model.kind)));
    }
    for (const auto& obs : data) detail::require_finite(obs.value, "observation");
    if (starts < 1) throw DomainError("at least one start is required");
    if (!(options.level > 0.0 && options.level < 1.0)) {
        throw DomainError("confidence level must lie in (0,1)");
    }

    const detail::Reparameterization reparam(model, options.lambda_bound);
    auto objective = [&](const std::vector<double>& u) {
        try {
            return -log_likelihood(model, reparam.to_natural(u), data);
        } catch (const DomainError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    FitResult result;
    result.model = model;
    result.level = options.level;

    // Rank the candidate starts by log-likelihood and run the simplex from the best few.
    auto candidates = detail::start_points(model, data, options.lambda_sign);
    if (options.initial) {
        detail::require_parameter_count(model, *options.initial);
        std::vector<double> step = candidates.front().step;
        if (is_tlss(model.kind)) step = {0.1 * (*options.initial)[1], 0.1, 0.25 * std::max(1.0, std::fabs((*options.initial)[2]))};
        candidates = {{*options.initial, step}};
    }
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        ranked.emplace_back(objective(reparam.to_free(candidates[i].natural)), i);
        ++result.trace.evaluations;
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t runs = std::min(ranked.size(), static_cast<std::size_t>(starts));

    NelderMeadResult best;
    for (std::size_t r = 0; r < runs; ++r) {
        const auto& start = candidates[ranked[r].second];
        ++result.trace.starts_tried;
        NelderMeadResult run = nelder_mead(objective, reparam.to_free(start.natural), start.step, options.optimizer);
        for (int p = 0; p < options.polish_restarts && std::isfinite(run.value); ++p) {
            std::vector<double> step = start.step;
            for (double& h : step) h *= 0.1;
            NelderMeadResult again = nelder_mead(objective, run.x, step, options.optimizer);
            again.evaluations += run.evaluations;
            again.iterations += run.iterations;
            const bool settled = !(again.value < run.value - 1e-9 * (1.0 + std::fabs(run.value)));
            if (again.value <= run.value) run = again;
            if (settled) break;
        }
        result.trace.evaluations += run.evaluations;
        result.trace.iterations += run.iterations;
        if (best.x.empty() || run.value < best.value) best = run;
    }
    if (!std::isfinite(best.value)) {
        throw DomainError("log-likelihood is not finite at any start point");
    }

    result.estimates = reparam.to_natural(best.x);
    if (is_tlss(model.kind)) {
        const double magnitude = std::fabs(result.estimates[2]);
        result.estimates[2] = options.lambda_sign == LambdaSign::Positive ? magnitude : -magnitude;
    }
    result.max_log_likelihood = log_likelihood(model, result.estimates, data);
    result.aic = aic(result.max_log_likelihood, model.parameter_count());
    result.converged = best.converged;
    result.trace.simplex_size = best.simplex_size;
    if (!best.converged) result.diagnostics.push_back("optimizer stopped before the simplex collapsed");

    result.intervals.assign(result.estimates.size(), Interval{});
    try {
        result.information = observed_information(model, result.estimates, data);
        Eigen::MatrixXd cov;
        result.intervals = confidence_intervals(result.estimates, *result.information, options.level, &cov);
        if (cov.size() > 0) result.covariance = cov;
        else result.diagnostics.push_back("observed information is singular");
    } catch (const StencilError& e) {
        result.diagnostics.push_back(e.what());
    }
    if (model.kind == ModelKind::TlssLaplace) {
        result.diagnostics.push_back(
            "log-likelihood has kinks in mu at every observation; the difference stencil "
            "resolves few of them, so the mu interval is unreliable");
    }
    return result;
}

inline FitResult fit_mle(const ModelSpec& model, std::span<const double> values, int starts = 2,
                         const FitOptions& options = {}) {
    const auto data = uncensored(values);
    return fit_mle(model, std::span<const Observation>(data), starts, options);
}

} // namespace tlss
