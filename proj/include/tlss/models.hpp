#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlss/distribution.hpp"
#include "tlss/errors.hpp"
#include "tlss/kernel.hpp"
#include "tlss/normal.hpp"

namespace tlss {

/// One data value; censored = true means the value is a detection limit and
/// the true value lies at or below it.
struct Observation {
    double value = 0.0;
    bool censored = false;
};

enum class ModelKind { TlssNormal, TlssLaplace, TlssCauchy, TlssLogistic, Lognormal, Weibull };

inline constexpr ModelKind kAllModelKinds[] = {ModelKind::TlssNormal, ModelKind::TlssLaplace,
                                               ModelKind::TlssCauchy, ModelKind::TlssLogistic,
                                               ModelKind::Lognormal,  ModelKind::Weibull};

inline std::string_view to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::TlssNormal: return "tlsn";
    case ModelKind::TlssLaplace: return "tlsl";
    case ModelKind::TlssCauchy: return "tlsc";
    case ModelKind::TlssLogistic: return "tlslg";
    case ModelKind::Lognormal: return "lognormal";
    case ModelKind::Weibull: return "weibull";
    }
    return "unknown";
}

inline std::optional<ModelKind> parse_model_kind(std::string_view name) {
    for (ModelKind kind : kAllModelKinds) {
        if (name == to_string(kind)) return kind;
    }
    return std::nullopt;
}

inline bool is_tlss(ModelKind kind) {
    return kind != ModelKind::Lognormal && kind != ModelKind::Weibull;
}

inline Family kernel_family(ModelKind kind) {
    switch (kind) {
    case ModelKind::TlssLaplace: return Family::Laplace;
    case ModelKind::TlssCauchy: return Family::Cauchy;
    case ModelKind::TlssLogistic: return Family::Logistic;
    default: return Family::Normal;
    }
}

inline ModelKind tlss_kind(Family family) {
    switch (family) {
    case Family::Laplace: return ModelKind::TlssLaplace;
    case Family::Cauchy: return ModelKind::TlssCauchy;
    case Family::Logistic: return ModelKind::TlssLogistic;
    default: return ModelKind::TlssNormal;
    }
}

/// A model family to fit. Parameter order:
///   TLSS kinds: (location, scale, lambda)
///   Lognormal:  (mu*, sigma*)   -- mean and sd of log y
///   Weibull:    (alpha, beta)   -- shape and scale
struct ModelSpec {
    ModelKind kind = ModelKind::TlssNormal;

    int parameter_count() const noexcept { return is_tlss(kind) ? 3 : 2; }

    std::vector<std::string> parameter_names() const {
        switch (kind) {
        case ModelKind::TlssNormal: return {"mu", "sigma", "lambda"};
        case ModelKind::TlssLaplace: return {"mu", "b", "lambda"};
        case ModelKind::TlssCauchy: return {"mu", "xi", "lambda"};
        case ModelKind::TlssLogistic: return {"mu", "s", "lambda"};
        case ModelKind::Lognormal: return {"mu_star", "sigma_star"};
        case ModelKind::Weibull: return {"alpha", "beta"};
        }
        return {};
    }

    /// Parameters that must be strictly positive.
    bool is_positive_parameter(int index) const noexcept {
        if (is_tlss(kind)) return index == 1;
        if (kind == ModelKind::Lognormal) return index == 1;
        return true;
    }

    /// True when the model only has support on y > 0.
    bool positive_support() const noexcept { return !is_tlss(kind); }
};

inline TlssDistribution make_tlss(ModelKind kind, std::span<const double> params) {
    return TlssDistribution(KernelSpec(kernel_family(kind), params[0], params[1]), params[2]);
}

namespace detail {

inline void require_parameter_count(const ModelSpec& model, std::span<const double> params) {
    if (static_cast<int>(params.size()) != model.parameter_count()) {
        throw DomainError("parameter vector has the wrong length for model " +
                          std::string(to_string(model.kind)));
    }
    for (double p : params) require_finite(p, "parameter");
}

inline void require_positive_support(double y) {
    if (!(y > 0.0)) {
        throw SupportError("observation " + std::to_string(y) + " lies outside the positive support");
    }
}

} // namespace detail

/// Per-observation log contribution: log density, or log cdf when censored.
class LogLikelihoodTerm {
public:
    LogLikelihoodTerm(const ModelSpec& model, std::span<const double> params) : model_(model) {
        detail::require_parameter_count(model, params);
        if (is_tlss(model.kind)) {
            tlss_.emplace(make_tlss(model.kind, params));
            family_ = kernel_family(model.kind);
            location_ = params[0];
            inv_scale_ = 1.0 / params[1];
            half_lambda_ = tlss_->is_limit() ? 0.0 : 0.5 * params[2];
            log_constant_ = (tlss_->is_limit() ? 0.0 : log_weight_peak(params[2])) - std::log(params[1]);
        } else {
            a_ = params[0];
            b_ = params[1];
            if (model.kind == ModelKind::Lognormal && !(b_ > 0.0)) {
                throw DomainError("lognormal sigma* must be positive");
            }
            if (model.kind == ModelKind::Weibull && !(a_ > 0.0 && b_ > 0.0)) {
                throw DomainError("Weibull shape and scale must be positive");
            }
        }
    }

    double operator()(const Observation& obs) const {
        const double y = obs.value;
        switch (model_.kind) {
        case ModelKind::Lognormal: {
            detail::require_positive_support(y);
            const double ly = std::log(y);
            const double z = (ly - a_) / b_;
            if (obs.censored) return normal::log_cdf(z);
            return normal::log_pdf(z) - std::log(b_) - ly;
        }
        case ModelKind::Weibull: {
            detail::require_positive_support(y);
            const double log_ratio = std::log(y / b_);
            const double power = std::exp(a_ * log_ratio);
            if (obs.censored) return std::log(-std::expm1(-power));
            return std::log(a_ / b_) + (a_ - 1.0) * log_ratio - power;
        }
        default: {
            if (obs.censored) return tlss_->log_cdf(y);
            detail::require_finite(y, "y");
            const double z = (y - location_) * inv_scale_;
            const double lf = KernelSpec::std_log_pdf(family_, z);
            if (half_lambda_ == 0.0) return lf + log_constant_;
            const double t = half_lambda_ * KernelSpec::std_cdf(family_, z);
            return lf + log_constant_ - 2.0 * detail::log_cosh(t);
        }
        }
    }

private:
    ModelSpec model_;
    std::optional<TlssDistribution> tlss_;
    Family family_ = Family::Normal;
    double location_ = 0.0;
    double inv_scale_ = 1.0;
    double half_lambda_ = 0.0;
    double log_constant_ = 0.0;
    double a_ = 0.0;
    double b_ = 0.0;
};

/// sum_i (1 - delta_i) log f(y_i) + delta_i log F(y_i). With no censored
/// observations this is the ordinary complete-data log-likelihood.
inline double log_likelihood(const ModelSpec& model, std::span<const double> params,
                             std::span<const Observation> data) {
    const LogLikelihoodTerm term(model, params);
    double total = 0.0;
    for (const Observation& obs : data) total += term(obs);
    return total;
}

/// Complete-data convenience overload.
inline double log_likelihood(const ModelSpec& model, std::span<const double> params,
                             std::span<const double> values) {
    const LogLikelihoodTerm term(model, params);
    double total = 0.0;
    for (double y : values) total += term(Observation{y, false});
    return total;
}

inline std::vector<Observation> uncensored(std::span<const double> values) {
    std::vector<Observation> out;
    out.reserve(values.size());
    for (double v : values) out.push_back({v, false});
    return out;
}

} // namespace tlss
