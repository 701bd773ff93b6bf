#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tlss/distribution.hpp"
#include "tlss/random.hpp"

namespace tlss {

enum class SamplingMethod { InverseTransform, AcceptReject };

inline std::string_view to_string(SamplingMethod method) {
    return method == SamplingMethod::InverseTransform ? "inverse" : "reject";
}

inline std::optional<SamplingMethod> parse_sampling_method(std::string_view name) {
    if (name == "inverse") return SamplingMethod::InverseTransform;
    if (name == "reject") return SamplingMethod::AcceptReject;
    return std::nullopt;
}

/// Identical (seed, stream_id, method, distribution, n) reproduce the output bit for bit.
struct SamplerConfig {
    SamplingMethod method = SamplingMethod::InverseTransform;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

/// n draws by inverse transform through the closed-form quantile.
inline std::vector<double> sample_inverse(const TlssDistribution& d, std::size_t n, const SamplerConfig& cfg) {
    PhiloxEngine engine(cfg.seed, cfg.stream_id);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(d.quantile(uniform_open01(engine)));
    return out;
}

struct RejectionSample {
    std::vector<double> values;
    std::uint64_t proposals_used = 0;
};

/// Probability of accepting a kernel proposal whose kernel cdf value is u:
/// f_Y / (M f_X) with envelope M = weight_peak(lambda), i.e.
/// 4 e^{-lambda u} / (1 + e^{-lambda u})^2 = sech^2(lambda u / 2) <= 1.
inline double acceptance_probability(double lambda, double u) {
    if (std::fabs(lambda) < kLimitThreshold) return 1.0;
    return detail::sech2(0.5 * lambda * u);
}

/// Long-run fraction of accepted proposals, 1/M = 2 tanh(lambda/2)/lambda.
inline double expected_acceptance_rate(double lambda) { return 1.0 / weight_peak(lambda); }

/// n draws by acceptance-rejection with the kernel as proposal. The proposal
/// is generated by inverse transform from U1, so F_X(X) = U1 exactly.
inline RejectionSample sample_rejection(const TlssDistribution& d, std::size_t n, const SamplerConfig& cfg) {
    PhiloxEngine engine(cfg.seed, cfg.stream_id);
    const KernelSpec& k = d.kernel();
    const double lambda = d.is_limit() ? 0.0 : d.lambda();
    RejectionSample out;
    out.values.reserve(n);
    while (out.values.size() < n) {
        const double u1 = uniform_open01(engine);
        const double u2 = uniform_open01(engine);
        ++out.proposals_used;
        if (u2 <= acceptance_probability(lambda, u1)) out.values.push_back(k.quantile(u1));
    }
    return out;
}

/// Dispatch on cfg.method.
inline std::vector<double> sample(const TlssDistribution& d, std::size_t n, const SamplerConfig& cfg) {
    if (cfg.method == SamplingMethod::AcceptReject) return sample_rejection(d, n, cfg).values;
    return sample_inverse(d, n, cfg);
}

} // namespace tlss
