#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace tlss {

struct NelderMeadOptions {
    /// Converged once every vertex lies within this max-norm distance of the best.
    double x_tolerance = 1e-8;
    std::size_t max_evaluations = 20000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    std::size_t iterations = 0;
    double simplex_size = std::numeric_limits<double>::infinity();
    bool converged = false;
};

/// Derivative-free simplex minimization (Nelder and Mead, 1965) with the
/// standard reflection/expansion/contraction/shrink coefficients 1, 2, 1/2, 1/2.
/// Non-finite objective values are treated as +inf.
template <class Objective>
NelderMeadResult nelder_mead(Objective&& objective, const std::vector<double>& start,
                             const std::vector<double>& step, const NelderMeadOptions& options = {}) {
    const std::size_t dim = start.size();
    if (dim == 0 || step.size() != dim) throw std::invalid_argument("nelder_mead: start and step must be non-empty and equal length");
    NelderMeadResult result;
    auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        const double v = objective(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<std::vector<double>> simplex(dim + 1, start);
    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += step[i];
    for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(simplex[i]);

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), trial(dim), second(dim);

    auto size_of = [&](std::size_t best) {
        double size = 0.0;
        for (std::size_t i = 0; i <= dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                size = std::max(size, std::fabs(simplex[i][j] - simplex[best][j]));
            }
        }
        return size;
    };
    auto along = [&](double t, std::vector<double>& out, const std::vector<double>& worst) {
        for (std::size_t j = 0; j < dim; ++j) out[j] = centroid[j] + t * (worst[j] - centroid[j]);
    };

    while (true) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t next_worst = order[dim - 1];

        result.simplex_size = size_of(best);
        if (result.simplex_size < options.x_tolerance) {
            result.converged = true;
            break;
        }
        if (result.evaluations >= options.max_evaluations) break;
        ++result.iterations;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j] / static_cast<double>(dim);
        }

        along(-1.0, trial, simplex[worst]);
        const double reflected = eval(trial);
        if (reflected < values[best]) {
            along(-2.0, second, simplex[worst]);
            const double expanded = eval(second);
            if (expanded < reflected) {
                simplex[worst] = second;
                values[worst] = expanded;
            } else {
                simplex[worst] = trial;
                values[worst] = reflected;
            }
            continue;
        }
        if (reflected < values[next_worst]) {
            simplex[worst] = trial;
            values[worst] = reflected;
            continue;
        }
        // Contraction: outside if the reflection improved on the worst vertex.
        const bool outside = reflected < values[worst];
        along(outside ? -0.5 : 0.5, second, simplex[worst]);
        const double contracted = eval(second);
        if (contracted < (outside ? reflected : values[worst])) {
            simplex[worst] = second;
            values[worst] = contracted;
            continue;
        }
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            }
            values[i] = eval(simplex[i]);
        }
    }

    const auto best_it = std::min_element(values.begin(), values.end());
    const auto best_index = static_cast<std::size_t>(best_it - values.begin());
    result.x = simplex[best_index];
    result.value = *best_it;
    return result;
}

} // namespace tlss
