// Acceptance criteria 1-8. Prints one PASS/FAIL/SKIP line per criterion and
// exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "tlss/tlss.hpp"

namespace {

using tlss::Family;
using tlss::KernelSpec;
using tlss::ModelKind;
using tlss::TlssDistribution;

constexpr Family kFamilies[] = {Family::Normal, Family::Laplace, Family::Cauchy, Family::Logistic};
constexpr ModelKind kTlssKinds[] = {ModelKind::TlssNormal, ModelKind::TlssLaplace, ModelKind::TlssCauchy,
                                    ModelKind::TlssLogistic};

class Criterion {
public:
    explicit Criterion(int number) : number_(number), start_(std::chrono::steady_clock::now()) {}

    void check(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }

    void note(const std::string& what) { notes_.push_back(what); }

    void budget(double seconds) { budget_ = seconds; }

    bool finish(bool skipped = false) const {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        std::vector<std::string> failures = failures_;
        if (!skipped && budget_ > 0.0 && elapsed > budget_) {
            failures.push_back("runtime " + fmt(elapsed) + " s exceeds " + fmt(budget_) + " s");
        }
        const char* status = skipped ? "SKIP" : failures.empty() ? "PASS" : "FAIL";
        std::ostringstream line;
        line << "criterion " << number_ << ": " << status << " - " << fmt(elapsed) << " s";
        for (const auto& n : notes_) line << "; " << n;
        for (const auto& f : failures) line << "; FAILED " << f;
        std::cout << line.str() << std::endl;
        return skipped || failures.empty();
    }

    static std::string fmt(double v, int digits = 4) {
        std::ostringstream os;
        os.precision(digits);
        os << v;
        return os.str();
    }

private:
    int number_;
    std::chrono::steady_clock::time_point start_;
    double budget_ = 0.0;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string fmt(double v, int digits = 4) { return Criterion::fmt(v, digits); }

const std::vector<double> kShapeGrid{-5.0, -1.0, -0.1, 0.1, 1.0, 5.0};

// ---------------------------------------------------------------- 1

bool criterion1() {
    Criterion c(1);
    c.budget(10.0);
    double worst_mass = 0.0, worst_cq = 0.0, worst_qc = 0.0, worst_reflect = 0.0, worst_even = 0.0;
    for (Family f : kFamilies) {
        const KernelSpec k(f, 0.3, 1.2);
        for (double lambda : kShapeGrid) {
            const TlssDistribution d(k, lambda);
            // Mass in kernel-quantile coordinates.
            const double mass = oracle::integrate_unit([&](double v) {
                const double y = k.quantile(v);
                return d.pdf(y) / k.pdf(y);
            });
            worst_mass = std::max(worst_mass, std::fabs(mass - 1.0));
            for (int i = 1; i <= 999; ++i) {
                const double u = i / 1000.0;
                const double y = d.quantile(u);
                worst_cq = std::max(worst_cq, std::fabs(d.cdf(y) - u));
                worst_qc = std::max(worst_qc, std::fabs(d.quantile(d.cdf(y)) - y) / std::max(1.0, std::fabs(y)));
            }
            const TlssDistribution mirror(KernelSpec(f, -0.3, 1.2), -lambda);
            const TlssDistribution flipped(k, -lambda);
            for (double y = -10.0; y <= 10.0; y += 0.05) {
                worst_reflect = std::max(worst_reflect, std::fabs(d.pdf(y) - mirror.pdf(-y)));
                worst_even = std::max(worst_even, std::fabs(d.pdf(y) - flipped.pdf(y)));
            }
        }
    }
    c.check(worst_mass < 1e-8, "normalization, max error " + fmt(worst_mass));
    c.check(worst_cq < 1e-10, "cdf(quantile(u)) round trip, max error " + fmt(worst_cq));
    c.check(worst_qc < 1e-10, "quantile(cdf(y)) round trip, max error " + fmt(worst_qc));
    c.note("mass err " + fmt(worst_mass, 2) + ", round trip " + fmt(std::max(worst_cq, worst_qc), 2));

    double worst_limit = 0.0;
    for (Family f : kFamilies) {
        const KernelSpec k = KernelSpec::standard(f);
        for (double lambda : {-2e-6, -1e-7, 0.0, 1e-7, 2e-6}) {
            const TlssDistribution d(k, lambda);
            for (double y = -8.0; y <= 8.0; y += 0.1) {
                worst_limit = std::max({worst_limit, std::fabs(d.pdf(y) - k.pdf(y)), std::fabs(d.cdf(y) - k.cdf(y))});
            }
        }
    }
    c.check(worst_limit < 1e-6, "shape -> 0 limit, max error " + fmt(worst_limit));
    c.note("limit err " + fmt(worst_limit, 2));

    c.check(worst_reflect < 1e-12,
            "reflection f(y;l) = f(-y;-l): max |difference| " + fmt(worst_reflect) +
                "; the density is even in the shape, max |f(y;l) - f(y;-l)| = " + fmt(worst_even, 2));
    return c.finish();
}

// ---------------------------------------------------------------- 2

// The inverse cdf exactly as printed: F_X^{-1}((1/l) log[(1 - u c)/(u c)]), c = (1+e^{-l})/(1-e^{-l}).
double printed_inverse_cdf_argument(double lambda, double u) {
    const double c = (1.0 + std::exp(-lambda)) / (1.0 - std::exp(-lambda));
    return std::log((1.0 - u * c) / (u * c)) / lambda;
}

bool criterion2() {
    Criterion c(2);
    c.budget(10.0);

    // (a) printed form breaks, corrected form round-trips.
    const double printed = printed_inverse_cdf_argument(1.0, 0.5);
    c.check(std::isnan(printed), "printed inverse cdf at l=1, u=0.5 was expected to take the log of a negative number");
    const TlssDistribution n1(KernelSpec::standard(Family::Normal), 1.0);
    c.check(std::fabs(n1.cdf(n1.quantile(0.5)) - 0.5) < 1e-12, "corrected quantile round trip at l=1, u=0.5");
    c.note("printed form log argument " + fmt((1.0 - 0.5 / std::tanh(0.5)) / (0.5 / std::tanh(0.5))));

    // (b) tail ratios.
    double worst_tail = 0.0;
    for (Family f : kFamilies) {
        const KernelSpec k = KernelSpec::standard(f);
        for (double lambda : kShapeGrid) {
            const TlssDistribution d(k, lambda);
            const double lo = k.quantile(1e-10);
            const double hi = k.quantile(1.0 - 1e-10);
            const double left = lambda / (2.0 * std::tanh(0.5 * lambda));
            const double right = lambda / std::sinh(lambda);
            worst_tail = std::max(worst_tail, std::fabs(d.pdf(lo) / k.pdf(lo) / left - 1.0));
            worst_tail = std::max(worst_tail, std::fabs(d.pdf(hi) / k.pdf(hi) / right - 1.0));
        }
    }
    c.check(worst_tail < 1e-4, "tail ratios, max relative error " + fmt(worst_tail));
    c.note("tail rel err " + fmt(worst_tail, 2));

    // (c) rejection sampler.
    std::uint64_t stream = 0;
    for (double lambda : {-3.0, 1.0, 3.0}) {
        const TlssDistribution d(KernelSpec::standard(Family::Normal), lambda);
        const auto x = tlss::sample_rejection(d, 10000, {tlss::SamplingMethod::AcceptReject, 31337, stream++}).values;
        const double ks = oracle::ks_statistic(x, [&](double y) { return d.cdf(y); });
        c.check(ks < oracle::ks_critical_1pct(1e4), "rejection KS at l=" + fmt(lambda) + ": D = " + fmt(ks));

        // Acceptance rate over exactly 1e6 proposals.
        tlss::PhiloxEngine engine(31337, 1000 + stream);
        const double p = tlss::expected_acceptance_rate(lambda);
        std::size_t accepted = 0;
        const std::size_t proposals = 1000000;
        for (std::size_t i = 0; i < proposals; ++i) {
            const double u1 = tlss::uniform_open01(engine);
            const double u2 = tlss::uniform_open01(engine);
            accepted += u2 <= tlss::acceptance_probability(lambda, u1);
        }
        const double rate = static_cast<double>(accepted) / proposals;
        const double se = std::sqrt(p * (1.0 - p) / proposals);
        c.check(std::fabs(rate - p) < 3.0 * se,
                "acceptance rate at l=" + fmt(lambda) + ": " + fmt(rate, 6) + " vs " + fmt(p, 6));
        c.note("l=" + fmt(lambda) + " KS " + fmt(ks, 3) + " accept " + fmt(rate, 5) + "/" + fmt(p, 5));
    }
    return c.finish();
}

// ---------------------------------------------------------------- 3

bool criterion3() {
    Criterion c(3);
    c.budget(30.0);
    double worst_series = 0.0;
    for (Family f : {Family::Normal, Family::Logistic}) {
        for (double lambda : {-2.0, -1.5, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 1.5, 2.0}) {
            const TlssDistribution d(KernelSpec::standard(f), lambda);
            for (int r : {1, 2}) {
                const double s = tlss::moment_series(d, r, 60, 60).value;
                const double q = tlss::moment_quadrature(d, r);
                worst_series = std::max(worst_series, std::fabs(s - q));
            }
        }
    }
    c.check(worst_series < 1e-4, "series vs quadrature, max difference " + fmt(worst_series));
    c.note("series diff " + fmt(worst_series, 2));

    double worst_slack = -std::numeric_limits<double>::infinity();
    for (Family f : {Family::Normal, Family::Laplace, Family::Logistic}) {
        const TlssDistribution kernel(KernelSpec::standard(f), 0.0);
        for (double lambda : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
            const TlssDistribution d(KernelSpec::standard(f), lambda);
            for (int r = 1; r <= 4; ++r) {
                const double bound = lambda / (2.0 * std::tanh(0.5 * lambda)) * tlss::absolute_moment(kernel, r);
                worst_slack = std::max(worst_slack, tlss::absolute_moment(d, r) - bound);
            }
        }
    }
    c.check(worst_slack <= 1e-8, "absolute moment bound exceeded by " + fmt(worst_slack));
    c.note("max E|Y|^r - bound " + fmt(worst_slack, 3));
    return c.finish();
}

// ---------------------------------------------------------------- 4

bool criterion4() {
    Criterion c(4);
    c.budget(10.0);
    for (double lambda : {0.5, 1.0, 2.0, 5.0, -0.5, -1.0, -2.0, -5.0}) {
        const TlssDistribution d(KernelSpec::standard(Family::Normal), lambda);
        const auto modes = tlss::find_modes(d);
        std::vector<double> maxima;
        for (const auto& m : modes) {
            if (m.kind == tlss::ModeKind::Maximum) maxima.push_back(m.location);
        }
        const std::string tag = "l=" + fmt(lambda);
        if (maxima.size() != 1 || modes.size() != 1) {
            c.check(false, tag + ": " + std::to_string(maxima.size()) + " maxima among " +
                               std::to_string(modes.size()) + " stationary points");
            continue;
        }
        const double y = maxima.front();
        const double h = 1e-6;
        const double slope = (d.pdf(y + h) - d.pdf(y - h)) / (2.0 * h);
        c.check(std::fabs(slope) < 1e-8, tag + ": density derivative " + fmt(slope) + " at the mode");
        if (lambda > 0.0) {
            c.check(y < 0.0, tag + ": mode at " + fmt(y) + " is not left of 0");
        } else {
            c.check(y > 0.0, tag + ": mirrored mode expected at y > 0, found " + fmt(y, 6) +
                                 " (the density is even in the shape)");
        }
        if (lambda == 1.0) c.note("mode at l=1: " + fmt(y, 10));
    }
    return c.finish();
}

// ---------------------------------------------------------------- 5

struct TableRow {
    double lambda;
    int n;
    double bias_mu;
    double mse[3];
    double cp_sigma;
    double aw_mu;
};

bool criterion5() {
    Criterion c(5);
    c.budget(600.0);
    const TableRow table[] = {
        {1.0, 50, 0.131, {0.143, 0.019, 3.263}, 0.952, 1.377},
        {1.0, 100, 0.126, {0.122, 0.013, 2.798}, 0.959, 1.137},
        {-1.0, 50, 0.130, {0.145, 0.019, 3.216}, 0.949, 1.371},
        {-1.0, 100, 0.126, {0.126, 0.014, 2.842}, 0.955, 1.117},
    };
    tlss::StudyConfig cfg;
    cfg.lambdas = {1.0, -1.0};
    cfg.sample_sizes = {50, 100};
    cfg.replications = 1000;
    const auto report = tlss::run_study(cfg);
    for (const TableRow& row : table) {
        const auto it = std::find_if(report.cells.begin(), report.cells.end(), [&](const tlss::CellReport& cell) {
            return cell.lambda == row.lambda && cell.n == row.n;
        });
        const std::string tag = "(l=" + fmt(row.lambda) + ", n=" + std::to_string(row.n) + ")";
        if (it == report.cells.end()) {
            c.check(false, tag + " missing from the report");
            continue;
        }
        const auto& cell = *it;
        c.check(std::fabs(cell.bias[0] - row.bias_mu) <= 0.05,
                tag + " bias mu " + fmt(cell.bias[0]) + " vs " + fmt(row.bias_mu));
        const char* names[] = {"mu", "sigma", "lambda"};
        for (int i = 0; i < 3; ++i) {
            c.check(std::fabs(cell.mse[i] / row.mse[i] - 1.0) <= 0.30,
                    tag + " mse " + names[i] + " " + fmt(cell.mse[i]) + " vs " + fmt(row.mse[i]));
        }
        c.check(std::fabs(cell.cp[1] - row.cp_sigma) <= 0.03,
                tag + " cp sigma " + fmt(cell.cp[1]) + " vs " + fmt(row.cp_sigma));
        c.check(std::fabs(cell.aw[0] / row.aw_mu - 1.0) <= 0.10,
                tag + " aw mu " + fmt(cell.aw[0]) + " vs " + fmt(row.aw_mu));
        c.note(tag + " bias_mu " + fmt(cell.bias[0], 3) + " mse " + fmt(cell.mse[0], 3) + "/" + fmt(cell.mse[1], 3) +
               "/" + fmt(cell.mse[2], 3) + " cp_sigma " + fmt(cell.cp[1], 3) + " aw_mu " + fmt(cell.aw[0], 3) +
               " diverged " + std::to_string(cell.diverged));
    }
    return c.finish();
}

// ---------------------------------------------------------------- 6

std::optional<tlss::DatasetFile> find_dataset(const char* name) {
    const char* dir = std::getenv(tlss::kDataDirVariable);
    if (!dir || !*dir) return std::nullopt;
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    if (!std::filesystem::exists(path)) return std::nullopt;
    return tlss::parse_dataset(path);
}

bool criterion6() {
    Criterion c(6);
    const auto mercury = find_dataset("mercury.csv");
    const auto ammonium = find_dataset("ammonium.csv");
    if (!mercury && !ammonium) {
        c.note(std::string("mercury.csv and ammonium.csv not found in $") + tlss::kDataDirVariable +
               "; criterion 7 substitutes");
        return c.finish(true);
    }
    if (mercury) {
        const std::span<const tlss::Observation> rows(mercury->rows);
        const auto ln = tlss::fit_mle({ModelKind::Lognormal}, rows);
        const auto tn = tlss::fit_mle({ModelKind::TlssNormal}, rows, 4);
        c.check(std::fabs(ln.max_log_likelihood + 114.17) <= 0.02, "mercury lognormal log-lik " + fmt(ln.max_log_likelihood, 7));
        c.check(std::fabs(ln.aic - 232.34) <= 0.05, "mercury lognormal AIC " + fmt(ln.aic, 7));
        c.check(std::fabs(tn.max_log_likelihood + 82.07) <= 0.02, "mercury TLSN log-lik " + fmt(tn.max_log_likelihood, 7));
        c.check(std::fabs(tn.aic - 170.14) <= 0.05, "mercury TLSN AIC " + fmt(tn.aic, 7));
        const double est[] = {1.5585, 0.6221, 4.6496};
        const double ci[3][2] = {{0.91627, 2.20143}, {0.38518, 0.85916}, {-0.30235, 9.60490}};
        for (int i = 0; i < 3; ++i) {
            c.check(std::fabs(tn.estimates[i] - est[i]) <= 0.01,
                    "mercury TLSN estimate " + std::to_string(i) + " " + fmt(tn.estimates[i], 7));
            const auto& iv = tn.intervals[i];
            c.check(iv.computable && std::fabs(iv.lower - ci[i][0]) <= 0.01 && std::fabs(iv.upper - ci[i][1]) <= 0.01,
                    "mercury TLSN interval " + std::to_string(i) + " (" + fmt(iv.lower, 6) + ", " + fmt(iv.upper, 6) + ")");
        }
        c.note("mercury TLSN log-lik " + fmt(tn.max_log_likelihood, 7) + ", lognormal " + fmt(ln.max_log_likelihood, 7));
    } else {
        c.note("mercury.csv absent");
    }
    if (ammonium) {
        const std::span<const tlss::Observation> rows(ammonium->rows);
        const std::pair<ModelKind, double> expected[] = {{ModelKind::TlssNormal, 153.7112},
                                                         {ModelKind::TlssLogistic, 160.4412},
                                                         {ModelKind::Weibull, 178.5678},
                                                         {ModelKind::Lognormal, 180.3288}};
        std::vector<double> aics;
        for (const auto& [kind, aic] : expected) {
            const auto fit = tlss::fit_mle({kind}, rows, tlss::is_tlss(kind) ? 4 : 2);
            aics.push_back(fit.aic);
            c.check(std::fabs(fit.aic - aic) <= 0.5,
                    std::string("ammonium ") + std::string(tlss::to_string(kind)) + " AIC " + fmt(fit.aic, 7));
        }
        c.check(std::is_sorted(aics.begin(), aics.end()), "ammonium AIC ranking");
        c.note("ammonium AICs " + fmt(aics[0], 7) + " " + fmt(aics[1], 7) + " " + fmt(aics[2], 7) + " " + fmt(aics[3], 7));
    } else {
        c.note("ammonium.csv absent");
    }
    return c.finish();
}

// ---------------------------------------------------------------- 7

// Expected Fisher information per observation at theta, optionally with left
// censoring at c: the score outer product integrated over y > c plus the
// censored mass F(c) times the outer product of the censored score.
Eigen::Matrix3d expected_information(ModelKind kind, const std::vector<double>& theta,
                                     std::optional<double> censor_at = std::nullopt) {
    auto score = [&](double y, bool censored) {
        Eigen::Vector3d s;
        for (int i = 0; i < 3; ++i) {
            const double h = 1e-5 * std::max(1.0, std::fabs(theta[i]));
            auto a = theta, b = theta;
            a[i] += h;
            b[i] -= h;
            const auto da = tlss::make_tlss(kind, a);
            const auto db = tlss::make_tlss(kind, b);
            s[i] = censored ? (da.log_cdf(y) - db.log_cdf(y)) / (2.0 * h) : (da.log_pdf(y) - db.log_pdf(y)) / (2.0 * h);
        }
        return s;
    };
    const auto d = tlss::make_tlss(kind, theta);
    const double mu = theta[0];
    const double s = theta[1];
    // y = mu + s tan(t): bounded integrand for every kernel, kink of the Laplace at t = 0.
    auto integrand = [&](double t, int i, int j) {
        const double y = mu + s * std::tan(t);
        const double sec = 1.0 / std::cos(t);
        const Eigen::Vector3d g = score(y, false);
        return g[i] * g[j] * d.pdf(y) * s * sec * sec;
    };
    const double lo = censor_at ? std::atan((*censor_at - mu) / s) : -std::numbers::pi / 2.0;
    const double hi = std::numbers::pi / 2.0;
    Eigen::Matrix3d info = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j <= i; ++j) {
            auto f = [&](double t) { return integrand(t, i, j); };
            double v = 0.0;
            if (lo < 0.0) {
                v = oracle::integrate(f, lo, 0.0, 200) + oracle::integrate(f, 0.0, hi, 200);
            } else {
                v = oracle::integrate(f, lo, hi, 200);
            }
            info(i, j) = info(j, i) = v;
        }
    }
    if (censor_at) {
        const Eigen::Vector3d g = score(*censor_at, true);
        info += d.cdf(*censor_at) * g * g.transpose();
    }
    return info;
}

bool criterion7() {
    Criterion c(7);
    c.budget(120.0);
    const std::vector<double> truth{0.5, 1.5, 2.0};
    const int repeats = 100;
    const int n = 5000;
    for (ModelKind kind : kTlssKinds) {
        const std::string name(tlss::to_string(kind));
        const Eigen::Matrix3d cov = expected_information(kind, truth).inverse() / n;
        const TlssDistribution d = tlss::make_tlss(kind, truth);
        int within = 0;
        for (int r = 0; r < repeats; ++r) {
            const auto y = tlss::sample_inverse(d, n, {tlss::SamplingMethod::InverseTransform, 777, static_cast<std::uint64_t>(r)});
            const auto fit = tlss::fit_mle({kind}, y, 1);
            bool ok = fit.converged;
            for (int i = 0; i < 3; ++i) ok = ok && std::fabs(fit.estimates[i] - truth[i]) < 3.0 * std::sqrt(cov(i, i));
            within += ok;
        }
        c.check(within >= 95, name + " recovered in " + std::to_string(within) + "/100");
        c.note(name + " " + std::to_string(within) + "/100");
    }

    // Left censoring at the 0.4 quantile of the generating law.
    const int censored_repeats = 20;
    const int censored_n = 5000;
    for (ModelKind kind : kTlssKinds) {
        const std::string name(tlss::to_string(kind));
        const TlssDistribution d = tlss::make_tlss(kind, truth);
        const double limit = d.quantile(0.4);
        const Eigen::Matrix3d cov = expected_information(kind, truth, limit).inverse() / censored_n;
        int within = 0;
        double fraction = 0.0;
        for (int r = 0; r < censored_repeats; ++r) {
            const auto y = tlss::sample_inverse(d, censored_n, {tlss::SamplingMethod::InverseTransform, 778, static_cast<std::uint64_t>(r)});
            std::vector<tlss::Observation> rows;
            for (double v : y) rows.push_back(v < limit ? tlss::Observation{limit, true} : tlss::Observation{v, false});
            fraction += static_cast<double>(std::count_if(rows.begin(), rows.end(), [](const auto& o) { return o.censored; })) /
                        censored_n;
            const auto fit = tlss::fit_mle({kind}, std::span<const tlss::Observation>(rows), 1);
            bool ok = fit.converged;
            for (int i = 0; i < 3; ++i) ok = ok && std::fabs(fit.estimates[i] - truth[i]) < 4.0 * std::sqrt(cov(i, i));
            within += ok;
        }
        c.check(within == censored_repeats,
                name + " censored fits within 4 SE in " + std::to_string(within) + "/" + std::to_string(censored_repeats));
        c.note(name + " censored " + std::to_string(within) + "/" + std::to_string(censored_repeats) + " at " +
               fmt(100.0 * fraction / censored_repeats, 3) + "% censoring");
    }
    return c.finish();
}

// ---------------------------------------------------------------- 8

std::string run_to_string(const std::string& args, const std::filesystem::path& out) {
    const std::string command = std::string("\"") + TLSS_CLI_PATH + "\" " + args + " > \"" + out.string() + "\"";
    if (std::system(command.c_str()) != 0) return "<exit status non-zero>";
    std::ifstream in(out, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool criterion8() {
    Criterion c(8);
    const auto dir = std::filesystem::temp_directory_path() / "tlss_acceptance";
    std::filesystem::create_directories(dir);
    const std::vector<std::string> pipelines{
        "sample --model normal --lambda 1 --n 2000 --seed 11 --method inverse",
        "sample --model cauchy --mu 2 --scale 0.5 --lambda -4 --n 2000 --seed 12 --method reject --censor-at 1.5",
        "sample --model logistic --lambda 3 --n 500 --seed 13 --stream 9 --format json",
        "simulate --lambda 1,-1 --n 30,60 --reps 40 --seed 5",
        "simulate --lambda 1.5 --n 40 --reps 20 --seed 6 --method inverse --threads 2 --format json",
    };
    int index = 0;
    for (const auto& args : pipelines) {
        const auto a = run_to_string(args, dir / ("a" + std::to_string(index) + ".out"));
        const auto b = run_to_string(args, dir / ("b" + std::to_string(index) + ".out"));
        c.check(!a.empty() && a.rfind("<exit", 0) != 0, "'" + args + "' produced no output");
        c.check(a == b, "'" + args + "' differs between invocations");
        ++index;
    }
    c.note(std::to_string(pipelines.size()) + " pipelines byte-identical across two invocations");
    std::filesystem::remove_all(dir);
    return c.finish();
}

} // namespace

int main() {
    bool ok = true;
    const std::vector<std::function<bool()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                      criterion5, criterion6, criterion7, criterion8};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            ok = criteria[i]() && ok;
        } catch (const std::exception& e) {
            std::cout << "criterion " << i + 1 << ": FAIL - unexpected exception: " << e.what() << std::endl;
            ok = false;
        }
    }
    return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
