#pragma once

// Command-line front end. run_cli() holds all command logic so it can be
// driven in-process; main.cpp only forwards the process streams.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tlss/tlss.hpp"

namespace tlss::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

enum class OutputFormat { Csv, Json, Text };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

using nlohmann::json;

struct Grid {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;

    std::vector<double> points() const {
        std::vector<double> out(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            out[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
        }
        return out;
    }
};

inline Grid parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw UsageError("grid must look like lo:hi:count, got '" + text + "'");
    Grid g;
    try {
        std::size_t used = 0;
        g.lo = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument("lo");
        g.hi = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("hi");
        g.count = std::stoi(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("count");
    } catch (const std::logic_error&) {
        throw UsageError("grid must look like lo:hi:count, got '" + text + "'");
    }
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || g.count < 1 || g.count > 10000000 || g.hi < g.lo) {
        throw UsageError("grid needs finite lo <= hi and 1 <= count, got '" + text + "'");
    }
    return g;
}

inline OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    return OutputFormat::Text;
}

inline ModelKind parse_model(const std::string& name) {
    if (auto kind = parse_model_kind(name)) return *kind;
    if (auto family = parse_family(name)) return tlss_kind(*family);
    throw UsageError("unknown model '" + name + "'");
}

inline std::string num(double v) { return format_double(v); }

inline std::string fixed4(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
}

// Distribution flags shared by eval, sample and modes.
struct DistributionArgs {
    std::string model = "tlsn";
    double mu = 0.0;
    double scale = 1.0;
    double lambda = 1.0;

    void attach(CLI::App& app) {
        app.add_option("--model", model, "tlsn | tlsl | tlsc | tlslg (or a kernel name)")->capture_default_str();
        app.add_option("--mu", mu, "location")->capture_default_str();
        app.add_option("--sigma,--scale", scale, "kernel scale")->capture_default_str();
        app.add_option("--lambda", lambda, "shape")->capture_default_str();
    }

    TlssDistribution build() const {
        const ModelKind kind = parse_model(model);
        if (!is_tlss(kind)) throw UsageError("model '" + model + "' is not a TLSS model");
        try {
            return TlssDistribution(KernelSpec(kernel_family(kind), mu, scale), lambda);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }

    json to_json() const { return {{"model", model}, {"mu", mu}, {"scale", scale}, {"lambda", lambda}}; }
};

inline json envelope(const std::string& command, json inputs, json results, json diagnostics) {
    return {{"command", command}, {"inputs", std::move(inputs)}, {"results", std::move(results)},
            {"diagnostics", std::move(diagnostics)}};
}

inline json interval_json(const Interval& ci) {
    if (!ci.computable) return {{"computable", false}, {"lower", nullptr}, {"upper", nullptr}};
    return {{"computable", true}, {"lower", ci.lower}, {"upper", ci.upper}};
}

inline json fit_json(const FitResult& fit) {
    const auto names = fit.model.parameter_names();
    json params = json::object();
    json intervals = json::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
        params[names[i]] = fit.estimates[i];
        intervals[names[i]] = interval_json(fit.intervals[i]);
    }
    json info = nullptr;
    if (fit.information) {
        info = json::array();
        for (Eigen::Index r = 0; r < fit.information->rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < fit.information->cols(); ++c) row.push_back((*fit.information)(r, c));
            info.push_back(row);
        }
    }
    return {{"model", std::string(to_string(fit.model.kind))},
            {"parameters", params},
            {"log_likelihood", fit.max_log_likelihood},
            {"aic", fit.aic},
            {"k", fit.model.parameter_count()},
            {"converged", fit.converged},
            {"level", fit.level},
            {"intervals", intervals},
            {"observed_information", info},
            {"evaluations", fit.trace.evaluations},
            {"diagnostics", fit.diagnostics}};
}

// eval

struct EvalArgs {
    DistributionArgs dist;
    std::string grid = "-4:4:161";
    std::string u_grid;
    std::string format = "csv";
};

inline int cmd_eval(const EvalArgs& args, std::ostream& out) {
    const TlssDistribution d = args.dist.build();
    const OutputFormat format = parse_format(args.format);
    json inputs = args.dist.to_json();
    json rows = json::array();
    std::ostringstream csv;

    if (!args.u_grid.empty()) {
        const Grid g = parse_grid(args.u_grid);
        inputs["u_grid"] = args.u_grid;
        csv << "u,quantile\n";
        for (double u : g.points()) {
            if (!(u > 0.0 && u < 1.0)) throw UsageError("u-grid values must lie in (0,1)");
            const double q = d.quantile(u);
            csv << num(u) << ',' << num(q) << '\n';
            rows.push_back({{"u", u}, {"quantile", q}});
        }
    } else {
        const Grid g = parse_grid(args.grid);
        inputs["grid"] = args.grid;
        csv << "y,pdf,logpdf,cdf\n";
        for (double y : g.points()) {
            const double pdf = d.pdf(y);
            const double logpdf = d.log_pdf(y);
            const double cdf = d.cdf(y);
            if (!std::isfinite(logpdf) && pdf > 0.0) throw NumericalError("non-finite log density at y = " + num(y));
            csv << num(y) << ',' << num(pdf) << ',' << num(logpdf) << ',' << num(cdf) << '\n';
            rows.push_back({{"y", y}, {"pdf", pdf}, {"logpdf", logpdf}, {"cdf", cdf}});
        }
    }
    if (format == OutputFormat::Json) {
        out << envelope("eval", inputs, rows, json::array()).dump(2) << '\n';
    } else {
        out << csv.str();
    }
    return kOk;
}

// sample

struct SampleArgs {
    DistributionArgs dist;
    std::size_t n = 100;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    std::string method = "inverse";
    std::optional<double> censor_at;
    std::string format = "csv";
};

inline int cmd_sample(const SampleArgs& args, std::ostream& out) {
    const TlssDistribution d = args.dist.build();
    const auto method = parse_sampling_method(args.method);
    if (!method) throw UsageError("method must be inverse or reject");
    if (args.censor_at && !std::isfinite(*args.censor_at)) throw UsageError("--censor-at must be finite");
    const SamplerConfig cfg{*method, args.seed, args.stream};

    std::uint64_t proposals = args.n;
    std::vector<double> values;
    if (*method == SamplingMethod::AcceptReject) {
        RejectionSample rs = sample_rejection(d, args.n, cfg);
        values = std::move(rs.values);
        proposals = rs.proposals_used;
    } else {
        values = sample_inverse(d, args.n, cfg);
    }
    std::vector<Observation> rows;
    rows.reserve(values.size());
    for (double v : values) {
        if (args.censor_at && v < *args.censor_at) rows.push_back({*args.censor_at, true});
        else rows.push_back({v, false});
    }

    if (parse_format(args.format) == OutputFormat::Json) {
        json inputs = args.dist.to_json();
        inputs["n"] = args.n;
        inputs["seed"] = args.seed;
        inputs["stream"] = args.stream;
        inputs["method"] = args.method;
        inputs["censor_at"] = args.censor_at ? json(*args.censor_at) : json(nullptr);
        json values_json = json::array();
        json flags = json::array();
        for (const auto& r : rows) {
            values_json.push_back(r.value);
            flags.push_back(r.censored ? 1 : 0);
        }
        json results = {{"values", values_json}, {"proposals", proposals}};
        if (args.censor_at) results["censored"] = flags;
        out << envelope("sample", inputs, results, json::array()).dump(2) << '\n';
    } else {
        out << format_dataset(rows, args.censor_at.has_value());
    }
    return kOk;
}

// fit / compare

struct FitArgs {
    std::string data;
    std::vector<std::string> models;
    double level = 0.95;
    int starts = 2;
    std::string lambda_sign = "positive";
    std::string format = "json";
};

inline int cmd_fit(const std::string& command, const FitArgs& args, std::ostream& out, std::ostream& err) {
    if (!(args.level > 0.0 && args.level < 1.0)) throw UsageError("--level must lie in (0,1)");
    if (args.starts < 1) throw UsageError("--starts must be at least 1");
    if (args.lambda_sign != "positive" && args.lambda_sign != "negative") {
        throw UsageError("--lambda-sign must be positive or negative");
    }
    std::vector<ModelKind> kinds;
    for (const auto& m : args.models) kinds.push_back(parse_model(m));
    const DatasetFile dataset = parse_dataset(args.data);

    FitOptions options;
    options.level = args.level;
    options.lambda_sign = args.lambda_sign == "negative" ? LambdaSign::Negative : LambdaSign::Positive;

    json fits = json::array();
    json diagnostics = json::array();
    std::vector<std::pair<double, std::string>> ranking;
    std::vector<FitResult> done;
    bool any_numerical_failure = false;
    for (ModelKind kind : kinds) {
        const std::string name(to_string(kind));
        try {
            FitResult fit = fit_mle(ModelSpec{kind}, std::span<const Observation>(dataset.rows), args.starts, options);
            fits.push_back(fit_json(fit));
            ranking.emplace_back(fit.aic, name);
            for (const auto& d : fit.diagnostics) diagnostics.push_back(name + ": " + d);
            done.push_back(std::move(fit));
        } catch (const SupportError& e) {
            fits.push_back({{"model", name}, {"error", e.what()}});
            diagnostics.push_back(name + ": " + e.what());
            err << "tlss: " << name << ": " << e.what() << '\n';
        } catch (const DomainError& e) {
            any_numerical_failure = true;
            fits.push_back({{"model", name}, {"error", e.what()}});
            diagnostics.push_back(name + ": " + e.what());
            err << "tlss: " << name << ": " << e.what() << '\n';
        }
    }
    std::stable_sort(ranking.begin(), ranking.end());
    json ranking_json = json::array();
    for (const auto& [value, name] : ranking) ranking_json.push_back({{"model", name}, {"aic", value}});

    const OutputFormat format = parse_format(args.format);
    if (format == OutputFormat::Json) {
        json inputs = {{"data", dataset.path.string()},
                       {"observations", dataset.rows.size()},
                       {"censored", dataset.censored_count()},
                       {"models", args.models},
                       {"level", args.level},
                       {"starts", args.starts},
                       {"lambda_sign", args.lambda_sign}};
        out << envelope(command, inputs, {{"fits", fits}, {"ranking", ranking_json}}, diagnostics).dump(2) << '\n';
    } else if (format == OutputFormat::Csv) {
        out << "model,parameter,estimate,lower,upper,log_likelihood,aic,converged\n";
        for (const auto& fit : done) {
            const auto names = fit.model.parameter_names();
            for (std::size_t i = 0; i < names.size(); ++i) {
                const Interval& ci = fit.intervals[i];
                out << to_string(fit.model.kind) << ',' << names[i] << ',' << num(fit.estimates[i]) << ','
                    << (ci.computable ? num(ci.lower) : "") << ',' << (ci.computable ? num(ci.upper) : "") << ','
                    << num(fit.max_log_likelihood) << ',' << num(fit.aic) << ',' << (fit.converged ? 1 : 0) << '\n';
            }
        }
    } else {
        out << "data: " << dataset.path.string() << " (n = " << dataset.rows.size()
            << ", censored = " << dataset.censored_count() << ")\n";
        for (const auto& fit : done) {
            out << to_string(fit.model.kind) << ": log-lik " << fixed4(fit.max_log_likelihood) << ", AIC "
                << fixed4(fit.aic) << (fit.converged ? "" : " (not converged)") << '\n';
            const auto names = fit.model.parameter_names();
            for (std::size_t i = 0; i < names.size(); ++i) {
                const Interval& ci = fit.intervals[i];
                out << "  " << std::left << std::setw(11) << names[i] << std::right << std::setw(12)
                    << fixed4(fit.estimates[i]);
                if (ci.computable) out << "   (" << fixed4(ci.lower) << ", " << fixed4(ci.upper) << ")";
                else out << "   (interval not computable)";
                out << '\n';
            }
        }
        out << "AIC ranking:";
        for (const auto& [value, name] : ranking) out << ' ' << name;
        out << '\n';
    }
    if (done.empty() && any_numerical_failure) return kNumerical;
    if (done.empty()) return kData;
    return kOk;
}

// simulate

struct SimulateArgs {
    std::vector<double> lambdas{1.0, -1.0};
    std::vector<int> sizes{50, 75, 100};
    double mu = 0.0;
    double sigma = 1.0;
    int reps = 1000;
    double level = 0.95;
    std::uint64_t seed = 20240601;
    std::string method = "reject";
    unsigned threads = 1;
    int starts = 2;
    bool global = false;
    std::string format = "csv";
};

inline int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
    const auto method = parse_sampling_method(args.method);
    if (!method) throw UsageError("method must be inverse or reject");
    StudyConfig cfg;
    cfg.mu = args.mu;
    cfg.sigma = args.sigma;
    cfg.lambdas = args.lambdas;
    cfg.sample_sizes = args.sizes;
    cfg.replications = args.reps;
    cfg.ci_level = args.level;
    cfg.seed = args.seed;
    cfg.method = *method;
    cfg.threads = args.threads;
    cfg.starts = args.starts;
    cfg.start_at_truth = !args.global;
    try {
        validate(cfg);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    const StudyReport report = run_study(cfg);

    const OutputFormat format = parse_format(args.format);
    if (format == OutputFormat::Json) {
        json inputs = {{"mu", cfg.mu},       {"sigma", cfg.sigma},   {"lambdas", cfg.lambdas},
                       {"sizes", cfg.sample_sizes}, {"reps", cfg.replications}, {"level", cfg.ci_level},
                       {"seed", cfg.seed},   {"method", args.method}, {"starts", cfg.starts},
                       {"start_at_truth", cfg.start_at_truth}};
        out << envelope("simulate", inputs, json::parse(summarize(report, ReportFormat::JSON)), json::array()).dump(2)
            << '\n';
    } else {
        out << summarize(report, format == OutputFormat::Csv ? ReportFormat::CSV : ReportFormat::Text);
    }
    return kOk;
}

// modes

struct ModesArgs {
    DistributionArgs dist;
    double radius = kDefaultModeRadius;
    int points = kDefaultModeGridPoints;
    std::string format = "csv";
};

inline int cmd_modes(const ModesArgs& args, std::ostream& out) {
    const TlssDistribution d = args.dist.build();
    if (!(args.radius > 0.0) || args.points < 16) throw UsageError("--radius must be positive and --points >= 16");
    const auto modes = find_modes(d, args.radius, args.points);
    if (parse_format(args.format) == OutputFormat::Json) {
        json rows = json::array();
        for (const auto& m : modes) {
            rows.push_back({{"location", m.location},
                            {"kind", std::string(to_string(m.kind))},
                            {"density", d.pdf(m.location)},
                            {"residual", m.residual},
                            {"at_kink", m.at_kink}});
        }
        json inputs = args.dist.to_json();
        inputs["radius"] = args.radius;
        inputs["points"] = args.points;
        out << envelope("modes", inputs, rows, json::array()).dump(2) << '\n';
    } else {
        out << "location,kind,density,residual,at_kink\n";
        for (const auto& m : modes) {
            out << num(m.location) << ',' << to_string(m.kind) << ',' << num(d.pdf(m.location)) << ','
                << num(m.residual) << ',' << (m.at_kink ? 1 : 0) << '\n';
        }
    }
    return kOk;
}

} // namespace detail

/// Parses argv and runs one subcommand. Payload goes to out, diagnostics to err.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"Truncated-logistic skew-symmetric distributions: evaluation, sampling, fitting"};
    app.require_subcommand(1);
    const std::vector<std::string> formats{"csv", "json", "text"};

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "density, log density and cdf on a y-grid, or quantiles on a u-grid");
    eval.dist.attach(*eval_cmd);
    eval_cmd->add_option("--grid", eval.grid, "y-grid lo:hi:count")->capture_default_str();
    eval_cmd->add_option("--u-grid", eval.u_grid, "u-grid lo:hi:count; switches to quantile output");
    eval_cmd->add_option("--format", eval.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    SampleArgs smp;
    auto* sample_cmd = app.add_subcommand("sample", "seeded variates as a dataset CSV");
    smp.dist.attach(*sample_cmd);
    sample_cmd->add_option("--n", smp.n, "number of variates")->capture_default_str();
    sample_cmd->add_option("--seed", smp.seed)->capture_default_str();
    sample_cmd->add_option("--stream", smp.stream)->capture_default_str();
    sample_cmd->add_option("--method", smp.method, "inverse | reject")->capture_default_str();
    sample_cmd->add_option("--censor-at", smp.censor_at, "left-censor values below this detection limit");
    sample_cmd->add_option("--format", smp.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    FitArgs fit;
    fit.models = {"tlsn"};
    auto* fit_cmd = app.add_subcommand("fit", "maximum-likelihood fits with Wald intervals and AIC ranking");
    fit_cmd->add_option("data", fit.data, "dataset CSV (header value[,censored]); relative paths also searched in $TLSS_DATA_DIR")->required();
    fit_cmd->add_option("--model", fit.models, "models to fit (repeat or comma-separate)")->delimiter(',')->capture_default_str();
    fit_cmd->add_option("--level", fit.level)->capture_default_str();
    fit_cmd->add_option("--starts", fit.starts)->capture_default_str();
    fit_cmd->add_option("--lambda-sign", fit.lambda_sign, "sign reported for the shape estimate")->capture_default_str();
    fit_cmd->add_option("--format", fit.format)->check(CLI::IsMember(formats))->capture_default_str();

    FitArgs cmp;
    cmp.models = {"weibull", "lognormal", "tlsn", "tlsl", "tlsc", "tlslg"};
    auto* compare_cmd = app.add_subcommand("compare", "fit several models and rank them by AIC");
    compare_cmd->add_option("data", cmp.data, "dataset CSV")->required();
    compare_cmd->add_option("--model", cmp.models, "models to compare")->delimiter(',')->capture_default_str();
    compare_cmd->add_option("--level", cmp.level)->capture_default_str();
    compare_cmd->add_option("--starts", cmp.starts)->capture_default_str();
    compare_cmd->add_option("--lambda-sign", cmp.lambda_sign)->capture_default_str();
    compare_cmd->add_option("--format", cmp.format)->check(CLI::IsMember(formats));
    cmp.format = "text";

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo study of TLSN estimation");
    sim_cmd->add_option("--lambda", sim.lambdas, "shape values")->delimiter(',')->capture_default_str();
    sim_cmd->add_option("--n", sim.sizes, "sample sizes")->delimiter(',')->capture_default_str();
    sim_cmd->add_option("--mu", sim.mu)->capture_default_str();
    sim_cmd->add_option("--sigma,--scale", sim.sigma)->capture_default_str();
    sim_cmd->add_option("--reps", sim.reps)->capture_default_str();
    sim_cmd->add_option("--level", sim.level)->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
    sim_cmd->add_option("--method", sim.method, "inverse | reject")->capture_default_str();
    sim_cmd->add_option("--threads", sim.threads)->capture_default_str();
    sim_cmd->add_option("--starts", sim.starts, "starts per fit with --global")->capture_default_str();
    sim_cmd->add_flag("--global", sim.global, "global multi-start search instead of starting at the truth");
    sim_cmd->add_option("--format", sim.format)->check(CLI::IsMember(formats))->capture_default_str();

    ModesArgs modes;
    auto* modes_cmd = app.add_subcommand("modes", "stationary points of the density");
    modes.dist.attach(*modes_cmd);
    modes_cmd->add_option("--radius", modes.radius, "search half-width in scale units")->capture_default_str();
    modes_cmd->add_option("--points", modes.points, "grid points")->capture_default_str();
    modes_cmd->add_option("--format", modes.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "tlss: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*eval_cmd) return cmd_eval(eval, out);
        if (*sample_cmd) return cmd_sample(smp, out);
        if (*fit_cmd) return cmd_fit("fit", fit, out, err);
        if (*compare_cmd) return cmd_fit("compare", cmp, out, err);
        if (*sim_cmd) return cmd_simulate(sim, out);
        if (*modes_cmd) return cmd_modes(modes, out);
    } catch (const UsageError& e) {
        err << "tlss: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        err << "tlss: " << e.what() << '\n';
        return kData;
    } catch (const SupportError& e) {
        err << "tlss: " << e.what() << '\n';
        return kData;
    } catch (const NumericalError& e) {
        err << "tlss: " << e.what() << '\n';
        return kNumerical;
    } catch (const StencilError& e) {
        err << "tlss: " << e.what() << '\n';
        return kNumerical;
    } catch (const DomainError& e) {
        err << "tlss: " << e.what() << '\n';
        return kNumerical;
    }
    err << "tlss: no subcommand\n";
    return kUsage;
}

} // namespace tlss::cli
