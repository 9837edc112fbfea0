#include "collinlab/cli.hpp"

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "collinlab/augmentation.hpp"
#include "collinlab/dataset.hpp"
#include "collinlab/diagnostics.hpp"
#include "collinlab/errors.hpp"
#include "collinlab/io.hpp"
#include "collinlab/perturbation.hpp"
#include "collinlab/regression.hpp"

namespace collinlab {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAlarm = 2;

struct CommonOpts {
    std::string input;
    std::string response;
    std::vector<std::string> regressors;
    bool no_intercept = false;
    std::string format = "json";
    std::string out_path;
};

void add_dataset_flags(CLI::App* cmd, CommonOpts& o) {
    // These subcommands define `--h`, which CLI11 would treat as clashing
    // with the default `-h` help short name.
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("input", o.input, "CSV file with a header row")->required();
    cmd->add_option("--y", o.response, "response column name")->required();
    cmd->add_option("--x", o.regressors, "comma-separated regressor column names")
        ->required()
        ->delimiter(',');
    cmd->add_flag("--no-intercept", o.no_intercept, "do not prepend an intercept column");
}

void add_output_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"json", "markdown"}));
    cmd->add_option("--out", o.out_path, "write the report to this file instead of stdout");
}

Dataset load_dataset(const CommonOpts& o) {
    CsvSchema schema;
    schema.response = o.response;
    schema.regressors = o.regressors;
    schema.add_intercept = !o.no_intercept;
    return load_csv(o.input, schema);
}

void emit(const Report& report, const CommonOpts& o, std::ostream& out) {
    const std::string text = export_report(report, parse_report_format(o.format));
    if (o.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) {
        throw Error("cannot open output file: " + o.out_path);
    }
    file << text;
}

nlohmann::ordered_json base_header(const std::string& subcommand, const CommonOpts& o) {
    nlohmann::ordered_json h;
    h["subcommand"] = subcommand;
    h["input"] = o.input;
    h["response"] = o.response;
    h["regressors"] = o.regressors;
    h["intercept"] = !o.no_intercept;
    return h;
}

CnScaling parse_scaling(const std::string& name) {
    return name == "raw" ? CnScaling::raw : CnScaling::unit_length;
}

/// Value of a bare-or-valued `--auto ALPHA` option. An empty string means the
/// flag was given without a value.
double parse_alpha_arg(const std::string& text) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(text, &pos);
        if (pos != text.size()) {
            throw Error("cannot parse alpha value '" + text + "'");
        }
        return value;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error("cannot parse alpha value '" + text + "'");
    }
}

// How the replication count is chosen for the augmentation section.
enum class HMode {
    explicit_h,     // --h N given; the plan is attached as information only
    auto_strict,    // --auto: the plan must exist, DegenerateT propagates
    auto_fallback,  // default for `report`: fall back to h = 1 if no plan
};

AugmentationSection build_augmentation(const Dataset& data, const FitResult& fit,
                                       HMode mode, double alpha, std::size_t h_flag) {
    AugmentationSection section;
    if (mode == HMode::auto_strict) {
        section.plan = required_replication(fit, alpha);
    } else {
        try {
            section.plan = required_replication(fit, alpha);
        } catch (const DegenerateTError&) {
            // Every coefficient has a zero t statistic; no bound exists, but
            // an explicitly requested h can still be applied.
        }
    }
    if (mode == HMode::explicit_h) {
        section.h = h_flag;
    } else {
        section.h = section.plan ? section.plan->h_required : 1;
    }
    section.predicted = predict_augmented(fit, section.h);
    section.predicted_stars = significance_stars(
        section.predicted.t_stats, section.predicted.n_rows - section.predicted.k);
    if (section.h >= 2) {
        section.deviations = verify_identities(data, section.h);
    }
    return section;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Collinearity diagnostics laboratory: OLS fits, condition-number and "
                 "VIF diagnostics, sample replication, and perturbation experiments",
                 "collinlab"};
    app.require_subcommand(1);

    // diagnose
    CommonOpts diag_opts;
    std::string diag_scaling = "unit";
    CLI::App* diag = app.add_subcommand("diagnose", "fit OLS and run collinearity diagnostics");
    add_dataset_flags(diag, diag_opts);
    diag->add_option("--cn-scaling", diag_scaling, "column scaling for the condition number")
        ->check(CLI::IsMember({"unit", "raw"}));
    add_output_flags(diag, diag_opts);

    // augment
    CommonOpts aug_opts;
    std::size_t aug_h = 1;
    double aug_alpha = 0.05;
    CLI::App* aug = app.add_subcommand(
        "augment", "replicate the sample and report base vs augmented statistics");
    add_dataset_flags(aug, aug_opts);
    CLI::Option* aug_h_opt =
        aug->add_option("--h", aug_h, "total copies of the sample (1 = base fit)")
            ->check(CLI::PositiveNumber);
    std::string aug_auto_arg;
    CLI::Option* aug_auto_opt =
        aug->add_option("--auto", aug_auto_arg,
                        "derive h from the significance bound, optionally at this alpha")
            ->expected(0, 1);
    aug->add_option("--alpha", aug_alpha, "significance level for --auto");
    add_output_flags(aug, aug_opts);

    // perturb
    CommonOpts pert_opts;
    std::size_t pert_h = 1;
    double pert_pct = 0.01;
    std::size_t pert_trials = 1000;
    std::uint64_t pert_seed = 0;
    double pert_threshold = 10.0;
    std::string pert_noise = "exponential";
    CLI::App* pert = app.add_subcommand(
        "perturb", "Monte Carlo perturbation of the regressors, measuring coefficient shift");
    add_dataset_flags(pert, pert_opts);
    pert->add_option("--h", pert_h, "replicate the sample h-fold before perturbing")
        ->check(CLI::PositiveNumber);
    pert->add_option("--pct", pert_pct, "perturbation as a fraction of each column norm");
    pert->add_option("--trials", pert_trials, "Monte Carlo repetitions")
        ->check(CLI::PositiveNumber);
    pert->add_option("--seed", pert_seed, "random seed")->envname("COLLINLAB_SEED");
    pert->add_option("--threshold", pert_threshold,
                     "mean shift (percent) above which the exit code signals instability");
    pert->add_option("--noise", pert_noise, "entry distribution of the noise direction")
        ->check(CLI::IsMember({"exponential", "gaussian", "uniform"}));
    add_output_flags(pert, pert_opts);

    // york
    std::size_t york_m = 1;
    std::string york_scaling = "unit";
    CommonOpts york_opts;
    CLI::App* york = app.add_subcommand(
        "york", "eigenvalues and condition number of the built-in block design");
    york->add_option("--m", york_m, "block multiplier (design has 100*m rows)")
        ->check(CLI::PositiveNumber);
    york->add_option("--cn-scaling", york_scaling, "column scaling for the condition number")
        ->check(CLI::IsMember({"unit", "raw"}));
    add_output_flags(york, york_opts);

    // report: the full pipeline in one run
    CommonOpts rep_opts;
    std::string rep_scaling = "unit";
    std::size_t rep_h = 1;
    double rep_alpha = 0.05;
    double rep_pct = 0.01;
    std::size_t rep_trials = 1000;
    std::uint64_t rep_seed = 0;
    double rep_threshold = 10.0;
    std::string rep_noise = "exponential";
    CLI::App* rep = app.add_subcommand(
        "report", "diagnose, replicate, and perturb in one combined report");
    add_dataset_flags(rep, rep_opts);
    rep->add_option("--cn-scaling", rep_scaling, "column scaling for the condition number")
        ->check(CLI::IsMember({"unit", "raw"}));
    CLI::Option* rep_h_opt =
        rep->add_option("--h", rep_h, "total copies of the sample (default: from the bound)")
            ->check(CLI::PositiveNumber);
    std::string rep_auto_arg;
    CLI::Option* rep_auto_opt =
        rep->add_option("--auto", rep_auto_arg,
                        "derive h from the significance bound, optionally at this alpha")
            ->expected(0, 1);
    rep->add_option("--alpha", rep_alpha, "significance level for the bound");
    rep->add_option("--pct", rep_pct, "perturbation as a fraction of each column norm");
    rep->add_option("--trials", rep_trials, "Monte Carlo repetitions")
        ->check(CLI::PositiveNumber);
    rep->add_option("--seed", rep_seed, "random seed")->envname("COLLINLAB_SEED");
    rep->add_option("--threshold", rep_threshold,
                    "mean shift (percent) above which the exit code signals instability");
    rep->add_option("--noise", rep_noise, "entry distribution of the noise direction")
        ->check(CLI::IsMember({"exponential", "gaussian", "uniform"}));
    add_output_flags(rep, rep_opts);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("collinlab");
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (app.got_subcommand(diag)) {
            const Dataset data = load_dataset(diag_opts);
            const FitResult fit = fit_ols(data);

            Report report;
            report.header = base_header("diagnose", diag_opts);
            report.header["cn_scaling"] = diag_scaling;
            report.fit = fit;
            report.stars = significance_stars(fit);
            report.diagnostics = diagnose(data, fit, parse_scaling(diag_scaling));
            emit(report, diag_opts, out);
            return report.diagnostics->alarming() ? kExitAlarm : kExitOk;
        }

        if (app.got_subcommand(aug)) {
            if (aug_h_opt->count() > 0 && aug_auto_opt->count() > 0) {
                throw Error("augment: pass either --h or --auto, not both");
            }
            if (aug_auto_opt->count() > 0 && !aug_auto_arg.empty()) {
                aug_alpha = parse_alpha_arg(aug_auto_arg);
            }
            const Dataset data = load_dataset(aug_opts);
            const FitResult fit = fit_ols(data);
            const HMode mode =
                aug_auto_opt->count() > 0 ? HMode::auto_strict : HMode::explicit_h;

            Report report;
            report.header = base_header("augment", aug_opts);
            report.header["alpha"] = aug_alpha;
            report.fit = fit;
            report.stars = significance_stars(fit);
            report.augmentation = build_augmentation(data, fit, mode, aug_alpha, aug_h);
            report.header["h"] = report.augmentation->h;
            emit(report, aug_opts, out);
            return kExitOk;
        }

        if (app.got_subcommand(pert)) {
            Dataset data = load_dataset(pert_opts);
            if (pert_h > 1) {
                data = replicate_sample(data, pert_h);
            }
            const FitResult fit = fit_ols(data);

            PerturbationConfig cfg;
            cfg.pct = pert_pct;
            cfg.trials = pert_trials;
            cfg.seed = pert_seed;
            cfg.distribution = parse_noise_distribution(pert_noise);
            const PerturbationSummary summary = monte_carlo_stability(data, cfg);

            Report report;
            report.header = base_header("perturb", pert_opts);
            report.header["h"] = pert_h;
            report.header["pct"] = pert_pct;
            report.header["trials"] = pert_trials;
            report.header["seed"] = pert_seed;
            report.header["noise"] = pert_noise;
            report.header["threshold"] = pert_threshold;
            report.fit = fit;
            report.stars = significance_stars(fit);
            report.perturbation = summary;
            emit(report, pert_opts, out);

            if (summary.shifts.empty()) {
                err << "error: perturb: every trial failed to refit\n";
                return kExitError;
            }
            return summary.mean > pert_threshold ? kExitAlarm : kExitOk;
        }

        if (app.got_subcommand(york)) {
            const Matrix design = york_design(YorkParams{york_m});
            const CnScaling scaling = parse_scaling(york_scaling);

            DiagnosticsReport d;
            d.eigenvalues = gram_eigenvalues(design, scaling);
            d.cn = condition_number(design, scaling);
            d.cn_scaling = scaling;
            d.cn_verdict = classify_cn(d.cn);

            Report report;
            report.header["subcommand"] = "york";
            report.header["m"] = york_m;
            report.header["cn_scaling"] = york_scaling;
            report.diagnostics = d;
            emit(report, york_opts, out);
            return d.alarming() ? kExitAlarm : kExitOk;
        }

        if (app.got_subcommand(rep)) {
            if (rep_h_opt->count() > 0 && rep_auto_opt->count() > 0) {
                throw Error("report: pass either --h or --auto, not both");
            }
            if (rep_auto_opt->count() > 0 && !rep_auto_arg.empty()) {
                rep_alpha = parse_alpha_arg(rep_auto_arg);
            }
            const Dataset data = load_dataset(rep_opts);
            const FitResult fit = fit_ols(data);
            const HMode mode =
                rep_h_opt->count() > 0 ? HMode::explicit_h : HMode::auto_fallback;

            Report report;
            report.header = base_header("report", rep_opts);
            report.header["cn_scaling"] = rep_scaling;
            report.header["alpha"] = rep_alpha;
            report.header["pct"] = rep_pct;
            report.header["trials"] = rep_trials;
            report.header["seed"] = rep_seed;
            report.header["noise"] = rep_noise;
            report.header["threshold"] = rep_threshold;
            report.fit = fit;
            report.stars = significance_stars(fit);
            report.diagnostics = diagnose(data, fit, parse_scaling(rep_scaling));
            report.augmentation = build_augmentation(data, fit, mode, rep_alpha, rep_h);
            report.header["h"] = report.augmentation->h;

            const Dataset pert_data = report.augmentation->h > 1
                                          ? replicate_sample(data, report.augmentation->h)
                                          : data;
            PerturbationConfig cfg;
            cfg.pct = rep_pct;
            cfg.trials = rep_trials;
            cfg.seed = rep_seed;
            cfg.distribution = parse_noise_distribution(rep_noise);
            report.perturbation = monte_carlo_stability(pert_data, cfg);
            emit(report, rep_opts, out);

            const bool unstable = !report.perturbation->shifts.empty() &&
                                  report.perturbation->mean > rep_threshold;
            return (report.diagnostics->alarming() || unstable) ? kExitAlarm : kExitOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;  // unreachable: a subcommand is required
}

}  // namespace collinlab
