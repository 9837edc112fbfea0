#include "collinlab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "collinlab/errors.hpp"

namespace collinlab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
    const auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n';
    };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return std::string(s);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string_view rest = line;
    while (true) {
        const std::size_t comma = rest.find(',');
        if (comma == std::string_view::npos) {
            cells.push_back(trim(rest));
            break;
        }
        cells.push_back(trim(rest.substr(0, comma)));
        rest.remove_prefix(comma + 1);
    }
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no, std::size_t col_no,
                  const std::string& col_name) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || cell.empty()) {
        throw ParseError("load_csv: cannot parse '" + cell + "' in column " + col_name,
                         line_no, col_no);
    }
    if (!std::isfinite(value)) {
        throw ParseError("load_csv: non-finite value '" + cell + "' in column " + col_name,
                         line_no, col_no);
    }
    return value;
}

std::string format_number(double v) {
    std::ostringstream oss;
    oss << v;  // default %g-style, 6 significant digits
    return oss.str();
}

ordered_json json_or_null(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json fit_to_json(const FitResult& fit, const std::vector<std::string>& stars) {
    ordered_json f;
    f["names"] = fit.names;
    f["beta"] = fit.beta;
    f["se"] = fit.se;
    f["t"] = fit.t_stats;
    f["stars"] = stars.size() == fit.k ? stars : significance_stars(fit);
    f["r2"] = fit.r2;
    f["r2_adj"] = fit.r2_adj;
    f["sigma2_hat"] = fit.sigma2_hat;
    f["f_stat"] = json_or_null(fit.f_stat);
    f["df"] = {fit.k - 1, fit.n - fit.k};
    return f;
}

ordered_json diagnostics_to_json(const DiagnosticsReport& d) {
    ordered_json out;
    out["names"] = d.regressor_names;
    out["vif"] = d.vifs;
    out["cn"] = d.cn;
    out["cn_scaling"] = d.cn_scaling == CnScaling::unit_length ? "unit" : "raw";
    out["eigenvalues"] = d.eigenvalues;
    out["corr_det"] = json_or_null(d.corr_det);

    ordered_json per_vif = ordered_json::object();
    for (std::size_t i = 0; i < d.vifs.size(); ++i) {
        per_vif[d.regressor_names[i]] = to_string(d.vif_verdicts[i]);
    }
    ordered_json verdicts;
    verdicts["cn"] = to_string(d.cn_verdict);
    verdicts["vif"] = per_vif;
    verdicts["alarm"] = d.alarming();
    out["verdicts"] = verdicts;
    return out;
}

ordered_json augmentation_to_json(const AugmentationSection& a,
                                  const std::vector<std::string>& coef_names) {
    const auto name_of = [&](std::size_t idx) {
        return idx < coef_names.size() ? coef_names[idx] : std::to_string(idx);
    };

    ordered_json out;
    out["h"] = a.h;
    if (a.plan) {
        out["alpha"] = a.plan->alpha;
        ordered_json selected = ordered_json::array();
        for (std::size_t idx : a.plan->selected) selected.push_back(name_of(idx));
        out["selected"] = selected;
        out["bounds"] = a.plan->bounds;
        out["h_per_coefficient"] = a.plan->h_per_coefficient;
        out["h_required"] = a.plan->h_required;
        ordered_json excluded = ordered_json::array();
        for (std::size_t idx : a.plan->excluded) excluded.push_back(name_of(idx));
        out["excluded"] = excluded;
    } else {
        out["bounds"] = ordered_json::array();
    }

    const AugmentedPrediction& p = a.predicted;
    ordered_json pred;
    pred["beta"] = p.beta;
    pred["se"] = p.se;
    pred["t"] = p.t_stats;
    pred["stars"] = a.predicted_stars.size() == p.beta.size()
                        ? a.predicted_stars
                        : significance_stars(p.t_stats, p.n_rows - p.k);
    pred["r2"] = p.r2;
    pred["r2_adj"] = p.r2_adj;
    pred["sigma2_hat"] = p.sigma2_hat;
    pred["scr"] = p.scr;
    pred["sct"] = p.sct;
    pred["f_stat"] = json_or_null(p.f_stat);
    pred["n"] = p.n_rows;
    pred["df"] = {p.k - 1, p.n_rows - p.k};
    out["predicted"] = pred;

    const IdentityDeviations& dev = a.deviations;
    ordered_json d;
    d["beta"] = dev.beta;
    d["scr"] = dev.scr;
    d["sct"] = dev.sct;
    d["r2"] = dev.r2;
    d["r2_adj"] = dev.r2_adj;
    d["sigma2_hat"] = dev.sigma2_hat;
    d["cov"] = dev.cov;
    d["t_stats"] = dev.t_stats;
    d["f_stat"] = dev.f_stat;
    d["max"] = dev.max();
    out["deviations"] = d;
    return out;
}

ordered_json perturbation_to_json(const PerturbationSummary& p) {
    ordered_json out;
    out["pct"] = p.pct;
    out["trials"] = p.trials;
    out["seed"] = p.seed;
    out["noise"] = to_string(p.distribution);
    out["failed"] = p.failed;
    out["mean"] = p.mean;
    out["sd"] = p.sd;
    out["min"] = p.min;
    out["max"] = p.max;
    return out;
}

void markdown_fit_table(std::ostringstream& md, const Report& report) {
    const FitResult& fit = *report.fit;
    const std::vector<std::string> base_stars =
        report.stars.size() == fit.k ? report.stars : significance_stars(fit);

    const AugmentationSection* aug =
        report.augmentation ? &*report.augmentation : nullptr;
    std::vector<std::string> aug_stars;
    if (aug) {
        aug_stars = aug->predicted_stars.size() == aug->predicted.beta.size()
                        ? aug->predicted_stars
                        : significance_stars(aug->predicted.t_stats,
                                             aug->predicted.n_rows - aug->predicted.k);
    }

    md << "## Model\n\n";
    if (aug) {
        md << "| coefficient | base | replicated (h=" << aug->h << ") |\n";
        md << "| --- | --- | --- |\n";
    } else {
        md << "| coefficient | estimate |\n";
        md << "| --- | --- |\n";
    }
    for (std::size_t j = 0; j < fit.k; ++j) {
        md << "| " << fit.names[j] << " | " << format_number(fit.beta[j]) << base_stars[j];
        if (aug) {
            md << " | " << format_number(aug->predicted.beta[j]) << aug_stars[j];
        }
        md << " |\n";
        md << "|  | (" << format_number(fit.se[j]) << ")";
        if (aug) {
            md << " | (" << format_number(aug->predicted.se[j]) << ")";
        }
        md << " |\n";
    }

    const auto stat_row = [&](const std::string& label, const std::string& base,
                              const std::string& augmented) {
        md << "| " << label << " | " << base;
        if (aug) md << " | " << augmented;
        md << " |\n";
    };
    const auto opt_str = [](const std::optional<double>& v) {
        return v ? format_number(*v) : std::string("-");
    };
    stat_row("R2", format_number(fit.r2), aug ? format_number(aug->predicted.r2) : "");
    stat_row("adjusted R2", format_number(fit.r2_adj),
             aug ? format_number(aug->predicted.r2_adj) : "");
    stat_row("sigma2_hat", format_number(fit.sigma2_hat),
             aug ? format_number(aug->predicted.sigma2_hat) : "");
    stat_row("F", opt_str(fit.f_stat), aug ? opt_str(aug->predicted.f_stat) : "");
    {
        std::ostringstream base_df, aug_df;
        base_df << (fit.k - 1) << ", " << (fit.n - fit.k);
        if (aug) aug_df << (aug->predicted.k - 1) << ", "
                        << (aug->predicted.n_rows - aug->predicted.k);
        stat_row("df", base_df.str(), aug_df.str());
    }
    {
        std::ostringstream base_n, aug_n;
        base_n << fit.n;
        if (aug) aug_n << aug->predicted.n_rows;
        stat_row("n", base_n.str(), aug_n.str());
    }
    md << "\n";
}

void markdown_diagnostics(std::ostringstream& md, const DiagnosticsReport& d) {
    md << "## Collinearity diagnostics\n\n";
    if (!d.vifs.empty()) {
        md << "| regressor | VIF | verdict |\n";
        md << "| --- | --- | --- |\n";
        for (std::size_t i = 0; i < d.vifs.size(); ++i) {
            md << "| " << d.regressor_names[i] << " | " << format_number(d.vifs[i]) << " | "
               << to_string(d.vif_verdicts[i]) << (d.vif_above_4[i] ? " (above 4)" : "")
               << " |\n";
        }
        md << "\n";
    }
    md << "- condition number: " << format_number(d.cn) << " ("
       << (d.cn_scaling == CnScaling::unit_length ? "unit-length" : "raw")
       << " scaling), verdict: " << to_string(d.cn_verdict) << "\n";
    if (!d.eigenvalues.empty()) {
        md << "- eigenvalues:";
        for (double mu : d.eigenvalues) md << " " << format_number(mu);
        md << "\n";
    }
    if (d.corr_det) {
        md << "- correlation determinant: " << format_number(*d.corr_det) << "\n";
    }
    md << "- alarm: " << (d.alarming() ? "yes" : "no") << "\n\n";
}

void markdown_augmentation(std::ostringstream& md, const AugmentationSection& a,
                           const std::vector<std::string>& coef_names) {
    md << "## Replication\n\n";
    if (a.plan) {
        md << "- required copies: h = " << a.plan->h_required
           << " (alpha = " << format_number(a.plan->alpha) << ")\n";
        md << "\n| coefficient | bound | copies |\n| --- | --- | --- |\n";
        for (std::size_t i = 0; i < a.plan->selected.size(); ++i) {
            const std::size_t idx = a.plan->selected[i];
            md << "| " << (idx < coef_names.size() ? coef_names[idx] : std::to_string(idx))
               << " | " << format_number(a.plan->bounds[i]) << " | "
               << a.plan->h_per_coefficient[i] << " |\n";
        }
        md << "\n";
    }
    md << "- closed-form vs literal re-fit: max deviation "
       << format_number(a.deviations.max()) << "\n\n";
}

void markdown_perturbation(std::ostringstream& md, const PerturbationSummary& p) {
    md << "## Perturbation stability\n\n";
    md << "- perturbation: " << format_number(100.0 * p.pct) << "% of each column norm\n";
    md << "- trials: " << p.trials << " (" << p.failed << " failed), seed " << p.seed
       << ", " << to_string(p.distribution) << " noise\n";
    md << "- coefficient shift: mean " << format_number(p.mean) << "%, sd "
       << format_number(p.sd) << "%, min " << format_number(p.min) << "%, max "
       << format_number(p.max) << "%\n\n";
}

}  // namespace

void CsvSchema::validate() const {
    if (response.empty()) {
        throw Error("csv schema: response column name is empty");
    }
    if (regressors.empty()) {
        throw Error("csv schema: at least one regressor is required");
    }
    for (const std::string& name : regressors) {
        if (name == response) {
            throw Error("csv schema: response '" + response + "' also listed as regressor");
        }
    }
}

void YorkParams::validate() const {
    if (m < 1) {
        throw Error("york design: block multiplier m must be at least 1");
    }
}

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
    schema.validate();

    std::ifstream in(path);
    if (!in) {
        throw Error("load_csv: file not found: " + path);
    }

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;  // skip blank lines
        rows.push_back(split_line(line));
    }
    if (rows.empty()) {
        throw EmptyFileError("load_csv: " + path + " has no header row");
    }
    if (rows.size() == 1) {
        throw EmptyFileError("load_csv: " + path + " has no data rows");
    }

    const std::vector<std::string>& header = rows.front();
    const auto column_index = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw MissingColumnError(name);
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t y_col = column_index(schema.response);
    std::vector<std::size_t> x_cols;
    x_cols.reserve(schema.regressors.size());
    for (const std::string& name : schema.regressors) {
        x_cols.push_back(column_index(name));
    }

    // Parse every cell so malformed files fail loudly, not only the
    // referenced columns.
    const std::size_t n = rows.size() - 1;
    std::vector<Vector> parsed(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<std::string>& cells = rows[i + 1];
        if (cells.size() != header.size()) {
            throw ParseError("load_csv: expected " + std::to_string(header.size()) +
                                 " cells, found " + std::to_string(cells.size()),
                             i + 2, cells.size());
        }
        parsed[i].resize(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            parsed[i][c] = parse_cell(cells[c], i + 2, c + 1, header[c]);
        }
    }

    Vector y(n);
    Matrix regressors(n, x_cols.size());
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = parsed[i][y_col];
        for (std::size_t j = 0; j < x_cols.size(); ++j) {
            regressors(i, j) = parsed[i][x_cols[j]];
        }
    }
    return make_dataset(std::move(y), std::move(regressors), schema.regressors,
                        schema.add_intercept, schema.response);
}

Matrix york_design(const YorkParams& params) {
    params.validate();
    const std::size_t m = params.m;
    Matrix x(100 * m, 3);
    std::size_t row = 0;
    const auto block = [&](std::size_t height, double a, double b, double c) {
        for (std::size_t i = 0; i < height; ++i, ++row) {
            x(row, 0) = a;
            x(row, 1) = b;
            x(row, 2) = c;
        }
    };
    block(49 * m, 1.0, 0.0, 0.0);
    block(m, 1.0, 1.0, 0.0);
    block(m, 1.0, 0.0, 1.0);
    block(49 * m, 1.0, 1.0, 1.0);
    return x;
}

ReportFormat parse_report_format(const std::string& name) {
    if (name == "json") return ReportFormat::json;
    if (name == "markdown") return ReportFormat::markdown;
    throw Error("unknown report format: " + name + " (expected json or markdown)");
}

std::string export_report(const Report& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        ordered_json out;
        if (!report.header.empty()) {
            out["header"] = report.header;
        }
        if (report.fit) {
            out["fit"] = fit_to_json(*report.fit, report.stars);
        }
        if (report.diagnostics) {
            out["diagnostics"] = diagnostics_to_json(*report.diagnostics);
        }
        if (report.augmentation) {
            out["augmentation"] = augmentation_to_json(
                *report.augmentation, report.fit ? report.fit->names
                                                 : std::vector<std::string>{});
        }
        if (report.perturbation) {
            out["perturbation"] = perturbation_to_json(*report.perturbation);
        }
        return out.dump(2) + "\n";
    }

    std::ostringstream md;
    if (report.fit) {
        markdown_fit_table(md, report);
    }
    if (report.diagnostics) {
        markdown_diagnostics(md, *report.diagnostics);
    }
    if (report.augmentation) {
        markdown_augmentation(md, *report.augmentation,
                              report.fit ? report.fit->names : std::vector<std::string>{});
    }
    if (report.perturbation) {
        markdown_perturbation(md, *report.perturbation);
    }
    return md.str();
}

}  // namespace collinlab
