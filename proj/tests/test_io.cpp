#include <cmath>
#include <cstddef>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "collinlab/augmentation.hpp"
#include "collinlab/dataset.hpp"
#include "collinlab/diagnostics.hpp"
#include "collinlab/errors.hpp"
#include "collinlab/io.hpp"
#include "collinlab/perturbation.hpp"
#include "collinlab/regression.hpp"
#include "support/oracles.hpp"

using collinlab::CsvSchema;
using collinlab::Dataset;
using collinlab::Matrix;
using collinlab::Report;
using collinlab::ReportFormat;
using collinlab::Vector;
using testsupport::TempFile;

namespace {

CsvSchema schema_yx(const std::string& y, std::vector<std::string> x) {
    CsvSchema s;
    s.response = y;
    s.regressors = std::move(x);
    return s;
}

Report small_report() {
    const Dataset data = testsupport::random_dataset(77, 12, 3);
    const collinlab::FitResult fit = collinlab::fit_ols(data);

    Report report;
    report.header["subcommand"] = "diagnose";
    report.header["input"] = "memory";
    report.fit = fit;
    report.stars = collinlab::significance_stars(fit);
    report.diagnostics = collinlab::diagnose(data, fit);

    collinlab::AugmentationSection aug;
    aug.h = 2;
    aug.predicted = collinlab::predict_augmented(fit, 2);
    aug.predicted_stars = collinlab::significance_stars(
        aug.predicted.t_stats, aug.predicted.n_rows - aug.predicted.k);
    aug.deviations = collinlab::verify_identities(data, 2);
    report.augmentation = aug;

    collinlab::PerturbationConfig cfg;
    cfg.trials = 5;
    cfg.seed = 3;
    report.perturbation = collinlab::monte_carlo_stability(data, cfg);
    return report;
}

}  // namespace

TEST_CASE("csv loading selects the schema columns in the requested order") {
    TempFile file(
        "year,C,I,extra\n"
        "1936,10.5,2.0,0\n"
        "1937,11.25,2.5,0\n"
        "1938,9.5,3.0,0\n"
        "1939,12.0,3.25,0\n");
    const Dataset data = collinlab::load_csv(file.path(), schema_yx("C", {"I", "year"}));
    CHECK(data.n() == 4);
    CHECK(data.k() == 3);
    CHECK(data.names == std::vector<std::string>{"intercept", "I", "year"});
    CHECK(data.response_name == "C");
    CHECK(data.y == Vector{10.5, 11.25, 9.5, 12.0});
    CHECK(data.X.column(1) == Vector{2.0, 2.5, 3.0, 3.25});
    CHECK(data.X.column(2) == Vector{1936.0, 1937.0, 1938.0, 1939.0});
    CHECK(data.has_intercept);
    CHECK(data.X.column(0) == Vector{1.0, 1.0, 1.0, 1.0});
}

TEST_CASE("csv loading can skip the intercept column") {
    TempFile file("a,b\n1,2\n3,4\n");
    CsvSchema schema = schema_yx("a", {"b"});
    schema.add_intercept = false;
    const Dataset data = collinlab::load_csv(file.path(), schema);
    CHECK_FALSE(data.has_intercept);
    CHECK(data.k() == 1);
    CHECK(data.names == std::vector<std::string>{"b"});
}

TEST_CASE("csv loading tolerates blank lines and windows line endings") {
    TempFile file("a,b\r\n\r\n1,2\r\n\n3,4\r\n");
    const Dataset data = collinlab::load_csv(file.path(), schema_yx("a", {"b"}));
    CHECK(data.n() == 2);
    CHECK(data.y == Vector{1.0, 3.0});
}

TEST_CASE("a missing schema column is reported by name") {
    TempFile file("a,b\n1,2\n3,4\n");
    try {
        collinlab::load_csv(file.path(), schema_yx("a", {"nope"}));
        FAIL("expected MissingColumnError");
    } catch (const collinlab::MissingColumnError& e) {
        CHECK(e.column() == "nope");
    }
}

TEST_CASE("an unparsable cell is reported with its file row and column") {
    TempFile file("a,b\n1,2\n3,oops\n");
    try {
        collinlab::load_csv(file.path(), schema_yx("a", {"b"}));
        FAIL("expected ParseError");
    } catch (const collinlab::ParseError& e) {
        CHECK(e.row() == 3);     // file line, counting the header as line 1
        CHECK(e.column() == 2);  // 1-based column index
        CHECK(std::string(e.what()).find("oops") != std::string::npos);
        CHECK(std::string(e.what()).find('b') != std::string::npos);
    }
}

TEST_CASE("non-finite cells are rejected even in unreferenced columns") {
    TempFile file("a,b,c\n1,2,nan\n3,4,5\n");
    CHECK_THROWS_AS(collinlab::load_csv(file.path(), schema_yx("a", {"b"})),
                    collinlab::ParseError);
}

TEST_CASE("a row with the wrong cell count is rejected") {
    TempFile file("a,b\n1,2\n3\n");
    CHECK_THROWS_AS(collinlab::load_csv(file.path(), schema_yx("a", {"b"})),
                    collinlab::ParseError);
}

TEST_CASE("empty and header-only files are rejected") {
    TempFile empty("");
    CHECK_THROWS_AS(collinlab::load_csv(empty.path(), schema_yx("a", {"b"})),
                    collinlab::EmptyFileError);
    TempFile header_only("a,b\n");
    CHECK_THROWS_AS(collinlab::load_csv(header_only.path(), schema_yx("a", {"b"})),
                    collinlab::EmptyFileError);
}

TEST_CASE("a missing file raises an error naming the loader stage") {
    try {
        collinlab::load_csv("/nonexistent/collinlab.csv", schema_yx("a", {"b"}));
        FAIL("expected Error");
    } catch (const collinlab::Error& e) {
        CHECK(std::string(e.what()).find("load_csv: file not found") != std::string::npos);
    }
}

TEST_CASE("csv schema validation rejects empty and self-referential selections") {
    CsvSchema no_response = schema_yx("", {"x"});
    CHECK_THROWS_AS(no_response.validate(), collinlab::Error);
    CsvSchema no_regressors = schema_yx("y", {});
    CHECK_THROWS_AS(no_regressors.validate(), collinlab::Error);
    CsvSchema self = schema_yx("y", {"x", "y"});
    CHECK_THROWS_AS(self.validate(), collinlab::Error);
}

TEST_CASE("block design has the documented shape, sums, and column norms") {
    for (std::size_t m : {1, 3}) {
        const Matrix x = collinlab::york_design(collinlab::YorkParams{m});
        const double md = static_cast<double>(m);
        REQUIRE(x.rows() == 100 * m);
        REQUIRE(x.cols() == 3);

        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            s0 += x(i, 0);
            s1 += x(i, 1);
            s2 += x(i, 2);
        }
        CHECK(s0 == 100.0 * md);
        CHECK(s1 == 50.0 * md);
        CHECK(s2 == 50.0 * md);
        CHECK(std::abs(collinlab::euclidean_norm(x.column(0)) - std::sqrt(100.0 * md)) < 1e-12);
        CHECK(std::abs(collinlab::euclidean_norm(x.column(1)) - std::sqrt(50.0 * md)) < 1e-12);
        CHECK(std::abs(collinlab::euclidean_norm(x.column(2)) - std::sqrt(50.0 * md)) < 1e-12);
    }

    const Matrix x = collinlab::york_design(collinlab::YorkParams{1});
    CHECK(x(0, 0) == 1.0);
    CHECK(x(0, 1) == 0.0);   // first block: regressors off
    CHECK(x(49, 1) == 1.0);  // second block: first regressor on
    CHECK(x(49, 2) == 0.0);
    CHECK(x(50, 1) == 0.0);  // third block: second regressor on
    CHECK(x(50, 2) == 1.0);
    CHECK(x(99, 1) == 1.0);  // last block: both on
    CHECK(x(99, 2) == 1.0);
}

TEST_CASE("block design rejects a zero multiplier") {
    CHECK_THROWS_AS(collinlab::york_design(collinlab::YorkParams{0}), collinlab::Error);
}

TEST_CASE("report format names parse and unknown names are rejected") {
    CHECK(collinlab::parse_report_format("json") == ReportFormat::json);
    CHECK(collinlab::parse_report_format("markdown") == ReportFormat::markdown);
    CHECK_THROWS_AS(collinlab::parse_report_format("csv"), collinlab::Error);
}

TEST_CASE("json export round-trips every numeric value exactly") {
    const Report report = small_report();
    const std::string text = collinlab::export_report(report, ReportFormat::json);
    const nlohmann::json parsed = nlohmann::json::parse(text);

    REQUIRE(parsed.contains("fit"));
    const auto& fit = parsed["fit"];
    for (std::size_t j = 0; j < report.fit->k; ++j) {
        CHECK(fit["beta"][j].get<double>() == report.fit->beta[j]);
        CHECK(fit["se"][j].get<double>() == report.fit->se[j]);
        CHECK(fit["t"][j].get<double>() == report.fit->t_stats[j]);
    }
    CHECK(fit["r2"].get<double>() == report.fit->r2);
    CHECK(fit["sigma2_hat"].get<double>() == report.fit->sigma2_hat);
    CHECK(fit["f_stat"].get<double>() == *report.fit->f_stat);
    CHECK(fit["df"][0].get<std::size_t>() == report.fit->k - 1);
    CHECK(fit["df"][1].get<std::size_t>() == report.fit->n - report.fit->k);
    CHECK(fit["names"].size() == report.fit->k);
    CHECK(fit["stars"].size() == report.fit->k);

    REQUIRE(parsed.contains("diagnostics"));
    const auto& diag = parsed["diagnostics"];
    CHECK(diag["cn"].get<double>() == report.diagnostics->cn);
    CHECK(diag["cn_scaling"].get<std::string>() == "unit");
    CHECK(diag["vif"].size() == report.diagnostics->vifs.size());
    CHECK(diag["eigenvalues"].size() == report.diagnostics->eigenvalues.size());
    CHECK(diag["corr_det"].get<double>() == *report.diagnostics->corr_det);
    CHECK(diag["verdicts"].contains("cn"));
    CHECK(diag["verdicts"].contains("vif"));
    CHECK(diag["verdicts"]["alarm"].is_boolean());

    REQUIRE(parsed.contains("augmentation"));
    const auto& aug = parsed["augmentation"];
    CHECK(aug["h"].get<std::size_t>() == 2);
    CHECK(aug["predicted"]["sigma2_hat"].get<double>() ==
          report.augmentation->predicted.sigma2_hat);
    CHECK(aug["deviations"]["max"].get<double>() == report.augmentation->deviations.max());

    REQUIRE(parsed.contains("perturbation"));
    const auto& pert = parsed["perturbation"];
    CHECK(pert["trials"].get<std::size_t>() == 5);
    CHECK(pert["seed"].get<std::uint64_t>() == 3);
    CHECK(pert["noise"].get<std::string>() == "exponential");
    CHECK(pert["mean"].get<double>() == report.perturbation->mean);
    CHECK(pert["failed"].get<std::size_t>() == 0);
}

TEST_CASE("json export is byte-identical across repeated serialization") {
    const Report report = small_report();
    const std::string a = collinlab::export_report(report, ReportFormat::json);
    const std::string b = collinlab::export_report(report, ReportFormat::json);
    CHECK(a == b);
}

TEST_CASE("json export omits sections that were not computed") {
    Report report;
    report.header["subcommand"] = "york";
    const nlohmann::json parsed =
        nlohmann::json::parse(collinlab::export_report(report, ReportFormat::json));
    CHECK(parsed.contains("header"));
    CHECK_FALSE(parsed.contains("fit"));
    CHECK_FALSE(parsed.contains("diagnostics"));
    CHECK_FALSE(parsed.contains("augmentation"));
    CHECK_FALSE(parsed.contains("perturbation"));
}

TEST_CASE("markdown export renders estimates with stars and errors beneath") {
    collinlab::FitResult fit;
    fit.n = 14;
    fit.k = 1;
    fit.has_intercept = true;
    fit.names = {"intercept"};
    fit.beta = {18.7021};
    fit.se = {6.84544};
    fit.cov = Matrix(1, 1, 6.84544 * 6.84544);
    fit.t_stats = {2.731911};
    fit.sigma2_hat = 36.7236;
    fit.r2 = 0.0;

    Report report;
    report.fit = fit;
    report.stars = {"***"};
    const std::string md = collinlab::export_report(report, ReportFormat::markdown);
    CHECK(md.find("## Model") != std::string::npos);
    CHECK(md.find("| coefficient |") != std::string::npos);
    CHECK(md.find("18.7021***") != std::string::npos);
    CHECK(md.find("(6.84544)") != std::string::npos);
    CHECK(md.find("36.7236") != std::string::npos);
    CHECK(md.find("| F | - |") != std::string::npos);  // no F statistic for this fit
}

TEST_CASE("markdown export includes every computed section") {
    const Report report = small_report();
    const std::string md = collinlab::export_report(report, ReportFormat::markdown);
    CHECK(md.find("## Model") != std::string::npos);
    CHECK(md.find("replicated (h=2)") != std::string::npos);
    CHECK(md.find("## Collinearity diagnostics") != std::string::npos);
    CHECK(md.find("condition number") != std::string::npos);
    CHECK(md.find("## Replication") != std::string::npos);
    CHECK(md.find("## Perturbation stability") != std::string::npos);
    CHECK(md.find("seed 3") != std::string::npos);
    CHECK(md.find("exponential noise") != std::string::npos);
}
