#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "collinlab/augmentation.hpp"
#include "collinlab/dataset.hpp"
#include "collinlab/diagnostics.hpp"
#include "collinlab/linalg.hpp"
#include "collinlab/perturbation.hpp"
#include "collinlab/regression.hpp"

namespace collinlab {

/// Column selection applied to a CSV file.
///
/// Dialect: comma-separated, first row is the header, "." decimal separator,
/// no quoting and no locale handling.
struct CsvSchema {
    std::string response;
    std::vector<std::string> regressors;
    bool add_intercept = true;

    void validate() const;
};

/// Parameters of the built-in ill-conditioned block design: 100*m rows over
/// three 0/1 columns, stacked as 49m rows (1,0,0), m rows (1,1,0),
/// m rows (1,0,1), 49m rows (1,1,1).
struct YorkParams {
    std::size_t m = 1;

    void validate() const;
};

Dataset load_csv(const std::string& path, const CsvSchema& schema);

Matrix york_design(const YorkParams& params);

/// Augmentation results bundled for reporting.
struct AugmentationSection {
    std::size_t h = 1;
    std::optional<AugmentationPlan> plan;  ///< present when h was derived from a bound
    AugmentedPrediction predicted;
    std::vector<std::string> predicted_stars;
    IdentityDeviations deviations;
};

/// Combined result of a diagnose/augment/perturb run.  Sections that were not
/// computed stay empty and are omitted from the serialized output.
struct Report {
    nlohmann::ordered_json header;  ///< invocation echo (flags, input path)
    std::optional<FitResult> fit;
    std::vector<std::string> stars;
    std::optional<DiagnosticsReport> diagnostics;
    std::optional<AugmentationSection> augmentation;
    std::optional<PerturbationSummary> perturbation;
};

enum class ReportFormat { json, markdown };

ReportFormat parse_report_format(const std::string& name);

/// Serializes a report.  JSON uses a stable schema with shortest round-trip
/// number formatting; markdown renders the regression table (coefficient with
/// stars, standard error in parentheses beneath, then R², adjusted R²,
/// sigma^2, F) plus diagnostics and perturbation sections.
std::string export_report(const Report& report, ReportFormat format);

}  // namespace collinlab
