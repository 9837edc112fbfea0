#pragma once

#include <optional>
#include <string>
#include <vector>

#include "collinlab/dataset.hpp"
#include "collinlab/linalg.hpp"

namespace collinlab {

/// OLS fit with the full statistic set reported by the summary tables.
/// t statistics are absolute values; f_stat is empty for an intercept-only
/// model (the global test has no numerator degrees of freedom there).
struct FitResult {
    Vector beta;
    Vector se;
    Matrix cov;             // k x k, sigma2_hat * (X^t X)^{-1}
    double sigma2_hat = 0.0;
    double scr = 0.0;       // residual sum of squares
    double sct = 0.0;       // total sum of squares (centered when intercept present)
    double r2 = 0.0;
    double r2_adj = 0.0;
    Vector t_stats;
    std::optional<double> f_stat;
    std::size_t n = 0;
    std::size_t k = 0;
    bool has_intercept = true;
    std::vector<std::string> names;
};

struct SignificanceConfig {
    // Confidence levels in increasing order; stars are awarded per level.
    std::vector<double> levels = {0.90, 0.95, 0.99};

    void validate() const;
};

FitResult fit_ols(const Dataset& data);

/// Star label per coefficient: the highest configured level whose two-sided
/// critical value t_{df}(1 - (1-level)/2) is exceeded, rendered as one
/// star per level ("", "*", "**", ...).
std::vector<std::string> significance_stars(const Vector& abs_t, std::size_t df_resid,
                                            const SignificanceConfig& cfg = {});
std::vector<std::string> significance_stars(const FitResult& fit,
                                            const SignificanceConfig& cfg = {});

}  // namespace collinlab
