#pragma once

#include <optional>
#include <string>
#include <vector>

#include "collinlab/dataset.hpp"
#include "collinlab/regression.hpp"

namespace collinlab {

enum class CnScaling { unit_length, raw };

enum class CnVerdict { light, moderate, strong };
enum class VifVerdict { ok, problematic };

const char* to_string(CnVerdict v);
const char* to_string(VifVerdict v);

/// Factors of var(beta_j) = sigma2 / (n * var(X_j) * (1 - R2_j)) for one
/// non-intercept coefficient.
struct VarianceComponent {
    std::string name;
    double sigma2_hat = 0.0;
    std::size_t n = 0;
    double var_xj = 0.0;          // population variance (divisor n)
    double one_minus_r2j = 0.0;
    double reconstructed() const;
};

struct DiagnosticsReport {
    std::vector<std::string> regressor_names;  // non-intercept columns
    Vector vifs;                               // empty when fewer than 2 regressors
    double cn = 0.0;
    CnScaling cn_scaling = CnScaling::unit_length;
    Vector eigenvalues;                        // of the scaled X^t X, descending
    std::optional<double> corr_det;            // needs >= 2 non-constant regressors
    std::vector<VarianceComponent> var_decomp;
    CnVerdict cn_verdict = CnVerdict::light;
    std::vector<VifVerdict> vif_verdicts;
    std::vector<bool> vif_above_4;             // secondary screening flag

    /// True when the condition number signals strong collinearity or any
    /// VIF is problematic.
    bool alarming() const;
};

/// One VIF per non-intercept regressor, from the auxiliary regression of
/// each regressor on all remaining design columns.
Vector vif(const Dataset& data);

/// Eigenvalues of X^t X after the requested column scaling, descending.
Vector gram_eigenvalues(const Matrix& x, CnScaling scaling = CnScaling::unit_length);

/// sqrt(mu_max / mu_min) of X^t X, by default after unit-length column
/// scaling.
double condition_number(const Dataset& data, CnScaling scaling = CnScaling::unit_length);
double condition_number(const Matrix& x, CnScaling scaling = CnScaling::unit_length);

/// Determinant of the Pearson correlation matrix of the non-intercept
/// regressors.
double correlation_determinant(const Dataset& data);

std::vector<VarianceComponent> variance_decomposition(const Dataset& data,
                                                      const FitResult& fit);

/// Severity thresholds: CN < 20 light, 20..30 moderate, > 30 strong;
/// VIF >= 10 problematic, with a secondary flag at 4.
CnVerdict classify_cn(double cn);
VifVerdict classify_vif(double vif_value);

/// Runs every diagnostic that the dataset shape permits and classifies the
/// results.
DiagnosticsReport diagnose(const Dataset& data, const FitResult& fit,
                           CnScaling scaling = CnScaling::unit_length);

}  // namespace collinlab
