#include "collinlab/diagnostics.hpp"

#include <cmath>

#include "collinlab/errors.hpp"

namespace collinlab {

namespace {

constexpr double kPerfectFitTol = 1e-12;  // on 1 - R2 of the auxiliary fit
constexpr double kEigenZeroRtol = 1e-12;  // mu_min relative to mu_max

double column_mean(const Matrix& x, std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) s += x(i, j);
    return s / static_cast<double>(x.rows());
}

// Population variance, divisor n.
double column_variance(const Matrix& x, std::size_t j) {
    const double mean = column_mean(x, j);
    double s = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double d = x(i, j) - mean;
        s += d * d;
    }
    return s / static_cast<double>(x.rows());
}

// R2 of the auxiliary regression of design column j on the remaining
// columns. Centered total sum of squares when the dataset carries an
// intercept, uncentered otherwise.
double cn_from_eigenvalues(const Vector& mu) {
    const double mu_max = mu.front();
    const double mu_min = mu.back();
    if (mu_min <= kEigenZeroRtol * mu_max) {
        throw RankDeficientError("condition_number: smallest eigenvalue is numerically zero");
    }
    return std::sqrt(mu_max / mu_min);
}

double auxiliary_r2(const Dataset& data, std::size_t j) {
    Dataset aux;
    aux.y = data.X.column(j);
    aux.X = data.X.without_column(j);
    aux.has_intercept = data.has_intercept;
    aux.response_name = data.names.empty() ? "x" : data.names[j];
    for (std::size_t c = 0; c < data.k(); ++c) {
        if (c == j) continue;
        aux.names.push_back(data.names.empty() ? "c" + std::to_string(c) : data.names[c]);
    }
    return fit_ols(aux).r2;
}

}  // namespace

const char* to_string(CnVerdict v) {
    switch (v) {
        case CnVerdict::light: return "light";
        case CnVerdict::moderate: return "moderate";
        case CnVerdict::strong: return "strong";
    }
    return "?";
}

const char* to_string(VifVerdict v) {
    return v == VifVerdict::ok ? "ok" : "problematic";
}

double VarianceComponent::reconstructed() const {
    return sigma2_hat / (static_cast<double>(n) * var_xj * one_minus_r2j);
}

Vector vif(const Dataset& data) {
    data.validate();
    if (data.regressor_count() < 2) {
        throw DimensionMismatchError("vif: need at least two non-intercept regressors");
    }
    Vector out;
    out.reserve(data.regressor_count());
    for (std::size_t j = data.first_regressor(); j < data.k(); ++j) {
        const double r2j = auxiliary_r2(data, j);
        if (1.0 - r2j <= kPerfectFitTol) {
            throw PerfectFitError("vif: auxiliary regression for column " +
                                  (data.names.empty() ? std::to_string(j) : data.names[j]) +
                                  " fits exactly");
        }
        out.push_back(1.0 / (1.0 - r2j));
    }
    return out;
}

Vector gram_eigenvalues(const Matrix& x, CnScaling scaling) {
    const Matrix gram =
        scaling == CnScaling::unit_length ? gram_matrix(unit_length_scale(x)) : gram_matrix(x);
    return symmetric_eigenvalues(gram);
}

double condition_number(const Matrix& x, CnScaling scaling) {
    return cn_from_eigenvalues(gram_eigenvalues(x, scaling));
}

double condition_number(const Dataset& data, CnScaling scaling) {
    data.validate();
    return condition_number(data.X, scaling);
}

double correlation_determinant(const Dataset& data) {
    data.validate();
    const std::size_t p = data.regressor_count();
    if (p < 2) {
        throw DimensionMismatchError("correlation_determinant: need at least two regressors");
    }
    const std::size_t first = data.first_regressor();

    std::vector<double> means(p), sds(p);
    for (std::size_t a = 0; a < p; ++a) {
        means[a] = column_mean(data.X, first + a);
        const double var = column_variance(data.X, first + a);
        if (var <= 0.0) {
            throw ConstantColumnError("correlation_determinant: column " +
                                      data.names[first + a] + " is constant");
        }
        sds[a] = std::sqrt(var);
    }

    Matrix corr(p, p);
    const double n = static_cast<double>(data.n());
    for (std::size_t a = 0; a < p; ++a) {
        corr(a, a) = 1.0;
        for (std::size_t b = a + 1; b < p; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < data.n(); ++i) {
                s += (data.X(i, first + a) - means[a]) * (data.X(i, first + b) - means[b]);
            }
            const double r = s / (n * sds[a] * sds[b]);
            corr(a, b) = r;
            corr(b, a) = r;
        }
    }

    double det = 1.0;
    for (double mu : symmetric_eigenvalues(corr)) det *= mu;
    return det;
}

std::vector<VarianceComponent> variance_decomposition(const Dataset& data,
                                                      const FitResult& fit) {
    data.validate();
    if (fit.n != data.n() || fit.k != data.k()) {
        throw DimensionMismatchError("variance_decomposition: fit does not match dataset");
    }
    std::vector<VarianceComponent> out;
    for (std::size_t j = data.first_regressor(); j < data.k(); ++j) {
        VarianceComponent c;
        c.name = data.names[j];
        c.sigma2_hat = fit.sigma2_hat;
        c.n = data.n();
        c.var_xj = column_variance(data.X, j);
        c.one_minus_r2j = 1.0 - auxiliary_r2(data, j);
        out.push_back(std::move(c));
    }
    return out;
}

CnVerdict classify_cn(double cn) {
    if (cn < 20.0) return CnVerdict::light;
    if (cn <= 30.0) return CnVerdict::moderate;
    return CnVerdict::strong;
}

VifVerdict classify_vif(double vif_value) {
    return vif_value >= 10.0 ? VifVerdict::problematic : VifVerdict::ok;
}

bool DiagnosticsReport::alarming() const {
    if (cn_verdict == CnVerdict::strong) return true;
    for (VifVerdict v : vif_verdicts) {
        if (v == VifVerdict::problematic) return true;
    }
    return false;
}

DiagnosticsReport diagnose(const Dataset& data, const FitResult& fit, CnScaling scaling) {
    data.validate();
    DiagnosticsReport report;
    for (std::size_t j = data.first_regressor(); j < data.k(); ++j) {
        report.regressor_names.push_back(data.names[j]);
    }

    report.eigenvalues = gram_eigenvalues(data.X, scaling);
    report.cn = cn_from_eigenvalues(report.eigenvalues);
    report.cn_scaling = scaling;
    report.cn_verdict = classify_cn(report.cn);

    if (data.regressor_count() >= 2) {
        report.vifs = vif(data);
        for (double v : report.vifs) {
            report.vif_verdicts.push_back(classify_vif(v));
            report.vif_above_4.push_back(v >= 4.0);
        }
        report.corr_det = correlation_determinant(data);
    }
    if (data.has_intercept) {
        report.var_decomp = variance_decomposition(data, fit);
    }
    return report;
}

}  // namespace collinlab
