#include "collinlab/regression.hpp"

#include <cmath>

#include "collinlab/distributions.hpp"
#include "collinlab/errors.hpp"

namespace collinlab {

void SignificanceConfig::validate() const {
    if (levels.empty()) throw Error("significance: at least one level required");
    double prev = 0.0;
    for (double level : levels) {
        if (level <= 0.0 || level >= 1.0 || level <= prev) {
            throw Error("significance: levels must be strictly increasing in (0, 1)");
        }
        prev = level;
    }
}

FitResult fit_ols(const Dataset& data) {
    data.validate();
    const std::size_t n = data.n(), k = data.k();
    if (n <= k) {
        throw TooFewObservationsError("fit_ols: need n > k (got n=" + std::to_string(n) +
                                      ", k=" + std::to_string(k) + ")");
    }

    const LeastSquaresResult ls = least_squares_qr(data.X, data.y);

    FitResult fit;
    fit.beta = ls.beta;
    fit.n = n;
    fit.k = k;
    fit.has_intercept = data.has_intercept;
    fit.names = data.names;

    const Vector fitted = data.X * ls.beta;
    double scr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = data.y[i] - fitted[i];
        scr += r * r;
    }
    fit.scr = scr;

    double sct = 0.0;
    if (data.has_intercept) {
        double mean = 0.0;
        for (double v : data.y) mean += v;
        mean /= static_cast<double>(n);
        for (double v : data.y) sct += (v - mean) * (v - mean);
    } else {
        for (double v : data.y) sct += v * v;
    }
    fit.sct = sct;

    const double df_resid = static_cast<double>(n - k);
    fit.sigma2_hat = scr / df_resid;

    fit.cov = gram_inverse_from_r(ls.r);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) fit.cov(i, j) *= fit.sigma2_hat;
    }
    fit.se.resize(k);
    fit.t_stats.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        fit.se[j] = std::sqrt(fit.cov(j, j));
        fit.t_stats[j] = std::abs(fit.beta[j] / fit.se[j]);
    }

    const bool intercept_only = data.has_intercept && k == 1;
    if (intercept_only || sct <= 0.0) {
        // Degenerate cases: no regressors beyond the intercept, or a constant
        // response. R^2 is defined as 0 and the global F test is skipped.
        fit.r2 = 0.0;
        fit.r2_adj = 0.0;
        fit.f_stat = std::nullopt;
        return fit;
    }

    fit.r2 = 1.0 - scr / sct;
    fit.r2_adj = 1.0 - (1.0 - fit.r2) * static_cast<double>(n - 1) / df_resid;
    const double df_model = static_cast<double>(k - 1);
    if (df_model > 0.0) {
        fit.f_stat = (fit.r2 / df_model) / ((1.0 - fit.r2) / df_resid);
    } else {
        fit.f_stat = std::nullopt;  // no-intercept single-regressor edge
    }
    return fit;
}

std::vector<std::string> significance_stars(const Vector& abs_t, std::size_t df_resid,
                                            const SignificanceConfig& cfg) {
    cfg.validate();
    const double df = static_cast<double>(df_resid);
    std::vector<double> criticals;
    criticals.reserve(cfg.levels.size());
    for (double level : cfg.levels) {
        criticals.push_back(student_t_quantile(1.0 - (1.0 - level) / 2.0, df));
    }
    std::vector<std::string> stars(abs_t.size());
    for (std::size_t j = 0; j < abs_t.size(); ++j) {
        std::size_t count = 0;
        for (std::size_t s = 0; s < criticals.size(); ++s) {
            if (abs_t[j] > criticals[s]) count = s + 1;
        }
        stars[j] = std::string(count, '*');
    }
    return stars;
}

std::vector<std::string> significance_stars(const FitResult& fit,
                                            const SignificanceConfig& cfg) {
    return significance_stars(fit.t_stats, fit.n - fit.k, cfg);
}

}  // namespace collinlab
