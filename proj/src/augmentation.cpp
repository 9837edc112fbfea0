#include "collinlab/augmentation.hpp"

#include <algorithm>
#include <cmath>

#include "collinlab/distributions.hpp"
#include "collinlab/errors.hpp"

namespace collinlab {

namespace {

double relative_deviation(double actual, double expected) {
    const double scale = std::max(std::abs(expected), 1e-300);
    return std::abs(actual - expected) / scale;
}

}  // namespace

double IdentityDeviations::max() const {
    double m = beta;
    for (double v : {scr, sct, r2, r2_adj, sigma2_hat, cov, t_stats, f_stat}) {
        m = std::max(m, v);
    }
    return m;
}

Dataset replicate_sample(const Dataset& data, std::size_t h) {
    data.validate();
    if (h == 0) throw Error("replicate_sample: h must be >= 1");
    const std::size_t n = data.n(), k = data.k();

    Dataset out;
    out.names = data.names;
    out.has_intercept = data.has_intercept;
    out.response_name = data.response_name;
    out.X = Matrix(n * h, k);
    out.y.resize(n * h);
    for (std::size_t copy = 0; copy < h; ++copy) {
        for (std::size_t i = 0; i < n; ++i) {
            out.y[copy * n + i] = data.y[i];
            for (std::size_t j = 0; j < k; ++j) out.X(copy * n + i, j) = data.X(i, j);
        }
    }
    return out;
}

AugmentedPrediction predict_augmented(const FitResult& fit, std::size_t h) {
    if (h == 0) throw Error("predict_augmented: h must be >= 1");
    const double n = static_cast<double>(fit.n);
    const double k = static_cast<double>(fit.k);
    const double hd = static_cast<double>(h);
    const double base_df = n - k;
    const double aug_df = n * hd - k;

    AugmentedPrediction p;
    p.h = h;
    p.beta = fit.beta;
    p.r2 = fit.r2;
    p.k = fit.k;
    p.n_rows = fit.n * h;
    p.scr = hd * fit.scr;
    p.sct = hd * fit.sct;
    p.sigma2_hat = hd * base_df / aug_df * fit.sigma2_hat;
    p.r2_adj = 1.0 - (1.0 - fit.r2) * (n * hd - 1.0) / aug_df;

    const double cov_factor = base_df / aug_df;
    const double t_factor = std::sqrt(aug_df / base_df);
    p.se.resize(fit.k);
    p.t_stats.resize(fit.k);
    for (std::size_t j = 0; j < fit.k; ++j) {
        p.se[j] = fit.se[j] * std::sqrt(cov_factor);
        p.t_stats[j] = fit.t_stats[j] * t_factor;
    }
    if (fit.f_stat) {
        p.f_stat = *fit.f_stat * aug_df / base_df;
    }
    return p;
}

IdentityDeviations verify_identities(const Dataset& data, std::size_t h) {
    if (h < 2) throw Error("verify_identities: h must be >= 2");
    const FitResult base = fit_ols(data);
    const AugmentedPrediction pred = predict_augmented(base, h);
    const FitResult refit = fit_ols(replicate_sample(data, h));

    IdentityDeviations dev;
    double t_scale = 1e-300;
    for (std::size_t j = 0; j < base.k; ++j) {
        dev.beta = std::max(dev.beta, std::abs(refit.beta[j] - pred.beta[j]));
        t_scale = std::max(t_scale, std::abs(pred.t_stats[j]));
    }
    for (std::size_t j = 0; j < base.k; ++j) {
        dev.t_stats =
            std::max(dev.t_stats, std::abs(refit.t_stats[j] - pred.t_stats[j]) / t_scale);
    }
    dev.scr = relative_deviation(refit.scr, pred.scr);
    dev.sct = relative_deviation(refit.sct, pred.sct);
    dev.r2 = relative_deviation(refit.r2, pred.r2);
    dev.r2_adj = relative_deviation(refit.r2_adj, pred.r2_adj);
    dev.sigma2_hat = relative_deviation(refit.sigma2_hat, pred.sigma2_hat);

    // Normwise comparison: off-diagonal covariance entries may cross zero.
    const double cov_factor =
        static_cast<double>(base.n - base.k) / static_cast<double>(base.n * h - base.k);
    double cov_scale = 1e-300;
    for (std::size_t i = 0; i < base.k; ++i) {
        for (std::size_t j = 0; j < base.k; ++j) {
            cov_scale = std::max(cov_scale, std::abs(cov_factor * base.cov(i, j)));
        }
    }
    for (std::size_t i = 0; i < base.k; ++i) {
        for (std::size_t j = 0; j < base.k; ++j) {
            const double expected = cov_factor * base.cov(i, j);
            dev.cov = std::max(dev.cov, std::abs(refit.cov(i, j) - expected) / cov_scale);
        }
    }
    if (base.f_stat && refit.f_stat && pred.f_stat) {
        dev.f_stat = relative_deviation(*refit.f_stat, *pred.f_stat);
    }
    return dev;
}

AugmentationPlan required_replication(const FitResult& fit, double alpha,
                                      bool include_intercept) {
    if (alpha <= 0.0 || alpha >= 1.0) throw Error("required_replication: alpha outside (0, 1)");

    AugmentationPlan plan;
    plan.alpha = alpha;
    // The tables this mirrors were computed with 1.96 rather than the exact
    // normal quantile 1.95996...; keep that value for the default alpha.
    plan.t_critical_approx =
        alpha == 0.05 ? 1.96 : normal_quantile(1.0 - alpha / 2.0);

    const double n = static_cast<double>(fit.n);
    const double k = static_cast<double>(fit.k);
    const std::size_t first = (fit.has_intercept && !include_intercept) ? 1 : 0;

    constexpr double kTinyT = 1e-12;
    for (std::size_t j = first; j < fit.k; ++j) {
        if (fit.t_stats[j] <= kTinyT) {
            plan.excluded.push_back(j);
            continue;
        }
        const double ratio = plan.t_critical_approx / fit.t_stats[j];
        const double equation_bound = (ratio * ratio * (n - k) + k) / n;
        // equation_bound < 1 iff the coefficient already rejects at the
        // approximate critical value.
        const double bound = equation_bound < 1.0 ? equation_bound : equation_bound + 1.0;
        plan.selected.push_back(j);
        plan.bounds.push_back(bound);
        plan.h_per_coefficient.push_back(
            static_cast<std::size_t>(std::max(1.0, std::ceil(bound))));
    }
    if (plan.selected.empty()) {
        std::string who;
        for (std::size_t idx : plan.excluded) {
            if (!who.empty()) who += ", ";
            who += idx < fit.names.size() ? fit.names[idx] : std::to_string(idx);
        }
        throw DegenerateTError("required_replication: zero t statistic for " + who +
                               "; the replication bound is undefined");
    }
    plan.h_required = *std::max_element(plan.h_per_coefficient.begin(),
                                        plan.h_per_coefficient.end());
    return plan;
}

}  // namespace collinlab
