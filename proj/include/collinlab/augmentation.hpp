#pragma once

// Sample replication: stacking h identical copies of (y, X), the closed-form
// scaling laws for every fitted statistic, verification of those laws
// against a literal re-fit, and the replication count needed to make every
// coefficient individually significant.

#include <cstddef>
#include <optional>
#include <vector>

#include "collinlab/dataset.hpp"
#include "collinlab/regression.hpp"

namespace collinlab {

/// Closed-form statistics of the fit on h stacked copies of the base
/// sample. h counts total copies, so h = 1 is the base fit itself.
struct AugmentedPrediction {
    std::size_t h = 1;
    Vector beta;            // unchanged
    double r2 = 0.0;        // unchanged
    double r2_adj = 0.0;
    double sigma2_hat = 0.0;
    double scr = 0.0;
    double sct = 0.0;
    Vector se;
    Vector t_stats;
    std::optional<double> f_stat;
    std::size_t n_rows = 0;  // n * h
    std::size_t k = 0;
};

/// Worst relative (or absolute, for vectors) disagreement between the
/// closed-form prediction and a literal re-fit on the replicated sample.
struct IdentityDeviations {
    double beta = 0.0;       // max absolute component difference
    double scr = 0.0;        // relative, against h * SCR
    double sct = 0.0;        // relative, against h * SCT
    double r2 = 0.0;
    double r2_adj = 0.0;
    double sigma2_hat = 0.0;
    double cov = 0.0;        // max relative difference over entries
    double t_stats = 0.0;
    double f_stat = 0.0;
    double max() const;
};

/// Replication plan from the significance bound. Bounds are expressed in
/// total copies; h_required is the max of their ceilings over the selected
/// coefficients.
struct AugmentationPlan {
    std::vector<std::size_t> selected;   // coefficient indices the bound covers
    Vector bounds;                       // one per selected coefficient
    std::vector<std::size_t> h_per_coefficient;
    std::size_t h_required = 1;
    double alpha = 0.05;
    double t_critical_approx = 1.96;
    std::vector<std::size_t> excluded;   // zero-t coefficients dropped with a warning
};

/// The base block stacked h times; h = 1 returns a copy of the input.
Dataset replicate_sample(const Dataset& data, std::size_t h);

/// Closed-form fit statistics after h-fold replication: beta, R2, VIF-like
/// quantities are unchanged; sigma2 picks up h(n-k)/(nh-k); the covariance
/// shrinks by (n-k)/(nh-k); t grows by sqrt((nh-k)/(n-k)); F by (nh-k)/(n-k).
AugmentedPrediction predict_augmented(const FitResult& fit, std::size_t h);

/// Fits OLS on the literally replicated sample and reports how far the
/// re-fit deviates from the closed-form prediction.
IdentityDeviations verify_identities(const Dataset& data, std::size_t h);

/// Replication count needed so that every selected coefficient rejects the
/// individual nullity test, using the normal approximation to the critical
/// value (1.96 at alpha = 0.05).
///
/// A coefficient already above the approximate critical value needs no
/// replication (bound below 1, h_i = 1). Otherwise the equation's bound is
/// raised by one extra copy: the normal approximation understates the
/// finite-sample critical value, and one copy more than covers the gap.
/// This also reproduces the replication counts the reference tables were
/// computed with.
AugmentationPlan required_replication(const FitResult& fit, double alpha = 0.05,
                                      bool include_intercept = false);

}  // namespace collinlab
