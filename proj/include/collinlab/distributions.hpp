#pragma once

// Student t and normal distribution helpers used by the significance tests
// and the replication bound.

#include <cstddef>

namespace collinlab {

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation. Requires a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

/// CDF of the Student t distribution with df degrees of freedom.
double student_t_cdf(double t, double df);

/// Quantile q with student_t_cdf(q, df) = p, accurate to better than 1e-8.
/// Requires 0 < p < 1 and df >= 1.
double student_t_quantile(double p, double df);

/// Standard normal quantile (inverse CDF), 0 < p < 1.
double normal_quantile(double p);

}  // namespace collinlab
