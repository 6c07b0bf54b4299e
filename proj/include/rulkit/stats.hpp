#pragma once

namespace rulkit::stats {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile (inverse CDF) for p in (0,1).
/// Rational initial guess refined with one Halley step; the refined
/// result is accurate to well below 1e-9 over the whole open interval.
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// Chi-square quantile: the x with P(dof/2, x/2) = p, for p in (0,1).
double chi_square_quantile(double p, int dof);

} // namespace rulkit::stats
