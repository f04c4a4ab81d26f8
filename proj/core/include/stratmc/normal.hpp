#pragma once

namespace stratmc {

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal distribution function, absolute error below 1e-15.
double normal_cdf(double x);

/// Inverse of normal_cdf on (0, 1). Throws OutOfDomain outside the open interval.
double normal_inv_cdf(double p);

/// P(lo <= Z <= hi) for standard normal Z, computed in whichever tail keeps
/// the difference accurate. Either bound may be infinite.
double normal_interval_probability(double lo, double hi);

/// The point x in [lo, hi] with P(lo <= Z <= x) = u * P(lo <= Z <= hi).
/// Returns NaN when the interval probability underflows to zero.
double normal_interval_quantile(double lo, double hi, double u);

}  // namespace stratmc
