#include "stratmc/normal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "stratmc/error.hpp"

namespace stratmc {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrt2Pi = 2.50662827463100050242;

// Acklam's rational approximation for the lower half, relative error ~1.2e-9.
double inv_cdf_initial(double q) {
  static constexpr std::array a{-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array b{-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
  static constexpr std::array c{-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array d{7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (q < p_low) {
    const double t = std::sqrt(-2.0 * std::log(q));
    return (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
           ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  }
  const double t = q - 0.5;
  const double r = t * t;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * t /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// q in (0, 0.5]; result <= 0.
double inv_cdf_lower(double q) {
  double x = inv_cdf_initial(q);
  // One Halley step on Phi(x) - q brings the error to roundoff level.
  const double e = normal_cdf(x) - q;
  const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double upper_tail(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

}  // namespace

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_inv_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw Error(ErrorCode::OutOfDomain, "normal_inv_cdf needs p in (0,1), got " + std::to_string(p));
  if (p <= 0.5) return inv_cdf_lower(p);
  return -inv_cdf_lower(1.0 - p);
}

double normal_interval_probability(double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  if (lo >= 0.0) return upper_tail(lo) - upper_tail(hi);
  if (hi <= 0.0) return normal_cdf(hi) - normal_cdf(lo);
  return 1.0 - normal_cdf(lo) - upper_tail(hi);
}

double normal_interval_quantile(double lo, double hi, double u) {
  double x;
  if (lo >= 0.0) {
    const double qlo = upper_tail(lo);
    const double width = qlo - upper_tail(hi);
    if (!(width > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double target = qlo - u * width;
    if (!(target > 0.0)) return hi;
    x = -normal_inv_cdf(std::min(target, 0.5));
  } else {
    const double plo = normal_cdf(lo);
    const double width = normal_interval_probability(lo, hi);
    if (!(width > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double target = plo + u * width;
    if (!(target > 0.0)) return lo;
    if (!(target < 1.0)) return hi;
    x = normal_inv_cdf(target);
  }
  return std::clamp(x, lo, hi);
}

}  // namespace stratmc
