#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "omlad/core.hpp"

namespace omlad {

namespace detail {

inline void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1)");
  }
}

// Acklam's rational approximation of the standard normal quantile
// (relative error below 1.15e-9 over the full range).
inline double acklam_quantile(double p) {
  constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                          1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                          6.680131188771972e+01,  -1.328068155288572e+01};
  constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                          -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                          3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

/// Phi^{-1}(p) for 0 < p < 1: rational approximation refined with one Halley
/// step against the erfc-based CDF. Lower-tail arguments keep full relative
/// accuracy; callers wanting an upper quantile should pass the tail mass.
inline double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "probability must lie in (0, 1)");
  }
  if (p > 0.5) {
    return -inverse_normal_cdf(1.0 - p);
  }
  double x = detail::acklam_quantile(p);
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

/// (1 - alpha)-quantile of |N(0, 1)|, i.e. Phi^{-1}(1 - alpha / 2).
inline double half_normal_quantile(double alpha) {
  detail::require_alpha(alpha);
  return -inverse_normal_cdf(0.5 * alpha);
}

/// (1 - alpha)-quantile of the standard Gumbel law: -log(-log(1 - alpha)).
inline double gumbel_quantile(double alpha) {
  detail::require_alpha(alpha);
  return -std::log(-std::log1p(-alpha));
}

/// Normalizing constants for the maximum of n half-normal variables:
/// a_n = sqrt(2 log 2n), b_n = a_n^2 - log(4 pi log 2n) / 2.
struct GumbelConstants {
  std::int64_t n = 1;
  double a = 0.0;
  double b = 0.0;

  static GumbelConstants for_n(std::int64_t n) {
    if (n < 1) {
      throw Error(ErrorCode::NTooSmall, "Gumbel constants need n >= 1");
    }
    const double log2n = std::log(2.0 * static_cast<double>(n));
    GumbelConstants g;
    g.n = n;
    g.a = std::sqrt(2.0 * log2n);
    g.b = g.a * g.a - 0.5 * std::log(4.0 * std::numbers::pi * log2n);
    return g;
  }
};

inline double tau_mean_sigma(double mu, double sigma, double c) {
  return std::max(mu + c * sigma, kEpsilonFloor);
}

inline double tau_gaussian(double alpha, double sigma_hat) {
  return std::max(half_normal_quantile(alpha) * sigma_hat, kEpsilonFloor);
}

inline double tau_gumbel(double alpha, double sigma_hat, std::int64_t n) {
  detail::require_alpha(alpha);
  if (n < 2) {
    throw Error(ErrorCode::NTooSmall, "Gumbel threshold needs n >= 2");
  }
  const GumbelConstants g = GumbelConstants::for_n(n);
  return std::max((gumbel_quantile(alpha) + g.b) * sigma_hat / g.a, kEpsilonFloor);
}

}  // namespace omlad
