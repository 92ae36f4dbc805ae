#pragma once

#include "jointsup/log_prob.hpp"

namespace jointsup::gauss {

/// Standard normal density (2 pi)^{-1/2} exp(-x^2 / 2).
double norm_pdf(double x);

/// Standard normal distribution function P(N <= x).
double norm_cdf(double x);

/// Standard normal survival function P(N > x), via erfc so that the upper
/// tail keeps full relative precision until the result leaves the normal
/// double range (x ~ 37.5). Accepts +-inf.
double norm_sf(double x);

/// log P(N > x) for any finite x; stays accurate far beyond the point where
/// `norm_sf` underflows.
LogProb log_norm_sf(double x);

/// log P(N <= x).
inline LogProb log_norm_cdf(double x) { return log_norm_sf(-x); }

/// Leading Mills-ratio term pdf(x) / x of the upper tail. Requires x > 0.
double norm_sf_asym(double x);

/// Inverse Mills ratio pdf(x) / P(N > x), accurate for all finite x.
double inv_mills(double x);

/// Standardized bivariate normal with correlation `rho`. `s` and `t` may be
/// +-inf, which reduces the query to a marginal.
struct BvnQuery {
    double rho = 0.0;
    double s = 0.0;
    double t = 0.0;
};

/// Correlations within this distance of +-1 use the degenerate closed forms.
inline constexpr double kDegenerateCorrelation = 1e-12;

/// P(X <= s, Y <= t). Absolute error below 1e-14.
double bvn_cdf(const BvnQuery& q);

/// P(X > s, Y > t). Absolute error below 1e-14; small values are refined
/// through `log_bvn_sf` so that they also carry relative precision.
double bvn_sf(const BvnQuery& q);

/// log P(X > s, Y > t) by adaptive quadrature of
///   int_s^inf pdf(x) P(N > (t - rho x) / sqrt(1 - rho^2)) dx
/// scaled by the integrand's peak. Requires finite s, t and |rho| < 1 - 1e-12.
LogProb log_bvn_sf(const BvnQuery& q);

}  // namespace jointsup::gauss
