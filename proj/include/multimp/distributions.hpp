#pragma once

#include "multimp/rng.hpp"

namespace multimp {

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation (Lentz), accurate to ~1e-14.
double regularized_incomplete_beta(double a, double b, double x);

/// Standard normal quantile, accurate to near machine precision.
double std_normal_quantile(double p);

/// Student-t quantile for real df > 0; df = +inf falls back to the normal
/// quantile, as do df > 1e8 where the difference is below 1e-8.
double t_quantile(double p, double df);

double draw_std_normal(RngStream& rng);

/// Gamma(shape, 1) draw via Marsaglia-Tsang squeeze.
double draw_gamma(double shape, RngStream& rng);

/// Chi-square draw, df >= 1.
double draw_chi_square(double df, RngStream& rng);

}  // namespace multimp
