#pragma once

namespace osfsu::stats {

/// Regularized upper incomplete gamma function Q(a, x) for a > 0, x >= 0.
/// Series expansion for x < a + 1, Lentz continued fraction otherwise.
double regularized_gamma_q(double a, double x);

/// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_sf(double x, double dof);

/// Two-sided tail probability 2 * (1 - Phi(|stat|)) of the standard normal.
double normal_two_sided_p(double stat);

/// Upper quantile z with P(Z > z) = tail_prob, found by bisection on the CDF.
double normal_upper_quantile(double tail_prob);

}  // namespace osfsu::stats
