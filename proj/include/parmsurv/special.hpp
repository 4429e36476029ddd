#pragma once

// Special functions behind the gamma, log-normal and beta based survival
// kernels. Target absolute error is 1e-12 over the parameter ranges the
// likelihood visits; log variants keep relative accuracy in the tails.

namespace parmsurv::special {

// Regularized incomplete gamma: P(a, x) = γ(a, x) / Γ(a), Q = 1 - P.
double reg_lower_inc_gamma(double a, double x);
double reg_upper_inc_gamma(double a, double x);
double log_reg_lower_inc_gamma(double a, double x);
double log_reg_upper_inc_gamma(double a, double x);

// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double x, double a, double b);
// log I_x(a, b) where the caller supplies y = 1 - x computed without
// cancellation (the generalized F kernel evaluates both as logistic terms).
double log_reg_inc_beta(double x, double y, double a, double b);

double log_beta(double a, double b);

double normal_cdf(double z);
double normal_sf(double z);
double log_normal_sf(double z);
double log_normal_cdf(double z);
double normal_quantile(double p);

// log(1 + e^x) without overflow.
double softplus(double x);
// log(1 - e^x) for x <= 0.
double log1mexp(double x);

}  // namespace parmsurv::special
