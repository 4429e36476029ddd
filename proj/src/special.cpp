#include "parmsurv/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "parmsurv/errors.hpp"

namespace parmsurv::special {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

int iteration_cap(double scale) { return 10000 + static_cast<int>(60.0 * std::sqrt(scale)); }

void check_gamma_args(double a, double x) {
  if (!(a > 0) || !std::isfinite(a)) throw DomainError("incomplete gamma: shape must be positive, got " + std::to_string(a));
  if (!(x >= 0) || std::isnan(x)) throw DomainError("incomplete gamma: x must be nonnegative, got " + std::to_string(x));
}

// a log x - x - lgamma(a)
double gamma_log_prefactor(double a, double x) { return a * std::log(x) - x - std::lgamma(a); }

// log P(a, x) by the power series; valid (and fast) for x < a + 1.
double log_gamma_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  const int cap = iteration_cap(a);
  for (int n = 0; n < cap; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) return std::log(sum) + gamma_log_prefactor(a, x);
  }
  throw DomainError("incomplete gamma series did not converge (a=" + std::to_string(a) + ")");
}

// log Q(a, x) by Lentz's continued fraction; valid for x >= a + 1.
double log_gamma_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  const int cap = iteration_cap(a);
  for (int i = 1; i < cap; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return std::log(h) + gamma_log_prefactor(a, x);
  }
  throw DomainError("incomplete gamma continued fraction did not converge (a=" + std::to_string(a) + ")");
}

// Lentz evaluation of the incomplete beta continued fraction.
double beta_cf(double x, double a, double b) {
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  const int cap = iteration_cap(a + b);
  for (int m = 1; m < cap; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw DomainError("incomplete beta continued fraction did not converge");
}

}  // namespace

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double log1mexp(double x) {
  if (x > 0) throw DomainError("log1mexp: argument must be nonpositive");
  return x > -0.6931471805599453 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

double log_reg_lower_inc_gamma(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0) return -std::numeric_limits<double>::infinity();
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return log_gamma_series(a, x);
  return log1mexp(log_gamma_cf(a, x));
}

double log_reg_upper_inc_gamma(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0) return 0.0;
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  if (x < a + 1.0) return log1mexp(log_gamma_series(a, x));
  return log_gamma_cf(a, x);
}

double reg_lower_inc_gamma(double a, double x) { return std::exp(log_reg_lower_inc_gamma(a, x)); }
double reg_upper_inc_gamma(double a, double x) { return std::exp(log_reg_upper_inc_gamma(a, x)); }

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

double log_reg_inc_beta(double x, double y, double a, double b) {
  if (!(a > 0) || !(b > 0)) throw DomainError("incomplete beta: shape parameters must be positive");
  if (!(x >= 0 && x <= 1) || !(y >= 0 && y <= 1))
    throw DomainError("incomplete beta: x must lie in [0, 1], got " + std::to_string(x));
  if (x == 0) return -std::numeric_limits<double>::infinity();
  if (y == 0) return 0.0;
  const double log_front = a * std::log(x) + b * std::log(y) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) return log_front + std::log(beta_cf(x, a, b)) - std::log(a);
  return log1mexp(log_front + std::log(beta_cf(y, b, a)) - std::log(b));
}

double reg_inc_beta(double x, double a, double b) {
  return std::exp(log_reg_inc_beta(x, 1.0 - x, a, b));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double log_normal_sf(double z) {
  if (z < 30.0) return std::log(normal_sf(z));
  // Asymptotic expansion of the Mills ratio; truncation error < 1e-12 here.
  const double r = 1.0 / (z * z);
  const double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
  return -0.5 * z * z - std::log(z) - kLogSqrt2Pi + std::log(series);
}

double log_normal_cdf(double z) { return log_normal_sf(-z); }

double normal_quantile(double p) {
  if (!(p > 0 && p < 1)) throw DomainError("normal_quantile: p must lie in (0, 1)");
  // Acklam's rational approximation followed by one Halley refinement.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2 * M_PI) * std::exp(0.5 * x * x);
  return x - u / (1 + 0.5 * x * u);
}

}  // namespace parmsurv::special
