#include "parmsurv/numdiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace parmsurv {

namespace {
const double kCbrtEps = std::cbrt(std::numeric_limits<double>::epsilon());
const double kQrtEps = std::sqrt(std::sqrt(std::numeric_limits<double>::epsilon()));
}  // namespace

double gradient_step(double x) { return kCbrtEps * std::max(1.0, std::fabs(x)); }
double hessian_step(double x) { return kQrtEps * std::max(1.0, std::fabs(x)); }

Eigen::VectorXd central_gradient(const Objective& f, const Eigen::VectorXd& x) {
  const auto k = x.size();
  Eigen::VectorXd g(k);
  Eigen::VectorXd xp = x;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double h = gradient_step(x[j]);
    // Use the exactly representable step actually taken.
    xp[j] = x[j] + h;
    const double hp = xp[j] - x[j];
    const double fp = f(xp);
    xp[j] = x[j] - h;
    const double hm = x[j] - xp[j];
    const double fm = f(xp);
    xp[j] = x[j];
    g[j] = (fp - fm) / (hp + hm);
  }
  return g;
}

Eigen::MatrixXd central_hessian(const Objective& f, const Eigen::VectorXd& x) {
  const auto k = x.size();
  Eigen::VectorXd h(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::VectorXd t = x;
    t[j] = x[j] + hessian_step(x[j]);
    h[j] = t[j] - x[j];
  }
  const double f0 = f(x);
  Eigen::MatrixXd H(k, k);
  Eigen::VectorXd y = x;
  for (Eigen::Index i = 0; i < k; ++i) {
    y[i] = x[i] + h[i];
    const double fp = f(y);
    y[i] = x[i] - h[i];
    const double fm = f(y);
    y[i] = x[i];
    H(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      y[i] = x[i] + h[i];
      y[j] = x[j] + h[j];
      const double fpp = f(y);
      y[j] = x[j] - h[j];
      const double fpm = f(y);
      y[i] = x[i] - h[i];
      const double fmm = f(y);
      y[j] = x[j] + h[j];
      const double fmp = f(y);
      y[i] = x[i];
      y[j] = x[j];
      H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
    }
  }
  return 0.5 * (H + H.transpose());
}

}  // namespace parmsurv
