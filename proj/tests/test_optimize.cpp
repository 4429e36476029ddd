#include <doctest.h>

#include <cmath>
#include <limits>

#include "parmsurv/numdiff.hpp"
#include "parmsurv/optimize.hpp"

using namespace parmsurv;

TEST_CASE("step rules") {
  const double eps = std::numeric_limits<double>::epsilon();
  CHECK(gradient_step(0.0) == doctest::Approx(std::cbrt(eps)));
  CHECK(gradient_step(-100.0) == doctest::Approx(100 * std::cbrt(eps)));
  CHECK(hessian_step(0.5) == doctest::Approx(std::pow(eps, 0.25)));
}

TEST_CASE("central gradient and Hessian of a quadratic") {
  Eigen::MatrixXd M(3, 3);
  M << 4, 1, 0.5, 1, 3, -0.2, 0.5, -0.2, 2;
  Eigen::VectorXd b(3);
  b << 1, -2, 0.5;
  const Objective f = [&](const Eigen::VectorXd& x) { return -0.5 * x.dot(M * x) + b.dot(x); };
  Eigen::VectorXd x(3);
  x << 0.3, -1.2, 2.0;
  const Eigen::VectorXd g = central_gradient(f, x);
  CHECK((g - (b - M * x)).cwiseAbs().maxCoeff() < 1e-6);
  const Eigen::MatrixXd H = central_hessian(f, x);
  CHECK((H + M).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((H - H.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("separable objective has a diagonal Hessian") {
  const Objective f = [](const Eigen::VectorXd& x) { return -std::exp(x[0]) + x[0] - std::cosh(x[1]); };
  Eigen::VectorXd x(2);
  x << 0.4, -0.3;
  const auto H = central_hessian(f, x);
  CHECK(std::fabs(H(0, 1)) < 1e-6);
  CHECK(H(0, 0) == doctest::Approx(-std::exp(0.4)).epsilon(1e-6));
}

namespace {

// Concave, with an infeasible region x0 <= 0.
double rosen_like(const Eigen::VectorXd& x) {
  if (x[0] <= 0) return std::numeric_limits<double>::quiet_NaN();
  return std::log(x[0]) - x[0] - 2 * (x[1] - x[0]) * (x[1] - x[0]) - 0.5 * x[1] * x[1];
}

}  // namespace

TEST_CASE("all algorithms reach the same maximum") {
  Eigen::VectorXd x0(2);
  x0 << 3.0, -1.0;
  for (auto alg : {Algorithm::NewtonRaphson, Algorithm::QuasiNewton, Algorithm::TrustRegion}) {
    CAPTURE(to_string(alg));
    FitOptions o;
    o.algorithm = alg;
    const auto r = maximize(rosen_like, x0, o);
    CHECK(r.convergence.converged());
    CHECK(r.convergence.gradient_norm <= 1e-6);
    // d/dx0: 1/x0 - 1 + 4(x1 - x0) = 0, d/dx1: -4(x1 - x0) - x1 = 0 -> x1 = 0.8 x0
    CHECK(r.x[1] == doctest::Approx(0.8 * r.x[0]).epsilon(1e-5));
    CHECK(1 / r.x[0] - 1 - 0.8 * r.x[0] == doctest::Approx(0.0).epsilon(1e-5));
  }
}

TEST_CASE("iteration limit is reported") {
  Eigen::VectorXd x0(2);
  x0 << 3.0, -1.0;
  FitOptions o;
  o.max_iterations = 1;
  o.algorithm = Algorithm::QuasiNewton;
  const auto r = maximize(rosen_like, x0, o);
  CHECK(!r.convergence.converged());
  CHECK(r.value >= rosen_like(x0));
}

TEST_CASE("box bounds are respected") {
  const Objective f = [](const Eigen::VectorXd& x) { return -(x[0] - 2) * (x[0] - 2); };
  Eigen::VectorXd x0(1), lo(1), hi(1);
  x0 << 0.0;
  lo << -1.0;
  hi << 1.0;
  const auto r = maximize(f, x0, {}, lo, hi);
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.convergence.converged());
}

TEST_CASE("non-finite start is an error") {
  Eigen::VectorXd x0(2);
  x0 << -1.0, 0.0;
  CHECK_THROWS(maximize(rosen_like, x0, {}));
}

TEST_CASE("algorithm names") {
  CHECK(parse_algorithm("nr") == Algorithm::NewtonRaphson);
  CHECK(parse_algorithm("quanew") == Algorithm::QuasiNewton);
  CHECK(parse_algorithm("trust") == Algorithm::TrustRegion);
  CHECK(!parse_algorithm("simplex"));
}
