#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "parmsurv/numdiff.hpp"

namespace parmsurv {

enum class Algorithm { NewtonRaphson, QuasiNewton, TrustRegion };

std::optional<Algorithm> parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm a);

struct FitOptions {
  Algorithm algorithm = Algorithm::NewtonRaphson;
  int max_iterations = 200;
  double gradient_tolerance = 1e-6;
  // 0 silent, 1 status line, 2 per-iteration loglik, 3 + gradient norm,
  // 4 + step details, 5 + Hessian conditioning.
  int verbosity = 0;
  std::ostream* log = nullptr;  // defaults to std::cerr when verbosity > 0
};

enum class ConvergenceStatus { Converged, NotConverged };

struct Convergence {
  ConvergenceStatus status = ConvergenceStatus::NotConverged;
  int iterations = 0;
  double gradient_norm = 0.0;
  std::string message;

  bool converged() const { return status == ConvergenceStatus::Converged; }
};

struct OptimResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Convergence convergence;
};

// Maximizes f over the box [lower, upper] using central-difference
// derivatives. f may return NaN or -inf for infeasible points; those steps
// are rejected by the line search / trust region. Convergence is the
// Euclidean norm of the projected gradient falling to the tolerance.
OptimResult maximize(const Objective& f, const Eigen::VectorXd& x0, const FitOptions& options,
                     const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);
OptimResult maximize(const Objective& f, const Eigen::VectorXd& x0, const FitOptions& options);

}  // namespace parmsurv
