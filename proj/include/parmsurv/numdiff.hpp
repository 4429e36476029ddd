#pragma once

#include <functional>

#include <Eigen/Dense>

namespace parmsurv {

using Objective = std::function<double(const Eigen::VectorXd&)>;

// Central-difference step for first derivatives: eps^(1/3) * max(1, |x|).
double gradient_step(double x);
// Step for second differences: eps^(1/4) * max(1, |x|).
double hessian_step(double x);

Eigen::VectorXd central_gradient(const Objective& f, const Eigen::VectorXd& x);
// Symmetrized central-difference Hessian.
Eigen::MatrixXd central_hessian(const Objective& f, const Eigen::VectorXd& x);

}  // namespace parmsurv
