#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "parmsurv/inference.hpp"
#include "parmsurv/likelihood.hpp"
#include "parmsurv/optimize.hpp"

namespace parmsurv {

struct FitResult {
  Model model;
  std::string stratum;  // set on per-stratum results

  Eigen::VectorXd theta;      // optimizer scale
  Eigen::VectorXd estimates;  // original scale
  CovarianceKind covariance_kind = CovarianceKind::Regular;
  Eigen::MatrixXd cov_optim;     // empty when inference failed
  Eigen::MatrixXd cov_original;
  std::vector<EstimateRow> rows;      // original scale
  std::vector<EstimateRow> log_rows;  // optimizer scale

  double initial_loglik = 0.0;
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  std::size_t n = 0;
  std::size_t k = 0;
  double alpha = 0.05;

  Convergence convergence;
  bool inference_ok = false;
  std::string inference_message;

  // Per-stratum fits; the top-level fields then hold the pooled result with
  // loglik/AIC/BIC summed over strata.
  std::vector<FitResult> strata;
  bool stratified() const { return !strata.empty(); }
};

// Starting values on the optimizer scale: log-time mean for the location
// intercept, log-time sd for a scale parameter, 0.5 for shape parameters,
// 1 for other positive parameters, 0 for coefficients; user init overrides.
Eigen::VectorXd initialize(const LikelihoodContext& ctx, std::ostream* warnings = nullptr);

Eigen::VectorXd to_optim_scale(const Eigen::VectorXd& original, const ParameterLayout& layout);
Eigen::VectorXd from_optim_scale(const Eigen::VectorXd& theta, const ParameterLayout& layout);

// Box bounds on the optimizer scale from the model's per-parameter bounds.
std::pair<Eigen::VectorXd, Eigen::VectorXd> optimizer_bounds(const LikelihoodContext& ctx);

OptimResult maximize(const LikelihoodContext& ctx, const Eigen::VectorXd& theta0, const FitOptions& options);

// Fits the model (per stratum and pooled when the data carry strata) and
// computes covariance, summaries and information criteria.
FitResult fit_model(const LikelihoodContext& ctx, const FitOptions& options = {});

}  // namespace parmsurv
