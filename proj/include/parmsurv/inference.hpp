#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "parmsurv/likelihood.hpp"
#include "parmsurv/model.hpp"
#include "parmsurv/numdiff.hpp"

namespace parmsurv {

enum class CovarianceKind { Regular, Sandwich };

const char* to_string(CovarianceKind kind);

struct CovarianceEstimate {
  Eigen::MatrixXd matrix;
  CovarianceKind kind = CovarianceKind::Regular;
};

// -∂²f/∂θ² by central differences, symmetrized.
Eigen::MatrixXd negative_hessian(const Objective& f, const Eigen::VectorXd& theta);
// Observed information of the weighted total log-likelihood.
Eigen::MatrixXd observed_information(const LikelihoodContext& ctx, const Eigen::VectorXd& theta);

// A⁻¹. Throws InferenceError (with a condition estimate) when A is singular
// or not positive definite.
CovarianceEstimate regular_covariance(const Eigen::MatrixXd& information);

// A⁻¹ B A⁻¹ with B = Σ w_i U_i U_iᵀ w_i.
CovarianceEstimate sandwich(const Eigen::MatrixXd& information, const Eigen::MatrixXd& scores,
                            const Eigen::VectorXd& weights);

struct EstimateRow {
  std::string label;
  double estimate = 0.0;
  double se = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double t = 0.0;
  double p = 0.0;
};

// Wald interval θ ± z_{1-α/2}·se, t = θ/se, two-sided normal p-value.
EstimateRow summarize(const std::string& label, double estimate, double se, double alpha);

// Original-scale rows: transformed slots map through exp with delta-method
// SEs and exponentiated log-scale intervals; other slots pass through.
std::vector<EstimateRow> back_transform(const Eigen::VectorXd& theta, const Eigen::MatrixXd& cov,
                                        const ParameterLayout& layout, double alpha);
// Rows on the optimizer scale.
std::vector<EstimateRow> optimizer_scale_rows(const Eigen::VectorXd& theta, const Eigen::MatrixXd& cov,
                                              const ParameterLayout& layout, double alpha);

// J V Jᵀ with J = diag(exp θ_j) on transformed slots, 1 elsewhere.
Eigen::MatrixXd original_scale_covariance(const Eigen::VectorXd& theta, const Eigen::MatrixXd& cov,
                                          const ParameterLayout& layout);
Eigen::VectorXd original_scale_estimates(const Eigen::VectorXd& theta, const ParameterLayout& layout);

struct InformationCriteria {
  double aic = 0.0;
  double bic = 0.0;
};

InformationCriteria information_criteria(double loglik, std::size_t k, std::size_t n);

struct PooledEstimate {
  Eigen::VectorXd estimate;
  Eigen::MatrixXd covariance;
};

// θ = Σ (n_s/n) θ_s and V = Σ (n_s/n)² V_s.
PooledEstimate pool_strata(const std::vector<Eigen::VectorXd>& estimates,
                           const std::vector<Eigen::MatrixXd>& covariances,
                           const std::vector<std::size_t>& sizes);

// "<.0001" below 1e-4, else four decimals.
std::string format_p_value(double p);

}  // namespace parmsurv
