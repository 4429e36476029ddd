#include "parmsurv/inference.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "parmsurv/errors.hpp"
#include "parmsurv/special.hpp"

namespace parmsurv {

namespace {

constexpr double kMaxCondition = 1e14;

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& A) {
  if (!A.allFinite()) throw InferenceError("information matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const auto& ev = es.eigenvalues();
  const double lo = ev.minCoeff(), hi = ev.maxCoeff();
  if (!(lo > 0)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "information matrix is not positive definite (eigenvalues %.3g .. %.3g)", lo, hi);
    throw InferenceError(buf);
  }
  if (hi / lo > kMaxCondition) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "information matrix is singular (condition number %.3g)", hi / lo);
    throw InferenceError(buf);
  }
  Eigen::MatrixXd inv = es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (inv + inv.transpose());
}

}  // namespace

const char* to_string(CovarianceKind kind) { return kind == CovarianceKind::Regular ? "regular" : "sandwich"; }

Eigen::MatrixXd negative_hessian(const Objective& f, const Eigen::VectorXd& theta) {
  Eigen::MatrixXd A = -central_hessian(f, theta);
  if (!A.allFinite()) throw InferenceError("non-finite entries in the finite-difference Hessian");
  return A;
}

Eigen::MatrixXd observed_information(const LikelihoodContext& ctx, const Eigen::VectorXd& theta) {
  return negative_hessian([&](const Eigen::VectorXd& x) { return total_loglik(x, ctx); }, theta);
}

CovarianceEstimate regular_covariance(const Eigen::MatrixXd& information) {
  return {checked_inverse(information), CovarianceKind::Regular};
}

CovarianceEstimate sandwich(const Eigen::MatrixXd& information, const Eigen::MatrixXd& scores,
                            const Eigen::VectorXd& weights) {
  const Eigen::MatrixXd Ainv = checked_inverse(information);
  const Eigen::MatrixXd WU = weights.asDiagonal() * scores;
  const Eigen::MatrixXd B = WU.transpose() * WU;
  Eigen::MatrixXd V = Ainv * B * Ainv;
  return {0.5 * (V + V.transpose()), CovarianceKind::Sandwich};
}

EstimateRow summarize(const std::string& label, double estimate, double se, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw InputError("alpha must lie in (0, 1)");
  const double z = special::normal_quantile(1.0 - alpha / 2.0);
  EstimateRow r;
  r.label = label;
  r.estimate = estimate;
  r.se = se;
  r.lower = estimate - z * se;
  r.upper = estimate + z * se;
  if (se > 0) {
    r.t = estimate / se;
    r.p = 2.0 * special::normal_sf(std::fabs(r.t));
  } else {
    r.t = r.p = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

Eigen::VectorXd original_scale_estimates(const Eigen::VectorXd& theta, const ParameterLayout& layout) {
  Eigen::VectorXd v = theta;
  for (std::size_t j = 0; j < layout.size(); ++j)
    if (layout.slots[j].transformed) v[static_cast<Eigen::Index>(j)] = std::exp(theta[static_cast<Eigen::Index>(j)]);
  return v;
}

Eigen::MatrixXd original_scale_covariance(const Eigen::VectorXd& theta, const Eigen::MatrixXd& cov,
                                          const ParameterLayout& layout) {
  Eigen::VectorXd J = Eigen::VectorXd::Ones(theta.size());
  for (std::size_t j = 0; j < layout.size(); ++j)
    if (layout.slots[j].transformed) J[static_cast<Eigen::Index>(j)] = std::exp(theta[static_cast<Eigen::Index>(j)]);
  return J.asDiagonal() * cov * J.asDiagonal();
}

std::vector<EstimateRow> back_transform(const Eigen::VectorXd& theta, const Eigen::MatrixXd& cov,
                                        const ParameterLayout& layout, double alpha) {
  std::vector<EstimateRow> rows;
  for (std::size_t j = 0; j < layout.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double se = std::sqrt(cov(jj, jj));
    const auto& slot = layout.slots[j];
    if (!slot.transformed) {
      rows.push_back(summarize(slot.label, theta[jj], se, alpha));
      continue;
    }
    const auto log_row = summarize(slot.label, theta[jj], se, alpha);
    EstimateRow r = summarize(slot.label, std::exp(theta[jj]), std::exp(theta[jj]) * se, alpha);
    r.lower = std::exp(log_row.lower);
    r.upper = std::exp(log_row.upper);
    rows.push_back(r);
  }
  return rows;
}

std::vector<EstimateRow> optimizer_scale_rows(const Eigen::VectorXd& theta, const Eigen::MatrixXd& cov,
                                              const ParameterLayout& layout, double alpha) {
  std::vector<EstimateRow> rows;
  for (std::size_t j = 0; j < layout.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const auto& slot = layout.slots[j];
    const std::string label = slot.transformed ? "log(" + slot.label + ")" : slot.label;
    rows.push_back(summarize(label, theta[jj], std::sqrt(cov(jj, jj)), alpha));
  }
  return rows;
}

InformationCriteria information_criteria(double loglik, std::size_t k, std::size_t n) {
  if (n < 1) throw InputError("information criteria need at least one observation");
  const double kk = static_cast<double>(k);
  return {-2.0 * loglik + 2.0 * kk, -2.0 * loglik + std::log(static_cast<double>(n)) * kk};
}

PooledEstimate pool_strata(const std::vector<Eigen::VectorXd>& estimates,
                           const std::vector<Eigen::MatrixXd>& covariances,
                           const std::vector<std::size_t>& sizes) {
  if (estimates.empty() || estimates.size() != covariances.size() || estimates.size() != sizes.size())
    throw InputError("pooling needs one estimate, covariance and size per stratum");
  const auto k = estimates.front().size();
  std::size_t n = 0;
  for (std::size_t s = 0; s < estimates.size(); ++s) {
    if (estimates[s].size() != k || covariances[s].rows() != k || covariances[s].cols() != k)
      throw InputError("strata have mismatched parameter layouts");
    n += sizes[s];
  }
  PooledEstimate out{Eigen::VectorXd::Zero(k), Eigen::MatrixXd::Zero(k, k)};
  for (std::size_t s = 0; s < estimates.size(); ++s) {
    const double w = static_cast<double>(sizes[s]) / static_cast<double>(n);
    out.estimate += w * estimates[s];
    out.covariance += w * w * covariances[s];
  }
  return out;
}

std::string format_p_value(double p) {
  if (std::isnan(p)) return ".";
  if (p < 1e-4) return "<.0001";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", p);
  return buf;
}

}  // namespace parmsurv
