#include "parmsurv/fit.hpp"

#include <cmath>
#include <iostream>
#include <limits>

#include "parmsurv/errors.hpp"

namespace parmsurv {

namespace {

using PC = ParamConstraint::Class;

double intercept_value(const Slot& slot, double v) {
  if (!slot.log_link) return v;
  if (!(v > 0)) throw InputError("initial value for " + slot.parameter + " must be positive");
  return std::log(v);
}

FitResult fit_single(const LikelihoodContext& ctx, const FitOptions& options) {
  const auto& layout = ctx.model.layout;
  FitResult r;
  r.model = ctx.model;
  r.alpha = ctx.model.spec.alpha;
  r.n = ctx.size();
  r.k = layout.size();

  const Eigen::VectorXd theta0 = initialize(ctx, options.log);
  r.initial_loglik = total_loglik(theta0, ctx);
  auto opt = maximize(ctx, theta0, options);
  r.theta = opt.x;
  r.loglik = total_loglik(r.theta, ctx);
  r.convergence = opt.convergence;
  r.estimates = from_optim_scale(r.theta, layout);
  const auto ic = information_criteria(r.loglik, r.k, r.n);
  r.aic = ic.aic;
  r.bic = ic.bic;

  try {
    const Eigen::MatrixXd A = observed_information(ctx, r.theta);
    if (ctx.model.spec.robust) {
      const auto cov = sandwich(A, score_contributions(r.theta, ctx), ctx.weights());
      r.cov_optim = cov.matrix;
      r.covariance_kind = cov.kind;
    } else {
      r.cov_optim = regular_covariance(A).matrix;
    }
    r.cov_original = original_scale_covariance(r.theta, r.cov_optim, layout);
    r.rows = back_transform(r.theta, r.cov_optim, layout, r.alpha);
    r.log_rows = optimizer_scale_rows(r.theta, r.cov_optim, layout, r.alpha);
    r.inference_ok = true;
  } catch (const InferenceError& e) {
    r.inference_message = e.what();
  } catch (const DomainError& e) {
    r.inference_message = e.what();
  }
  if (!r.inference_ok) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const Eigen::MatrixXd empty = Eigen::MatrixXd::Constant(r.k, r.k, nan);
    r.rows = back_transform(r.theta, empty, layout, r.alpha);
    r.log_rows = optimizer_scale_rows(r.theta, empty, layout, r.alpha);
  }
  return r;
}

FitResult pool(const LikelihoodContext& ctx, std::vector<FitResult> strata) {
  FitResult r;
  r.model = ctx.model;
  r.alpha = ctx.model.spec.alpha;
  r.k = ctx.model.layout.size();
  r.covariance_kind = strata.front().covariance_kind;
  r.convergence.status = ConvergenceStatus::Converged;
  r.inference_ok = true;
  std::vector<Eigen::VectorXd> est;
  std::vector<Eigen::MatrixXd> cov;
  std::vector<std::size_t> sizes;
  for (const auto& s : strata) {
    r.n += s.n;
    r.loglik += s.loglik;
    r.initial_loglik += s.initial_loglik;
    r.aic += s.aic;
    r.bic += s.bic;
    r.convergence.iterations = std::max(r.convergence.iterations, s.convergence.iterations);
    r.convergence.gradient_norm = std::max(r.convergence.gradient_norm, s.convergence.gradient_norm);
    if (!s.convergence.converged()) {
      r.convergence.status = ConvergenceStatus::NotConverged;
      r.convergence.message = "stratum " + s.stratum + ": " + s.convergence.message;
    }
    if (!s.inference_ok) {
      r.inference_ok = false;
      r.inference_message = "stratum " + s.stratum + ": " + s.inference_message;
    }
    est.push_back(s.estimates);
    cov.push_back(s.inference_ok ? s.cov_original : Eigen::MatrixXd::Zero(r.k, r.k));
    sizes.push_back(s.n);
  }
  const auto pooled = pool_strata(est, cov, sizes);
  r.estimates = pooled.estimate;
  r.theta = to_optim_scale(pooled.estimate, ctx.model.layout);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (r.inference_ok) {
    r.cov_original = pooled.covariance;
    // Jacobian of log on transformed slots.
    Eigen::VectorXd J = Eigen::VectorXd::Ones(r.k);
    for (std::size_t j = 0; j < r.k; ++j)
      if (ctx.model.layout.slots[j].transformed) J[static_cast<Eigen::Index>(j)] = 1.0 / pooled.estimate[static_cast<Eigen::Index>(j)];
    r.cov_optim = J.asDiagonal() * pooled.covariance * J.asDiagonal();
  }
  for (std::size_t j = 0; j < r.k; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double se = r.inference_ok ? std::sqrt(r.cov_original(jj, jj)) : nan;
    const double se_log = r.inference_ok ? std::sqrt(r.cov_optim(jj, jj)) : nan;
    const auto& slot = ctx.model.layout.slots[j];
    r.rows.push_back(summarize(slot.label, r.estimates[jj], se, r.alpha));
    r.log_rows.push_back(summarize(slot.transformed ? "log(" + slot.label + ")" : slot.label, r.theta[jj], se_log, r.alpha));
  }
  r.strata = std::move(strata);
  return r;
}

}  // namespace

Eigen::VectorXd to_optim_scale(const Eigen::VectorXd& original, const ParameterLayout& layout) {
  Eigen::VectorXd theta = original;
  for (std::size_t j = 0; j < layout.size(); ++j) {
    if (!layout.slots[j].transformed) continue;
    const auto jj = static_cast<Eigen::Index>(j);
    if (!(original[jj] > 0))
      throw DomainError("value for log-transformed parameter " + layout.slots[j].parameter + " must be positive");
    theta[jj] = std::log(original[jj]);
  }
  return theta;
}

Eigen::VectorXd from_optim_scale(const Eigen::VectorXd& theta, const ParameterLayout& layout) {
  return original_scale_estimates(theta, layout);
}

Eigen::VectorXd initialize(const LikelihoodContext& ctx, std::ostream* warnings) {
  const auto& model = ctx.model;
  const auto& layout = model.layout;
  const auto& dist = model.dist();
  if (ctx.data.empty()) throw DomainError("no valid observations");

  double mean = 0.0;
  for (const auto& o : ctx.data.observations) {
    const double tau = observed_time(o);
    if (!(tau > 0)) throw DomainError("observed time must be positive for initialization");
    mean += std::log(tau);
  }
  const double n = static_cast<double>(ctx.size());
  mean /= n;
  double ss = 0.0;
  for (const auto& o : ctx.data.observations) ss += std::pow(std::log(observed_time(o)) - mean, 2);
  double sd = ctx.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const bool builtin = dist.name() != "custom";
  if (builtin && dist.log_time_init() && !(sd > 0)) {
    if (warnings) *warnings << "warning: log-time standard deviation undefined; scale initialized to 1\n";
    sd = 1.0;
  }

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.size()));
  const auto& params = dist.parameters();
  const std::size_t loc = dist.location_index();
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto off = static_cast<Eigen::Index>(layout.offsets[k]);
    const auto& pc = params[k];
    double v;  // original scale
    if (k == loc) {
      v = mean;
    } else if (builtin) {
      if (pc.name == "sigma" && dist.log_time_init()) v = sd;
      else if (pc.cls == PC::Positive) v = 1.0;
      else v = 0.5;
    } else {
      v = pc.cls == PC::Positive ? 1.0 : 0.0;
      if (auto lo = model.spec.lower.find(pc.name); lo != model.spec.lower.end() && lo->second >= 0) v = 1.0;
    }
    theta[off] = intercept_value(layout.slots[layout.offsets[k]], v);
  }

  for (const auto& [key, value] : model.spec.init) {
    const auto colon = key.find(':');
    const std::string param = key.substr(0, colon);
    const auto k = layout.parameter_index(param);
    if (colon == std::string::npos) {
      theta[static_cast<Eigen::Index>(layout.offsets[k])] = intercept_value(layout.slots[layout.offsets[k]], value);
      continue;
    }
    const std::string column = key.substr(colon + 1);
    bool found = false;
    for (std::size_t j = layout.offsets[k]; j < layout.offsets[k] + layout.counts[k]; ++j) {
      if (layout.slots[j].column == column) {
        theta[static_cast<Eigen::Index>(j)] = layout.slots[j].intercept ? intercept_value(layout.slots[j], value) : value;
        found = true;
      }
    }
    if (!found) throw InputError("init refers to unknown coefficient '" + key + "'");
  }

  const auto [lo, up] = optimizer_bounds(ctx);
  return theta.cwiseMax(lo).cwiseMin(up);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> optimizer_bounds(const LikelihoodContext& ctx) {
  const auto& layout = ctx.model.layout;
  const auto& spec = ctx.model.spec;
  const double inf = std::numeric_limits<double>::infinity();
  const auto k = static_cast<Eigen::Index>(layout.size());
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(k, -inf), up = Eigen::VectorXd::Constant(k, inf);
  auto to_scale = [inf](const Slot& s, double v) {
    if (!s.transformed) return v;
    return v > 0 ? std::log(v) : (std::isinf(v) ? v : -inf);
  };
  for (const auto& [p, v] : spec.lower) {
    const auto off = layout.offsets[layout.parameter_index(p)];
    lo[static_cast<Eigen::Index>(off)] = to_scale(layout.slots[off], v);
  }
  for (const auto& [p, v] : spec.upper) {
    const auto off = layout.offsets[layout.parameter_index(p)];
    if (layout.slots[off].transformed && !(v > 0))
      throw InputError("upper bound for log-transformed parameter '" + p + "' must be positive");
    up[static_cast<Eigen::Index>(off)] = to_scale(layout.slots[off], v);
  }
  return {lo, up};
}

OptimResult maximize(const LikelihoodContext& ctx, const Eigen::VectorXd& theta0, const FitOptions& options) {
  const auto [lo, up] = optimizer_bounds(ctx);
  return maximize([&](const Eigen::VectorXd& th) { return total_loglik(th, ctx); }, theta0, options, lo, up);
}

FitResult fit_model(const LikelihoodContext& ctx, const FitOptions& options) {
  if (ctx.data.empty()) throw DomainError("no valid observations");
  if (ctx.data.strata_columns.empty()) return fit_single(ctx, options);

  const auto k = ctx.model.layout.size();
  std::vector<FitResult> strata;
  for (const auto& label : ctx.data.strata()) {
    auto sub = make_context(ctx.model.spec, ctx.data.subset_stratum(label), ctx.model.schema);
    if (sub.size() < k)
      throw InputError("stratum '" + label + "' has " + std::to_string(sub.size()) +
                       " observations, fewer than the " + std::to_string(k) + " model parameters");
    if (options.verbosity >= 1 && options.log) *options.log << "stratum " << label << ":\n";
    auto r = fit_single(sub, options);
    r.stratum = label;
    strata.push_back(std::move(r));
  }
  return pool(ctx, std::move(strata));
}

}  // namespace parmsurv
