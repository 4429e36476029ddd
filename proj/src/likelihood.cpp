#include "parmsurv/likelihood.hpp"

#include <cmath>
#include <string>

#include "parmsurv/errors.hpp"
#include "parmsurv/numdiff.hpp"
#include "parmsurv/special.hpp"

namespace parmsurv {

namespace {

const double kLogFloor = std::log(1e-300);

std::string obs_name(const LikelihoodContext& ctx, std::size_t i) {
  return "observation " + std::to_string(i + 1) + " (input row " +
         std::to_string(ctx.data.observations[i].source_row + 1) + ")";
}

}  // namespace

std::vector<double> Model::parameters(const Eigen::VectorXd& theta,
                                      const std::vector<Eigen::VectorXd>& design_rows) const {
  const auto np = layout.parameters.size();
  std::vector<double> out(np);
  for (std::size_t k = 0; k < np; ++k) {
    const auto off = static_cast<Eigen::Index>(layout.offsets[k]);
    const auto cnt = static_cast<Eigen::Index>(layout.counts[k]);
    const double eta = theta.segment(off, cnt).dot(design_rows[k]);
    const double v = layout.links[k] == Link::Log ? std::exp(eta) : eta;
    if (!std::isfinite(v)) throw DomainError("parameter " + layout.parameters[k] + " is not finite");
    out[k] = v;
  }
  return out;
}

std::vector<Eigen::VectorXd> Model::design_rows(const std::vector<std::string>& names,
                                                const std::vector<const Cell*>& cells) const {
  std::vector<Eigen::VectorXd> rows;
  for (const auto& p : layout.parameters) {
    std::vector<std::string> covs;
    if (auto it = spec.param_covars.find(p); it != spec.param_covars.end()) covs = it->second;
    std::vector<const Cell*> picked;
    for (const auto& c : covs) {
      std::size_t j = 0;
      while (j < names.size() && names[j] != c) ++j;
      if (j == names.size()) throw InputError("missing covariate '" + c + "'");
      picked.push_back(cells[j]);
    }
    rows.push_back(encode_row(schema, covs, picked));
  }
  return rows;
}

Eigen::VectorXd LikelihoodContext::weights() const {
  Eigen::VectorXd w(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) w[static_cast<Eigen::Index>(i)] = data.observations[i].weight;
  return w;
}

LikelihoodContext make_context(const ModelSpec& spec, ObservationSet data, std::vector<CovariateSchema> schema) {
  spec.validate();
  LikelihoodContext ctx;
  ctx.designs = build_design(data, schema, spec.parameter_names(), spec.param_covars);
  ctx.model.spec = spec;
  ctx.model.schema = std::move(schema);
  ctx.model.layout = build_layout(spec, ctx.designs);
  ctx.data = std::move(data);
  return ctx;
}

LikelihoodContext make_context(const ModelSpec& spec, ObservationSet data,
                               const std::vector<std::string>& class_cov,
                               const std::vector<std::string>& refgrp) {
  spec.validate();
  auto schema = infer_schema(data, spec.all_covariates(), class_cov, refgrp);
  return make_context(spec, std::move(data), std::move(schema));
}

std::vector<double> param_at(const Eigen::VectorXd& theta, const LikelihoodContext& ctx, std::size_t i) {
  const auto& layout = ctx.model.layout;
  if (static_cast<std::size_t>(theta.size()) != layout.size())
    throw DomainError("coefficient vector has length " + std::to_string(theta.size()) + ", layout expects " +
                      std::to_string(layout.size()));
  std::vector<Eigen::VectorXd> rows;
  rows.reserve(ctx.designs.size());
  for (const auto& dm : ctx.designs) rows.push_back(dm.values.row(static_cast<Eigen::Index>(i)).transpose());
  return ctx.model.parameters(theta, rows);
}

double individual_loglik(const Eigen::VectorXd& theta, const LikelihoodContext& ctx, std::size_t i) {
  const auto params = param_at(theta, ctx, i);
  const auto& dist = ctx.model.dist();
  const auto& b = ctx.data.observations[i].bounds;
  double ll = 0.0;
  switch (b.kind()) {
    case CensorKind::Event: ll = dist.log_density(params, *b.t1); break;
    case CensorKind::RightCensored: ll = dist.log_survival(params, *b.t1); break;
    case CensorKind::LeftCensored: ll = dist.log_cdf(params, *b.t2); break;
    case CensorKind::IntervalCensored: {
      const double l1 = dist.log_survival(params, *b.t1);
      const double l2 = dist.log_survival(params, *b.t2);
      if (!(l1 > l2))
        throw DomainError("interval likelihood S(t1) - S(t2) is not positive for " + obs_name(ctx, i));
      ll = l1 + special::log1mexp(l2 - l1);
      break;
    }
  }
  if (std::isnan(ll) || ll < kLogFloor)
    throw DomainError("likelihood below 1e-300 for " + obs_name(ctx, i));
  return ll;
}

double total_loglik(const Eigen::VectorXd& theta, const LikelihoodContext& ctx) {
  if (ctx.data.empty()) throw DomainError("no valid observations");
  double sum = 0.0;
  for (std::size_t i = 0; i < ctx.data.size(); ++i)
    sum += ctx.data.observations[i].weight * individual_loglik(theta, ctx, i);
  return sum;
}

Eigen::MatrixXd score_contributions(const Eigen::VectorXd& theta, const LikelihoodContext& ctx) {
  const auto n = static_cast<Eigen::Index>(ctx.size());
  Eigen::MatrixXd U(n, theta.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    U.row(i) = central_gradient([&](const Eigen::VectorXd& x) { return individual_loglik(x, ctx, idx); }, theta)
                   .transpose();
    if (!U.row(i).allFinite()) throw DomainError("non-finite score contribution for " + obs_name(ctx, idx));
  }
  return U;
}

}  // namespace parmsurv
