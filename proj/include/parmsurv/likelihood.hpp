#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "parmsurv/data.hpp"
#include "parmsurv/design.hpp"
#include "parmsurv/model.hpp"

namespace parmsurv {

// Everything needed to map coefficient vectors to distribution parameters,
// independent of any particular dataset.
struct Model {
  ModelSpec spec;
  std::vector<CovariateSchema> schema;
  ParameterLayout layout;

  const Distribution& dist() const { return *spec.distribution; }
  // Distribution parameters from per-parameter design rows (one row per
  // distribution parameter, in parameter order). Throws DomainError on a
  // non-finite result.
  std::vector<double> parameters(const Eigen::VectorXd& theta,
                                 const std::vector<Eigen::VectorXd>& design_rows) const;
  // Design rows for a set of named covariate cells.
  std::vector<Eigen::VectorXd> design_rows(const std::vector<std::string>& names,
                                           const std::vector<const Cell*>& cells) const;
};

struct LikelihoodContext {
  Model model;
  ObservationSet data;
  std::vector<DesignMatrix> designs;  // aligned with model.layout.parameters

  std::size_t size() const { return data.size(); }
  Eigen::VectorXd weights() const;
};

// Infers the covariate schema, builds designs and the slot layout.
LikelihoodContext make_context(const ModelSpec& spec, ObservationSet data,
                               const std::vector<std::string>& class_cov = {},
                               const std::vector<std::string>& refgrp = {});
// Same, but with a schema fixed in advance (per-stratum fits share it).
LikelihoodContext make_context(const ModelSpec& spec, ObservationSet data,
                               std::vector<CovariateSchema> schema);

std::vector<double> param_at(const Eigen::VectorXd& theta, const LikelihoodContext& ctx, std::size_t i);

// log S(t1), log(1 - S(t2)), log(S(t1) - S(t2)) or log f(t) by censoring kind.
// Throws DomainError naming the observation when the value is not usable.
double individual_loglik(const Eigen::VectorXd& theta, const LikelihoodContext& ctx, std::size_t i);

// Σ w_i log L_i in data order.
double total_loglik(const Eigen::VectorXd& theta, const LikelihoodContext& ctx);

// n×k matrix of unweighted per-observation central-difference gradients.
Eigen::MatrixXd score_contributions(const Eigen::VectorXd& theta, const LikelihoodContext& ctx);

}  // namespace parmsurv
