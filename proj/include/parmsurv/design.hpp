#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "parmsurv/data.hpp"

namespace parmsurv {

struct CovariateSchema {
  enum class Kind { Continuous, Classification };
  std::string name;
  Kind kind = Kind::Continuous;
  std::vector<std::string> levels;  // sorted; classification only
  std::string reference;

  bool is_class() const { return kind == Kind::Classification; }
  // Column names this covariate contributes to a design matrix.
  std::vector<std::string> encoded_columns() const;
};

struct DesignMatrix {
  std::string parameter;
  std::vector<std::string> columns;  // first is "Intercept"
  Eigen::MatrixXd values;
};

// Level label for a cell: trimmed text, or the shortest round-trip
// representation of a number (so "1" and "1.0" are the same level).
std::string level_label(const Cell& cell);

// Splits "placebo,high risk" into {"placebo", "high risk"}.
std::vector<std::string> parse_refgrp(const std::string& text);

// covars lists every model covariate in first-appearance order. refgrp, when
// nonempty, holds one reference label per classification covariate in that
// same order.
std::vector<CovariateSchema> infer_schema(const ObservationSet& data,
                                          const std::vector<std::string>& covars,
                                          const std::vector<std::string>& class_cov,
                                          const std::vector<std::string>& refgrp);

const CovariateSchema& find_schema(const std::vector<CovariateSchema>& schema,
                                   const std::string& name);

// One design row for a parameter given named covariate cells. Throws
// InputError on an unseen classification level or a missing/non-numeric value.
Eigen::VectorXd encode_row(const std::vector<CovariateSchema>& schema,
                           const std::vector<std::string>& covariates,
                           const std::vector<const Cell*>& cells);

// One matrix per entry of `parameters`; parameters without an entry in
// param_covars get the intercept-only matrix.
std::vector<DesignMatrix> build_design(const ObservationSet& data,
                                       const std::vector<CovariateSchema>& schema,
                                       const std::vector<std::string>& parameters,
                                       const std::map<std::string, std::vector<std::string>>& param_covars);

}  // namespace parmsurv
