#pragma once

#include <string>
#include <utility>
#include <vector>

#include "parmsurv/data.hpp"
#include "parmsurv/fit.hpp"
#include "parmsurv/optimize.hpp"
#include "parmsurv/predict.hpp"

namespace parmsurv {

// Fixed decimals; "." for NaN.
std::string format_fixed(double v, int decimals);

// Columns: Variable, Estimate, S.E., CI Lower, CI Upper, t Value, Pr>|t|.
std::string estimates_table(const std::vector<EstimateRow>& rows, const std::string& title = "Parameter Estimates");
std::string criteria_line(double loglik, double aic, double bic);
// Columns: time, covariates, Survival, Survival SE, Hazard, Hazard SE.
std::string prediction_table(const std::vector<Prediction>& predictions);
std::string deletion_log(const ObservationSet& data);
std::string convergence_record(const Convergence& c, Algorithm algorithm);

struct ReportInput {
  const FitResult* fit = nullptr;
  const ObservationSet* data = nullptr;
  const std::vector<Prediction>* predictions = nullptr;  // may be null
  Algorithm algorithm = Algorithm::NewtonRaphson;
  bool log_result = false;
  bool bands_clamped = true;
  std::vector<std::pair<std::string, std::string>> config;  // echoed settings
  std::vector<std::string> files;                            // output manifest
};

std::string render_report(const ReportInput& in);
// Deterministic JSON document: config echo, estimates, covariance, criteria,
// convergence, deletions and predictions.
std::string results_json(const ReportInput& in);

}  // namespace parmsurv
