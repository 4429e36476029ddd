#pragma once

#include <string>
#include <vector>

#include "parmsurv/data.hpp"
#include "parmsurv/fit.hpp"

namespace parmsurv {

struct PredictionRow {
  double time = 0.0;
  std::vector<std::string> names;  // covariate names
  std::vector<Cell> cells;         // aligned with names
};

// Rows of a prediction table. It needs a "time" column plus every covariate
// the model uses; other columns are ignored.
std::vector<PredictionRow> prediction_rows(const RawTable& table, const Model& model);

struct Prediction {
  std::string group;  // "cov=value, ..." plus ", stratum=s" when stratified
  std::string stratum;
  double time = 0.0;
  double survival = 0.0;
  double survival_se = 0.0;
  double survival_lower = 0.0;
  double survival_upper = 0.0;
  double hazard = 0.0;
  double hazard_se = 0.0;
  double hazard_lower = 0.0;
  double hazard_upper = 0.0;
};

std::string group_label(const PredictionRow& row, const std::string& stratum = {});

// S and h at each row with delta-method SEs and bands clamped to [0, 1] and
// [0, inf). Stratified fits predict every row in every stratum.
std::vector<Prediction> predict_at(const FitResult& fit, const std::vector<PredictionRow>& rows);

struct TrajectoryCurve {
  std::string group;
  std::vector<double> times;
  std::vector<double> survival, survival_lower, survival_upper;
  std::vector<double> hazard, hazard_lower, hazard_upper;
};

// Unique covariate rows (time ignored), 100 ticks t_L*j/100.
std::vector<TrajectoryCurve> trajectories(const FitResult& fit, const std::vector<PredictionRow>& rows,
                                          double max_time, bool bands = true);

std::string curves_csv(const std::vector<TrajectoryCurve>& curves);

}  // namespace parmsurv
