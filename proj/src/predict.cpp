#include "parmsurv/predict.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "parmsurv/errors.hpp"
#include "parmsurv/numdiff.hpp"
#include "parmsurv/special.hpp"

namespace parmsurv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string cell_text(const Cell& c) { return c.is_missing() ? "." : c.text; }

struct PointEstimate {
  double s, s_se, h, h_se;
};

PointEstimate evaluate(const FitResult& fit, const std::vector<Eigen::VectorXd>& design, double t) {
  const auto& model = fit.model;
  auto surv = [&](const Eigen::VectorXd& th) {
    const auto p = model.parameters(th, design);
    return model.dist().survival(p, t);
  };
  auto haz = [&](const Eigen::VectorXd& th) {
    const auto p = model.parameters(th, design);
    return model.dist().hazard(p, t);
  };
  PointEstimate e{surv(fit.theta), kNaN, haz(fit.theta), kNaN};
  if (fit.inference_ok && fit.cov_optim.size() > 0) {
    const Eigen::VectorXd gs = central_gradient(surv, fit.theta);
    const Eigen::VectorXd gh = central_gradient(haz, fit.theta);
    e.s_se = std::sqrt(std::max(0.0, gs.dot(fit.cov_optim * gs)));
    e.h_se = std::sqrt(std::max(0.0, gh.dot(fit.cov_optim * gh)));
  }
  return e;
}

void fill(Prediction& p, const PointEstimate& e, double z) {
  p.survival = e.s;
  p.survival_se = e.s_se;
  p.hazard = e.h;
  p.hazard_se = e.h_se;
  p.survival_lower = std::clamp(e.s - z * e.s_se, 0.0, 1.0);
  p.survival_upper = std::clamp(e.s + z * e.s_se, 0.0, 1.0);
  p.hazard_lower = std::max(0.0, e.h - z * e.h_se);
  p.hazard_upper = std::max(0.0, e.h + z * e.h_se);
  if (std::isnan(e.s_se)) p.survival_lower = p.survival_upper = kNaN;
  if (std::isnan(e.h_se)) p.hazard_lower = p.hazard_upper = kNaN;
}

std::vector<const FitResult*> fits_of(const FitResult& fit) {
  std::vector<const FitResult*> out;
  if (fit.stratified())
    for (const auto& s : fit.strata) out.push_back(&s);
  else
    out.push_back(&fit);
  return out;
}

std::vector<Eigen::VectorXd> design_for(const Model& model, const PredictionRow& row) {
  std::vector<const Cell*> cells;
  for (const auto& c : row.cells) cells.push_back(&c);
  return model.design_rows(row.names, cells);
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::vector<PredictionRow> prediction_rows(const RawTable& table, const Model& model) {
  const auto time_col = table.find_column("time");
  if (!time_col) throw InputError("prediction data needs a column named time");
  const auto covs = model.spec.all_covariates();
  std::vector<std::pair<std::size_t, std::string>> cols;  // pred-column order
  for (const auto& c : covs) {
    const auto j = table.find_column(c);
    if (!j) throw InputError("prediction data is missing covariate '" + c + "'");
    cols.emplace_back(*j, c);
  }
  std::sort(cols.begin(), cols.end());
  std::vector<PredictionRow> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const auto& tc = r[*time_col];
    if (!tc.is_numeric() || !(tc.number > 0))
      throw InputError("prediction row " + std::to_string(i + 1) + ": time must be a positive number");
    PredictionRow row;
    row.time = tc.number;
    for (const auto& [j, name] : cols) {
      if (r[j].is_missing())
        throw InputError("prediction row " + std::to_string(i + 1) + ": missing value for '" + name + "'");
      row.names.push_back(name);
      row.cells.push_back(r[j]);
    }
    design_for(model, row);  // rejects unseen classification levels up front
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string group_label(const PredictionRow& row, const std::string& stratum) {
  std::string out;
  for (std::size_t j = 0; j < row.names.size(); ++j) {
    if (!out.empty()) out += ", ";
    out += row.names[j] + "=" + cell_text(row.cells[j]);
  }
  if (!stratum.empty()) out += (out.empty() ? "" : ", ") + std::string("stratum=") + stratum;
  return out.empty() ? "overall" : out;
}

std::vector<Prediction> predict_at(const FitResult& fit, const std::vector<PredictionRow>& rows) {
  const double z = special::normal_quantile(1.0 - fit.alpha / 2.0);
  std::vector<Prediction> out;
  for (const auto* f : fits_of(fit)) {
    for (const auto& row : rows) {
      if (!(row.time > 0)) throw DomainError("prediction time must be positive");
      Prediction p;
      p.stratum = f->stratum;
      p.group = group_label(row, f->stratum);
      p.time = row.time;
      fill(p, evaluate(*f, design_for(f->model, row), row.time), z);
      out.push_back(p);
    }
  }
  return out;
}

std::vector<TrajectoryCurve> trajectories(const FitResult& fit, const std::vector<PredictionRow>& rows,
                                          double max_time, bool bands) {
  if (!(max_time > 0)) throw InputError("pred_max_time must be positive");
  std::vector<const PredictionRow*> unique;
  std::set<std::vector<std::string>> seen;
  for (const auto& row : rows) {
    std::vector<std::string> key;
    for (const auto& c : row.cells) key.push_back(cell_text(c));
    if (seen.insert(key).second) unique.push_back(&row);
  }
  const double z = special::normal_quantile(1.0 - fit.alpha / 2.0);
  std::vector<TrajectoryCurve> curves;
  for (const auto* row : unique) {
    for (const auto* f : fits_of(fit)) {
      TrajectoryCurve c;
      c.group = group_label(*row, f->stratum);
      const auto design = design_for(f->model, *row);
      for (int j = 1; j <= 100; ++j) {
        const double t = max_time * j / 100.0;
        PointEstimate e;
        if (bands) {
          e = evaluate(*f, design, t);
        } else {
          const auto p = f->model.parameters(f->theta, design);
          e = {f->model.dist().survival(p, t), kNaN, f->model.dist().hazard(p, t), kNaN};
        }
        Prediction p;
        fill(p, e, z);
        c.times.push_back(t);
        c.survival.push_back(p.survival);
        c.survival_lower.push_back(p.survival_lower);
        c.survival_upper.push_back(p.survival_upper);
        c.hazard.push_back(p.hazard);
        c.hazard_lower.push_back(p.hazard_lower);
        c.hazard_upper.push_back(p.hazard_upper);
      }
      curves.push_back(std::move(c));
    }
  }
  return curves;
}

std::string curves_csv(const std::vector<TrajectoryCurve>& curves) {
  std::string out = "group,time,surv,surv_lo,surv_hi,haz,haz_lo,haz_hi\n";
  for (const auto& c : curves) {
    std::string g = c.group;
    if (g.find_first_of(",\"") != std::string::npos) {
      std::string q = "\"";
      for (char ch : g) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      g = q + "\"";
    }
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      out += g + "," + fmt(c.times[i]) + "," + fmt(c.survival[i]) + "," + fmt(c.survival_lower[i]) + "," +
             fmt(c.survival_upper[i]) + "," + fmt(c.hazard[i]) + "," + fmt(c.hazard_lower[i]) + "," +
             fmt(c.hazard_upper[i]) + "\n";
    }
  }
  return out;
}

}  // namespace parmsurv
