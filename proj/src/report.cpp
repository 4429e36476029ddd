#include "parmsurv/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "parmsurv/inference.hpp"

namespace parmsurv {

namespace {

using json = nlohmann::ordered_json;

std::string pad(const std::string& s, std::size_t w, bool left) {
  if (s.size() >= w) return s;
  return left ? s + std::string(w - s.size(), ' ') : std::string(w - s.size(), ' ') + s;
}

std::string render(const std::vector<std::vector<std::string>>& cells) {
  std::vector<std::size_t> width;
  for (const auto& row : cells) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
  }
  std::string out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) line += "  ";
      line += pad(row[j], width[j], j == 0);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json rows_json(const std::vector<EstimateRow>& rows) {
  json a = json::array();
  for (const auto& r : rows)
    a.push_back({{"variable", r.label}, {"estimate", number(r.estimate)}, {"se", number(r.se)},
                 {"ci_lower", number(r.lower)}, {"ci_upper", number(r.upper)}, {"t", number(r.t)},
                 {"p", number(r.p)}});
  return a;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    a.push_back(row);
  }
  return a;
}

json fit_json(const FitResult& f) {
  json j;
  if (!f.stratum.empty()) j["stratum"] = f.stratum;
  j["n"] = f.n;
  j["k"] = f.k;
  j["loglik"] = number(f.loglik);
  j["aic"] = number(f.aic);
  j["bic"] = number(f.bic);
  j["converged"] = f.convergence.converged();
  j["iterations"] = f.convergence.iterations;
  j["gradient_norm"] = number(f.convergence.gradient_norm);
  j["inference_ok"] = f.inference_ok;
  if (!f.inference_ok) j["inference_message"] = f.inference_message;
  j["covariance_kind"] = to_string(f.covariance_kind);
  j["estimates"] = rows_json(f.rows);
  j["optimizer_scale_estimates"] = rows_json(f.log_rows);
  json labels = json::array();
  for (const auto& s : f.model.layout.slots) labels.push_back(s.label);
  j["covariance_labels"] = labels;
  j["covariance"] = f.inference_ok ? matrix_json(f.cov_original) : json(nullptr);
  j["covariance_optimizer_scale"] = f.inference_ok ? matrix_json(f.cov_optim) : json(nullptr);
  return j;
}

std::string fit_section(const FitResult& f, bool log_result) {
  std::string out = estimates_table(f.rows);
  if (log_result) out += "\n" + estimates_table(f.log_rows, "Parameter Estimates (optimizer scale)");
  if (!f.inference_ok) out += "\nWARNING: inference failed: " + f.inference_message + "\n";
  out += "\n" + criteria_line(f.loglik, f.aic, f.bic);
  return out;
}

}  // namespace

std::string format_fixed(double v, int decimals) {
  if (std::isnan(v)) return ".";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string estimates_table(const std::vector<EstimateRow>& rows, const std::string& title) {
  std::vector<std::vector<std::string>> cells{
      {"Variable", "Estimate", "S.E.", "CI Lower", "CI Upper", "t Value", "Pr>|t|"}};
  for (const auto& r : rows)
    cells.push_back({r.label, format_fixed(r.estimate, 5), format_fixed(r.se, 5), format_fixed(r.lower, 5),
                     format_fixed(r.upper, 5), format_fixed(r.t, 2), format_p_value(r.p)});
  return title + "\n" + render(cells);
}

std::string criteria_line(double loglik, double aic, double bic) {
  return render({{"Log-likelihood", "AIC", "BIC"},
                 {format_fixed(loglik, 3), format_fixed(aic, 3), format_fixed(bic, 3)}});
}

std::string prediction_table(const std::vector<Prediction>& predictions) {
  std::vector<std::vector<std::string>> cells{
      {"time", "covariates", "Survival", "Survival SE", "Hazard", "Hazard SE"}};
  for (const auto& p : predictions) {
    char t[40];
    std::snprintf(t, sizeof t, "%g", p.time);
    cells.push_back({t, p.group, format_fixed(p.survival, 5), format_fixed(p.survival_se, 5),
                     format_fixed(p.hazard, 5), format_fixed(p.hazard_se, 5)});
  }
  return "Prediction\n" + render(cells);
}

std::string deletion_log(const ObservationSet& data) {
  std::string out = "Observations read: " + std::to_string(data.input_rows) + "\n";
  out += "Observations used: " + std::to_string(data.size()) + "\n";
  out += "Observations deleted: " + std::to_string(data.deletions.total()) + "\n";
  for (std::size_t r = 0; r < kDeletionReasonCount; ++r) {
    const auto reason = static_cast<DeletionReason>(r);
    if (data.deletions.count(reason))
      out += "  " + std::string(to_string(reason)) + ": " + std::to_string(data.deletions.count(reason)) + "\n";
  }
  return out;
}

std::string convergence_record(const Convergence& c, Algorithm algorithm) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "Optimizer: %s\nStatus: %s\nIterations: %d\nGradient norm: %.3e\n",
                std::string(to_string(algorithm)).c_str(), c.converged() ? "converged" : "NOT converged",
                c.iterations, c.gradient_norm);
  std::string out = buf;
  if (!c.message.empty()) out += "Message: " + c.message + "\n";
  return out;
}

std::string render_report(const ReportInput& in) {
  const auto& f = *in.fit;
  std::string out = "Parametric survival model: " + f.model.dist().name() + "\n";
  out += "Observations used: " + std::to_string(f.n) + "\n\n";
  if (f.stratified()) {
    for (const auto& s : f.strata) out += "Stratum " + s.stratum + " (n=" + std::to_string(s.n) + ")\n" + fit_section(s, in.log_result) + "\n";
    out += "Pooled over strata (weights n_s/n)\n" + estimates_table(f.rows);
    if (in.log_result) out += "\n" + estimates_table(f.log_rows, "Parameter Estimates (optimizer scale)");
    if (!f.inference_ok) out += "\nWARNING: inference failed: " + f.inference_message + "\n";
    out += "\nSum over strata\n" + criteria_line(f.loglik, f.aic, f.bic);
  } else {
    out += fit_section(f, in.log_result);
  }
  if (in.predictions) {
    out += "\n" + prediction_table(*in.predictions);
    if (in.bands_clamped) out += "Confidence bands are clamped to [0,1] for survival and [0,inf) for hazard.\n";
  }
  out += "\nConvergence\n" + convergence_record(f.convergence, in.algorithm);
  if (in.data) out += "\nData\n" + deletion_log(*in.data);
  if (!in.files.empty()) {
    out += "\nFiles\n";
    for (const auto& file : in.files) out += "  " + file + "\n";
  }
  return out;
}

std::string results_json(const ReportInput& in) {
  const auto& f = *in.fit;
  json j;
  json cfg = json::object();
  for (const auto& [k, v] : in.config) cfg[k] = v;
  j["config"] = cfg;
  j["distribution"] = f.model.dist().name();
  j["optimizer"] = std::string(to_string(in.algorithm));
  j["alpha"] = f.alpha;
  j["fit"] = fit_json(f);
  if (f.stratified()) {
    json s = json::array();
    for (const auto& st : f.strata) s.push_back(fit_json(st));
    j["strata"] = s;
    j["pooled_criteria_are_sums"] = true;
  }
  if (in.data) {
    json d;
    d["input_rows"] = in.data->input_rows;
    d["used"] = in.data->size();
    json reasons = json::object();
    for (std::size_t r = 0; r < kDeletionReasonCount; ++r) {
      const auto reason = static_cast<DeletionReason>(r);
      reasons[to_string(reason)] = in.data->deletions.count(reason);
    }
    d["deleted"] = reasons;
    json rows = json::array();
    for (const auto& [row, reason] : in.data->deletions.rows) rows.push_back({{"row", row + 1}, {"reason", to_string(reason)}});
    d["deleted_rows"] = rows;
    j["data"] = d;
  }
  if (in.predictions) {
    json p = json::array();
    for (const auto& pr : *in.predictions)
      p.push_back({{"group", pr.group},
                   {"time", pr.time},
                   {"survival", number(pr.survival)},
                   {"survival_se", number(pr.survival_se)},
                   {"survival_lower", number(pr.survival_lower)},
                   {"survival_upper", number(pr.survival_upper)},
                   {"hazard", number(pr.hazard)},
                   {"hazard_se", number(pr.hazard_se)},
                   {"hazard_lower", number(pr.hazard_lower)},
                   {"hazard_upper", number(pr.hazard_upper)}});
    j["predictions"] = p;
    j["bands_clamped"] = in.bands_clamped;
  }
  json files = json::array();
  for (const auto& file : in.files) files.push_back(file);
  j["files"] = files;
  return j.dump(2) + "\n";
}

}  // namespace parmsurv
