#include "parmsurv/design.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "parmsurv/errors.hpp"

namespace parmsurv {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool same_name(const std::string& a, const std::string& b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string level_label(const Cell& cell) {
  if (cell.is_numeric()) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, cell.number);
    (void)ec;
    return std::string(buf, p);
  }
  return trim(cell.text);
}

std::vector<std::string> CovariateSchema::encoded_columns() const {
  if (!is_class()) return {name};
  std::vector<std::string> cols;
  for (const auto& lv : levels)
    if (lv != reference) cols.push_back(name + "_" + lv);
  return cols;
}

std::vector<std::string> parse_refgrp(const std::string& text) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(',', start);
    out.push_back(trim(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<CovariateSchema> infer_schema(const ObservationSet& data,
                                          const std::vector<std::string>& covars,
                                          const std::vector<std::string>& class_cov,
                                          const std::vector<std::string>& refgrp) {
  std::vector<CovariateSchema> schema;
  for (const auto& name : covars) {
    if (std::any_of(schema.begin(), schema.end(),
                    [&](const CovariateSchema& s) { return same_name(s.name, name); }))
      continue;
    auto j = data.covariate_index(name);
    if (!j) throw InputError("unknown covariate '" + name + "'");

    CovariateSchema s;
    s.name = data.covariate_names[*j];
    bool any_text = false;
    for (const auto& o : data.observations)
      if (o.covariates[*j].is_text()) any_text = true;
    bool listed = std::any_of(class_cov.begin(), class_cov.end(),
                              [&](const std::string& c) { return same_name(c, name); });
    if (any_text || listed) {
      s.kind = CovariateSchema::Kind::Classification;
      if (any_text) {
        std::set<std::string> lv;
        for (const auto& o : data.observations)
          if (!o.covariates[*j].is_missing()) lv.insert(level_label(o.covariates[*j]));
        s.levels.assign(lv.begin(), lv.end());
      } else {
        std::set<double> lv;
        for (const auto& o : data.observations)
          if (!o.covariates[*j].is_missing()) lv.insert(o.covariates[*j].number);
        for (double v : lv) s.levels.push_back(level_label(Cell::numeric(v, "")));
      }
      if (s.levels.empty()) throw InputError("classification covariate '" + name + "' has no levels");
      s.reference = s.levels.front();
    }
    schema.push_back(std::move(s));
  }
  for (const auto& c : class_cov) {
    if (!std::any_of(schema.begin(), schema.end(),
                     [&](const CovariateSchema& s) { return same_name(s.name, c); }))
      throw InputError("class_cov entry '" + c + "' is not a model covariate");
  }

  if (!refgrp.empty()) {
    std::size_t n_class = std::count_if(schema.begin(), schema.end(),
                                        [](const CovariateSchema& s) { return s.is_class(); });
    if (refgrp.size() != n_class)
      throw InputError("refgrp has " + std::to_string(refgrp.size()) + " entries but there are " +
                       std::to_string(n_class) + " classification covariates");
    std::size_t k = 0;
    for (auto& s : schema) {
      if (!s.is_class()) continue;
      const auto& ref = refgrp[k++];
      if (std::find(s.levels.begin(), s.levels.end(), ref) == s.levels.end())
        throw InputError("reference level '" + ref + "' not observed for covariate '" + s.name + "'");
      s.reference = ref;
    }
  }
  return schema;
}

const CovariateSchema& find_schema(const std::vector<CovariateSchema>& schema,
                                   const std::string& name) {
  for (const auto& s : schema)
    if (same_name(s.name, name)) return s;
  throw InputError("unknown covariate '" + name + "'");
}

Eigen::VectorXd encode_row(const std::vector<CovariateSchema>& schema,
                           const std::vector<std::string>& covariates,
                           const std::vector<const Cell*>& cells) {
  std::vector<double> row = {1.0};
  for (std::size_t c = 0; c < covariates.size(); ++c) {
    const auto& s = find_schema(schema, covariates[c]);
    const Cell& cell = *cells[c];
    if (cell.is_missing()) throw InputError("missing value for covariate '" + s.name + "'");
    if (s.is_class()) {
      const auto label = level_label(cell);
      if (std::find(s.levels.begin(), s.levels.end(), label) == s.levels.end())
        throw InputError("level '" + label + "' of covariate '" + s.name + "' was not seen in the fitted data");
      for (const auto& lv : s.levels)
        if (lv != s.reference) row.push_back(lv == label ? 1.0 : 0.0);
    } else {
      if (!cell.is_numeric())
        throw InputError("non-numeric value '" + cell.text + "' for continuous covariate '" + s.name + "'");
      row.push_back(cell.number);
    }
  }
  return Eigen::Map<Eigen::VectorXd>(row.data(), static_cast<Eigen::Index>(row.size()));
}

std::vector<DesignMatrix> build_design(const ObservationSet& data,
                                       const std::vector<CovariateSchema>& schema,
                                       const std::vector<std::string>& parameters,
                                       const std::map<std::string, std::vector<std::string>>& param_covars) {
  for (const auto& [param, covs] : param_covars) {
    if (std::find(parameters.begin(), parameters.end(), param) == parameters.end())
      throw InputError("covariates assigned to unknown parameter '" + param + "'");
    for (const auto& c : covs) find_schema(schema, c);
  }

  std::vector<DesignMatrix> out;
  for (const auto& param : parameters) {
    DesignMatrix dm;
    dm.parameter = param;
    dm.columns = {"Intercept"};
    std::vector<std::string> covs;
    if (auto it = param_covars.find(param); it != param_covars.end()) covs = it->second;
    std::vector<std::size_t> idx;
    for (const auto& c : covs) {
      const auto& s = find_schema(schema, c);
      for (auto& col : s.encoded_columns()) dm.columns.push_back(col);
      auto j = data.covariate_index(c);
      if (!j) throw InputError("unknown covariate '" + c + "'");
      idx.push_back(*j);
    }
    const auto n = static_cast<Eigen::Index>(data.size());
    dm.values.resize(n, static_cast<Eigen::Index>(dm.columns.size()));
    std::vector<const Cell*> cells(covs.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& o = data.observations[static_cast<std::size_t>(i)];
      for (std::size_t c = 0; c < covs.size(); ++c) cells[c] = &o.covariates[idx[c]];
      dm.values.row(i) = encode_row(schema, covs, cells).transpose();
    }
    out.push_back(std::move(dm));
  }
  return out;
}

}  // namespace parmsurv
