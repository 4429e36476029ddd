#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "parmsurv/design.hpp"
#include "parmsurv/distributions.hpp"

namespace parmsurv {

enum class Link { Identity, Log };

struct ModelSpec {
  std::shared_ptr<const Distribution> distribution;
  // Parameter name -> covariates. The location parameter's entry holds `covars`.
  std::map<std::string, std::vector<std::string>> param_covars;
  // Keys are a parameter name (its intercept) or "param:column".
  std::map<std::string, double> init;
  // Original-scale box bounds keyed by parameter name.
  std::map<std::string, double> lower;
  std::map<std::string, double> upper;
  double alpha = 0.05;
  bool robust = false;

  const std::string& location() const;
  std::vector<std::string> parameter_names() const;
  // Every covariate referenced by any parameter, in first-appearance order
  // (location covariates first, then ancillary parameters in declared order).
  std::vector<std::string> all_covariates() const;
  void validate() const;  // throws InputError
};

struct Slot {
  std::string parameter;
  std::string column;  // "Intercept" or an encoded covariate column
  std::string label;   // report row label
  bool intercept = false;
  bool log_link = false;
  // Slot lives on the log scale and maps back by exp (intercept of an
  // intercept-only log-linked parameter).
  bool transformed = false;

  bool operator==(const Slot&) const = default;
};

struct ParameterLayout {
  std::vector<std::string> parameters;
  std::vector<Link> links;
  std::vector<std::size_t> offsets;  // first slot of each parameter
  std::vector<std::size_t> counts;
  std::vector<Slot> slots;

  std::size_t size() const { return slots.size(); }
  std::size_t parameter_index(const std::string& name) const;
  bool operator==(const ParameterLayout&) const = default;
};

std::vector<Link> default_links(const ModelSpec& spec);

ParameterLayout build_layout(const ModelSpec& spec, const std::vector<DesignMatrix>& designs);

// "sigma(age sex), lambda(sex)" -> {sigma: [age, sex], lambda: [sex]}.
std::map<std::string, std::vector<std::string>> parse_anc(const std::string& text);
// Whitespace (or comma) separated names.
std::vector<std::string> split_names(const std::string& text);
// "sigma=1, lambda=0.5" -> map. Keys may carry a column: "beta:age=0.1".
std::map<std::string, double> parse_named_values(const std::string& text);

}  // namespace parmsurv
