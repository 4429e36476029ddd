#pragma once

#include <memory>
#include <string>
#include <vector>

#include "parmsurv/distributions.hpp"

namespace parmsurv {

enum class FunctionRole { Density, Hazard, Survival };

struct CustomFunction {
  FunctionRole role;
  bool log_form = false;
  std::string source;
};

struct CustomSpec {
  std::vector<CustomFunction> functions;  // exactly two distinct roles
  std::string prep;                       // "mu=exp(-beta);"
  std::string location = "beta";
  std::vector<std::string> ancillary;     // param_anc
  std::vector<std::string> positive;      // log_transf_param
};

// Builds a kernel from two of the three functions. The third is derived
// pointwise from h = f / S. A survival derived as f / h that falls outside
// [0, 1] raises DomainError naming the time point.
std::shared_ptr<const Distribution> assemble(const CustomSpec& spec);

}  // namespace parmsurv
