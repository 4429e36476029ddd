#include "parmsurv/custom.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "parmsurv/errors.hpp"
#include "parmsurv/expr.hpp"

namespace parmsurv {

namespace {

// Tolerance for a derived log-survival slightly above 0 from rounding.
constexpr double kLogSurvivalSlack = 1e-12;

const char* role_name(FunctionRole r) {
  switch (r) {
    case FunctionRole::Density: return "density";
    case FunctionRole::Hazard: return "hazard";
    case FunctionRole::Survival: return "survival";
  }
  return "?";
}

struct BoundFunction {
  expr::Expr tree;
  bool log_form = false;
};

class CustomDistribution final : public Distribution {
 public:
  explicit CustomDistribution(const CustomSpec& spec) {
    params_.push_back({spec.location, ParamConstraint::Class::Free});
    for (const auto& a : spec.ancillary) {
      if (a == spec.location) throw InputError("parameter '" + a + "' is both location and ancillary");
      auto cls = std::find(spec.positive.begin(), spec.positive.end(), a) != spec.positive.end()
                     ? ParamConstraint::Class::Positive
                     : ParamConstraint::Class::Free;
      params_.push_back({a, cls});
    }
    for (const auto& p : spec.positive) {
      if (std::none_of(params_.begin(), params_.end(), [&](const ParamConstraint& c) { return c.name == p; }))
        throw InputError("log_transf_param '" + p + "' is not a declared parameter");
      if (p == spec.location) throw InputError("the location parameter cannot be log-transformed");
    }

    symbols_.push_back("time");
    for (const auto& p : params_) symbols_.push_back(p.name);
    for (auto& a : expr::parse_prep(spec.prep)) {
      if (std::find(symbols_.begin(), symbols_.end(), a.name) != symbols_.end())
        throw InputError("custom_prep assigns '" + a.name + "', which is already defined");
      prep_.push_back(expr::bind(std::move(a.value), symbols_));
      symbols_.push_back(a.name);
    }

    for (const auto& f : spec.functions) {
      auto& slot = role_slot(f.role);
      if (slot) throw InputError(std::string("custom ") + role_name(f.role) + " given more than once");
      slot = BoundFunction{expr::bind(expr::parse(f.source), symbols_), f.log_form};
    }
    const int provided = static_cast<int>(density_.has_value()) + static_cast<int>(hazard_.has_value()) +
                         static_cast<int>(survival_.has_value());
    if (provided != 2)
      throw InputError("exactly two of density, hazard and survival must be provided for a custom distribution");
  }

  std::string name() const override { return "custom"; }
  const std::vector<ParamConstraint>& parameters() const override { return params_; }

  double log_survival(std::span<const double> p, double t) const override {
    const auto env = environment(p, t);
    if (survival_) {
      const double ls = log_value(*survival_, env, t, "survival");
      if (ls > kLogSurvivalSlack) throw improper(t, std::exp(ls));
      return std::min(ls, 0.0);
    }
    const double ls = log_value(*density_, env, t, "density") - log_value(*hazard_, env, t, "hazard");
    if (ls > kLogSurvivalSlack) throw improper(t, std::exp(ls));
    return std::min(ls, 0.0);
  }

  double log_density(std::span<const double> p, double t) const override {
    const auto env = environment(p, t);
    if (density_) return log_value(*density_, env, t, "density");
    return log_value(*hazard_, env, t, "hazard") + log_value(*survival_, env, t, "survival");
  }

 private:
  std::optional<BoundFunction>& role_slot(FunctionRole r) {
    switch (r) {
      case FunctionRole::Density: return density_;
      case FunctionRole::Hazard: return hazard_;
      case FunctionRole::Survival: return survival_;
    }
    return density_;
  }

  std::vector<double> environment(std::span<const double> p, double t) const {
    check_params(*this, p, t);
    std::vector<double> env(symbols_.size());
    env[0] = t;
    std::copy(p.begin(), p.end(), env.begin() + 1);
    std::size_t k = 1 + p.size();
    for (const auto& stmt : prep_) {
      env[k] = expr::evaluate_bound(stmt, env);
      ++k;
    }
    return env;
  }

  static double log_value(const BoundFunction& f, std::span<const double> env, double t, const char* what) {
    const double v = expr::evaluate_bound(f.tree, env);
    if (f.log_form) return v;
    if (!(v > 0))
      throw DomainError(std::string("custom ") + what + " is not positive at time=" + std::to_string(t));
    return std::log(v);
  }

  static DomainError improper(double t, double s) {
    return DomainError("improper custom distribution: survival " + std::to_string(s) +
                       " outside [0, 1] at time=" + std::to_string(t));
  }

  std::vector<ParamConstraint> params_;
  std::vector<std::string> symbols_;
  std::vector<expr::Expr> prep_;
  std::optional<BoundFunction> density_, hazard_, survival_;
};

}  // namespace

std::shared_ptr<const Distribution> assemble(const CustomSpec& spec) {
  return std::make_shared<CustomDistribution>(spec);
}

}  // namespace parmsurv
