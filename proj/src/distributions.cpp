#include "parmsurv/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "parmsurv/errors.hpp"
#include "parmsurv/special.hpp"

namespace parmsurv {

using special::log1mexp;
using special::softplus;

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

using PC = ParamConstraint::Class;

const std::vector<ParamConstraint>& params_for(DistributionId id) {
  static const std::vector<ParamConstraint> exp = {{"beta", PC::Free}};
  static const std::vector<ParamConstraint> two_scale = {{"beta", PC::Free}, {"sigma", PC::Positive}};
  static const std::vector<ParamConstraint> gompertz = {{"beta", PC::Free}, {"nu", PC::NonZero}};
  static const std::vector<ParamConstraint> gengamma = {
      {"beta", PC::Free}, {"sigma", PC::Positive}, {"lambda", PC::NonZero}};
  static const std::vector<ParamConstraint> genf = {
      {"beta", PC::Free}, {"sigma", PC::Positive}, {"q", PC::Free}, {"p", PC::Positive}};
  static const std::vector<ParamConstraint> genf_orig = {
      {"beta", PC::Free}, {"sigma", PC::Positive}, {"m1", PC::Positive}, {"m2", PC::Positive}};
  switch (id) {
    case DistributionId::Exp: return exp;
    case DistributionId::Weibull:
    case DistributionId::Gamma:
    case DistributionId::Lnorm:
    case DistributionId::Llogis: return two_scale;
    case DistributionId::Gompertz: return gompertz;
    case DistributionId::GenGamma: return gengamma;
    case DistributionId::GenF: return genf;
    case DistributionId::GenFOrig: return genf_orig;
  }
  return exp;
}

struct LogSF {
  double log_s;
  double log_f;  // log density
  double log_cdf;
};

// Generalized gamma with a = 1/λ², u = a·exp(λ(log t - β)/σ).
LogSF gengamma_kernel(double beta, double sigma, double lambda, double t, bool need_cdf) {
  const double a = 1.0 / (lambda * lambda);
  const double w = (std::log(t) - beta) / sigma;
  const double log_u = std::log(a) + lambda * w;
  const double u = std::exp(log_u);
  LogSF r{};
  r.log_f = std::log(std::fabs(lambda)) - std::log(sigma) - std::log(t) + a * log_u - u - std::lgamma(a);
  if (lambda > 0) {
    r.log_s = special::log_reg_upper_inc_gamma(a, u);
    if (need_cdf) r.log_cdf = special::log_reg_lower_inc_gamma(a, u);
  } else {
    r.log_s = special::log_reg_lower_inc_gamma(a, u);
    if (need_cdf) r.log_cdf = special::log_reg_upper_inc_gamma(a, u);
  }
  return r;
}

// Generalized F in terms of (m1, m2, δ); S = I_x(m2, m1) with
// x = 1 / (1 + (m1/m2)(e^{-β} t)^{δ/σ}).
LogSF genf_kernel(double beta, double sigma, double m1, double m2, double delta, double t, bool need_cdf) {
  const double s = delta * (std::log(t) - beta) / sigma;
  const double r = s + std::log(m1 / m2);
  const double log_x = -softplus(r);
  const double log_y = -softplus(-r);
  const double x = std::exp(log_x), y = std::exp(log_y);
  LogSF out{};
  out.log_s = special::log_reg_inc_beta(x, y, m2, m1);
  if (need_cdf) out.log_cdf = special::log_reg_inc_beta(y, x, m1, m2);
  out.log_f = std::log(delta) + m1 * s + m1 * std::log(m1 / m2) - std::log(t) - std::log(sigma) -
              special::log_beta(m1, m2) - (m1 + m2) * softplus(r);
  return out;
}

struct GenFShape {
  double m1, m2, delta;
};

GenFShape genf_shape_from_qp(double q, double p) {
  const double delta = std::sqrt(q * q + 2.0 * p);
  // δ ± q formed without cancellation: (δ - q)(δ + q) = 2p.
  const double dpq = q >= 0 ? delta + q : 2.0 * p / (delta - q);
  const double dmq = q >= 0 ? 2.0 * p / (delta + q) : delta - q;
  return {2.0 / (delta * dpq), 2.0 / (delta * dmq), delta};
}

class Builtin final : public Distribution {
 public:
  explicit Builtin(DistributionId id) : id_(id) {}

  std::string name() const override { return std::string(to_string(id_)); }
  const std::vector<ParamConstraint>& parameters() const override { return params_for(id_); }
  bool log_time_init() const override { return id_ != DistributionId::Gompertz; }

  double log_survival(std::span<const double> p, double t) const override { return eval(p, t, false).log_s; }
  double log_density(std::span<const double> p, double t) const override { return eval(p, t, false).log_f; }
  double log_cdf(std::span<const double> p, double t) const override { return eval(p, t, true).log_cdf; }

 private:
  LogSF eval(std::span<const double> p, double t, bool need_cdf) const {
    check_params(*this, p, t);
    const double beta = p[0];
    LogSF r{};
    switch (id_) {
      case DistributionId::Exp:
      case DistributionId::Weibull: {
        const double sigma = id_ == DistributionId::Exp ? 1.0 : p[1];
        const double z = (std::log(t) - beta) / sigma;
        const double ez = std::exp(z);
        r.log_s = -ez;
        r.log_f = z - ez - std::log(sigma) - std::log(t);
        if (need_cdf) r.log_cdf = log1mexp(-ez);
        return r;
      }
      case DistributionId::Gamma:
        return gengamma_kernel(beta, p[1], p[1], t, need_cdf);
      case DistributionId::Lnorm: {
        const double sigma = p[1];
        const double z = (std::log(t) - beta) / sigma;
        r.log_s = special::log_normal_sf(z);
        r.log_f = -0.5 * z * z - std::log(sigma) - std::log(t) - kLogSqrt2Pi;
        if (need_cdf) r.log_cdf = special::log_normal_cdf(z);
        return r;
      }
      case DistributionId::Gompertz: {
        const double nu = p[1];
        const double cum = std::exp(-beta) * std::expm1(nu * t) / nu;
        r.log_s = -cum;
        r.log_f = -beta + nu * t - cum;
        if (need_cdf) r.log_cdf = log1mexp(-cum);
        return r;
      }
      case DistributionId::Llogis: {
        const double k = std::sqrt(2.0) / p[1];
        const double z = k * (std::log(t) - beta);
        r.log_s = -softplus(z);
        r.log_f = std::log(k) - std::log(t) + z - 2.0 * softplus(z);
        if (need_cdf) r.log_cdf = -softplus(-z);
        return r;
      }
      case DistributionId::GenGamma:
        return gengamma_kernel(beta, p[1], p[2], t, need_cdf);
      case DistributionId::GenF: {
        const auto sh = genf_shape_from_qp(p[2], p[3]);
        return genf_kernel(beta, p[1], sh.m1, sh.m2, sh.delta, t, need_cdf);
      }
      case DistributionId::GenFOrig: {
        const double m1 = p[2], m2 = p[3];
        return genf_kernel(beta, p[1], m1, m2, std::sqrt(1.0 / m1 + 1.0 / m2), t, need_cdf);
      }
    }
    return r;
  }

  DistributionId id_;
};

}  // namespace

double Distribution::log_cdf(std::span<const double> params, double t) const {
  return log1mexp(std::min(0.0, log_survival(params, t)));
}

double Distribution::survival(std::span<const double> params, double t) const {
  return std::exp(log_survival(params, t));
}

double Distribution::density(std::span<const double> params, double t) const {
  return std::exp(log_density(params, t));
}

double Distribution::hazard(std::span<const double> params, double t) const {
  const double ls = log_survival(params, t);
  if (!std::isfinite(ls))
    throw DomainError("hazard overflow: survival underflows to 0 at t=" + std::to_string(t) + " for " + name());
  const double h = std::exp(log_density(params, t) - ls);
  if (!std::isfinite(h)) throw DomainError("hazard overflow at t=" + std::to_string(t) + " for " + name());
  return h;
}

std::optional<DistributionId> parse_distribution(std::string_view name) {
  std::string s(name);
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "exp" || s == "exponential") return DistributionId::Exp;
  if (s == "weibull") return DistributionId::Weibull;
  if (s == "gamma") return DistributionId::Gamma;
  if (s == "lnorm" || s == "lognormal" || s == "log-normal") return DistributionId::Lnorm;
  if (s == "gompertz") return DistributionId::Gompertz;
  if (s == "llogis" || s == "loglogistic" || s == "log-logistic") return DistributionId::Llogis;
  if (s == "gengamma") return DistributionId::GenGamma;
  if (s == "genf") return DistributionId::GenF;
  if (s == "genf_orig") return DistributionId::GenFOrig;
  return std::nullopt;
}

std::string_view to_string(DistributionId id) {
  switch (id) {
    case DistributionId::Exp: return "exp";
    case DistributionId::Weibull: return "weibull";
    case DistributionId::Gamma: return "gamma";
    case DistributionId::Lnorm: return "lnorm";
    case DistributionId::Gompertz: return "gompertz";
    case DistributionId::Llogis: return "llogis";
    case DistributionId::GenGamma: return "gengamma";
    case DistributionId::GenF: return "genf";
    case DistributionId::GenFOrig: return "genf_orig";
  }
  return "?";
}

const std::vector<ParamConstraint>& builtin_parameters(DistributionId id) { return params_for(id); }

std::shared_ptr<const Distribution> make_builtin(DistributionId id) { return std::make_shared<Builtin>(id); }

void check_params(const Distribution& dist, std::span<const double> params, double t) {
  const auto& decl = dist.parameters();
  if (params.size() != decl.size())
    throw DomainError(dist.name() + ": expected " + std::to_string(decl.size()) + " parameters, got " +
                      std::to_string(params.size()));
  for (std::size_t k = 0; k < decl.size(); ++k) {
    const double v = params[k];
    if (!std::isfinite(v)) throw DomainError(dist.name() + ": parameter " + decl[k].name + " is not finite");
    if (decl[k].cls == PC::Positive && !(v > 0))
      throw DomainError(dist.name() + ": parameter " + decl[k].name + " must be positive, got " + std::to_string(v));
    if (decl[k].cls == PC::NonZero && v == 0)
      throw DomainError(dist.name() + ": parameter " + decl[k].name + " must be nonzero");
  }
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("time must be positive and finite, got " + std::to_string(t));
}

PrenticeQP genf_qp_from_m(double m1, double m2) {
  const double s = 1.0 / m1 + 1.0 / m2;
  return {(1.0 / m1 - 1.0 / m2) / std::sqrt(s), 2.0 / (m1 + m2)};
}

double survival(DistributionId id, std::span<const double> params, double t) {
  return make_builtin(id)->survival(params, t);
}
double density(DistributionId id, std::span<const double> params, double t) {
  return make_builtin(id)->density(params, t);
}
double hazard(DistributionId id, std::span<const double> params, double t) {
  return make_builtin(id)->hazard(params, t);
}

}  // namespace parmsurv
