#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parmsurv {

enum class DistributionId { Exp, Weibull, Gamma, Lnorm, Gompertz, Llogis, GenGamma, GenF, GenFOrig };

struct ParamConstraint {
  enum class Class { Free, Positive, NonZero };
  std::string name;
  Class cls = Class::Free;
};

// Survival model kernel. Parameters are passed in the order of parameters().
class Distribution {
 public:
  virtual ~Distribution() = default;

  virtual std::string name() const = 0;
  virtual const std::vector<ParamConstraint>& parameters() const = 0;
  virtual std::size_t location_index() const { return 0; }
  // Built-ins that take the log-time mean/sd initialization (GG/GF families).
  virtual bool log_time_init() const { return false; }

  virtual double log_survival(std::span<const double> params, double t) const = 0;
  virtual double log_density(std::span<const double> params, double t) const = 0;
  // log F(t) = log(1 - S(t)); kernels override when they can avoid cancellation.
  virtual double log_cdf(std::span<const double> params, double t) const;

  double survival(std::span<const double> params, double t) const;
  double density(std::span<const double> params, double t) const;
  // f / S, formed in log space. Throws DomainError when S underflows to 0.
  double hazard(std::span<const double> params, double t) const;
};

std::optional<DistributionId> parse_distribution(std::string_view name);
std::string_view to_string(DistributionId id);
const std::vector<ParamConstraint>& builtin_parameters(DistributionId id);
std::shared_ptr<const Distribution> make_builtin(DistributionId id);

// Throws DomainError when params violate the declared constraint classes or
// when t is not positive.
void check_params(const Distribution& dist, std::span<const double> params, double t);

// Prentice (q, p) from the original (m1, m2) generalized F parameters.
struct PrenticeQP {
  double q;
  double p;
};
PrenticeQP genf_qp_from_m(double m1, double m2);

// Convenience wrappers over make_builtin(id).
double survival(DistributionId id, std::span<const double> params, double t);
double density(DistributionId id, std::span<const double> params, double t);
double hazard(DistributionId id, std::span<const double> params, double t);

}  // namespace parmsurv
