#include "parmsurv/optimize.hpp"

#include <cctype>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>

#include "parmsurv/errors.hpp"

namespace parmsurv {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 30;
constexpr double kMaxStep = 20.0;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class Maximizer {
 public:
  Maximizer(const Objective& f, const FitOptions& opts, Eigen::VectorXd lower, Eigen::VectorXd upper)
      : f_(f), opts_(opts), lo_(std::move(lower)), up_(std::move(upper)),
        log_(opts.log ? *opts.log : std::cerr) {}

  OptimResult run(const Eigen::VectorXd& x0) {
    x_ = project(x0);
    fx_ = eval(x_);
    if (!std::isfinite(fx_)) throw DomainError("objective is not finite at the starting values");
    switch (opts_.algorithm) {
      case Algorithm::NewtonRaphson: newton(); break;
      case Algorithm::QuasiNewton: quasi_newton(); break;
      case Algorithm::TrustRegion: trust_region(); break;
    }
    if (opts_.verbosity >= 1) {
      log_ << (conv_.converged() ? "converged" : "NOT converged") << " after " << conv_.iterations
           << " iterations (" << to_string(opts_.algorithm) << "): loglik " << std::setprecision(10) << fx_
           << ", gradient norm " << std::setprecision(3) << conv_.gradient_norm;
      if (!conv_.message.empty()) log_ << " [" << conv_.message << "]";
      log_ << "\n";
    }
    return {x_, fx_, conv_};
  }

 private:
  double eval(const Eigen::VectorXd& x) const {
    try {
      const double v = f_(x);
      return std::isfinite(v) ? v : kNegInf;
    } catch (const DomainError&) {
      return kNegInf;
    }
  }

  Eigen::VectorXd project(const Eigen::VectorXd& x) const { return x.cwiseMax(lo_).cwiseMin(up_); }

  // Central differences, switching to one-sided where a bound is within reach.
  Eigen::VectorXd gradient(const Eigen::VectorXd& x, double fx) const {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd y = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double h = gradient_step(x[j]);
      const bool room_up = x[j] + h <= up_[j];
      const bool room_down = x[j] - h >= lo_[j];
      double fp = fx, fm = fx, xp = x[j], xm = x[j];
      if (room_up) {
        y[j] = x[j] + h;
        xp = y[j];
        fp = eval(y);
      }
      if (room_down) {
        y[j] = x[j] - h;
        xm = y[j];
        fm = eval(y);
      }
      y[j] = x[j];
      g[j] = (fp - fm) / (xp - xm);
    }
    return g;
  }

  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const {
    return central_hessian([this](const Eigen::VectorXd& y) { return eval(y); }, x);
  }

  double projected_norm(const Eigen::VectorXd& g) const {
    double s = 0;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      if ((x_[j] <= lo_[j] && g[j] < 0) || (x_[j] >= up_[j] && g[j] > 0)) continue;
      s += g[j] * g[j];
    }
    return std::sqrt(s);
  }

  void trace(int iter, double gnorm) const {
    if (opts_.verbosity < 2) return;
    log_ << "iter " << std::setw(3) << iter << "  loglik " << std::setprecision(12) << fx_;
    if (opts_.verbosity >= 3) log_ << "  |grad| " << std::setprecision(4) << gnorm;
    log_ << "\n";
  }

  void trace_hessian(const Eigen::MatrixXd& H) const {
    if (opts_.verbosity < 5 || !H.allFinite()) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-H, Eigen::EigenvaluesOnly);
    const auto ev = es.eigenvalues().cwiseAbs();
    log_ << "        Hessian condition number " << std::setprecision(4) << ev.maxCoeff() / ev.minCoeff()
         << "\n";
  }

  static Eigen::VectorXd steepest(const Eigen::VectorXd& g) { return g / std::max(1.0, g.norm()); }

  // Backtracking from the full step with Armijo acceptance.
  bool line_search(const Eigen::VectorXd& g, Eigen::VectorXd d) {
    if (d.norm() > kMaxStep) d *= kMaxStep / d.norm();
    double t = 1.0;
    for (int i = 0; i <= kMaxHalvings; ++i, t *= 0.5) {
      const Eigen::VectorXd xn = project(x_ + t * d);
      const double slope = g.dot(xn - x_);
      if (slope <= 0) continue;
      const double fn = eval(xn);
      if (fn > kNegInf && fn >= fx_ + kArmijo * slope) {
        if (opts_.verbosity >= 4)
          log_ << "        step " << std::setprecision(4) << t << " after " << i << " halvings, |dx| "
               << (xn - x_).norm() << "\n";
        x_ = xn;
        fx_ = fn;
        return true;
      }
    }
    return false;
  }

  // Newton direction for maximization when -H is positive definite.
  static bool newton_direction(const Eigen::MatrixXd& H, const Eigen::VectorXd& g, Eigen::VectorXd& d) {
    if (!H.allFinite()) return false;
    Eigen::LLT<Eigen::MatrixXd> llt(-H);
    if (llt.info() != Eigen::Success) return false;
    d = llt.solve(g);
    return d.allFinite() && g.dot(d) > 0;
  }

  // One extra Newton step after the tolerance is met, kept only if it does
  // not lower the objective.
  void polish(const Eigen::VectorXd& g) {
    Eigen::VectorXd d;
    if (!newton_direction(hessian(x_), g, d)) return;
    const Eigen::VectorXd xn = project(x_ + d);
    const double fn = eval(xn);
    if (fn >= fx_) {
      x_ = xn;
      fx_ = fn;
    }
  }

  bool converged_at(int iter, const Eigen::VectorXd& g) {
    conv_.iterations = iter;
    conv_.gradient_norm = projected_norm(g);
    trace(iter, conv_.gradient_norm);
    if (conv_.gradient_norm <= opts_.gradient_tolerance) {
      conv_.status = ConvergenceStatus::Converged;
      return true;
    }
    return false;
  }

  void finish_not_converged(const std::string& why) {
    conv_.status = ConvergenceStatus::NotConverged;
    conv_.message = why;
    conv_.gradient_norm = projected_norm(gradient(x_, fx_));
  }

  void newton() {
    for (int iter = 0;; ++iter) {
      const Eigen::VectorXd g = gradient(x_, fx_);
      if (converged_at(iter, g)) {
        polish(g);
        return;
      }
      if (iter >= opts_.max_iterations) return finish_not_converged("iteration limit reached");
      const Eigen::MatrixXd H = hessian(x_);
      trace_hessian(H);
      Eigen::VectorXd d;
      const bool newton_ok = newton_direction(H, g, d);
      if (!newton_ok && opts_.verbosity >= 4) log_ << "        Hessian not negative definite; steepest ascent\n";
      if (newton_ok && line_search(g, d)) continue;
      if (!line_search(g, steepest(g))) return finish_not_converged("line search failed");
    }
  }

  void quasi_newton() {
    const auto k = x_.size();
    Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(k, k);
    {
      const Eigen::MatrixXd H = hessian(x_);
      trace_hessian(H);
      if (H.allFinite()) {
        Eigen::LLT<Eigen::MatrixXd> llt(-H);
        if (llt.info() == Eigen::Success) Hinv = llt.solve(Eigen::MatrixXd::Identity(k, k));
      }
    }
    Eigen::VectorXd g = gradient(x_, fx_);
    for (int iter = 0;; ++iter) {
      if (converged_at(iter, g)) return;
      if (iter >= opts_.max_iterations) return finish_not_converged("iteration limit reached");
      Eigen::VectorXd d = Hinv * g;
      if (!(g.dot(d) > 0)) {
        Hinv.setIdentity();
        d = steepest(g);
      }
      const Eigen::VectorXd x_old = x_;
      if (!line_search(g, d)) {
        Hinv.setIdentity();
        if (!line_search(g, steepest(g))) return finish_not_converged("line search failed");
      }
      const Eigen::VectorXd g_new = gradient(x_, fx_);
      const Eigen::VectorXd s = x_ - x_old;
      const Eigen::VectorXd y = g - g_new;  // gradient change of -f
      const double sy = s.dot(y);
      if (sy > 1e-12 * s.norm() * y.norm()) {
        const double rho = 1.0 / sy;
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(k, k);
        Hinv = (I - rho * s * y.transpose()) * Hinv * (I - rho * y * s.transpose()) + rho * s * s.transpose();
      }
      g = g_new;
    }
  }

  void trust_region() {
    double radius = 1.0;
    constexpr double kMaxRadius = 1e3;
    Eigen::VectorXd g = gradient(x_, fx_);
    Eigen::MatrixXd H = hessian(x_);
    for (int iter = 0;; ++iter) {
      if (converged_at(iter, g)) {
        polish(g);
        return;
      }
      if (iter >= opts_.max_iterations) return finish_not_converged("iteration limit reached");
      trace_hessian(H);
      const Eigen::MatrixXd B = -H;
      const double gnorm = g.norm();
      const double gBg = B.allFinite() ? g.dot(B * g) : -1.0;
      Eigen::VectorXd pn;
      const bool newton_ok = newton_direction(H, g, pn);
      Eigen::VectorXd p;
      if (newton_ok && pn.norm() <= radius) {
        p = pn;
      } else if (gBg <= 0) {
        p = (radius / gnorm) * g;
      } else {
        const Eigen::VectorXd pu = (g.dot(g) / gBg) * g;
        if (pu.norm() >= radius || !newton_ok) {
          p = std::min(1.0, radius / pu.norm()) * pu;
        } else {
          // Dogleg: pu + τ (pn - pu) with |p| = radius.
          const Eigen::VectorXd diff = pn - pu;
          const double a = diff.squaredNorm();
          const double b = 2.0 * pu.dot(diff);
          const double c = pu.squaredNorm() - radius * radius;
          const double tau = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
          p = pu + tau * diff;
        }
      }
      const Eigen::VectorXd xn = project(x_ + p);
      const Eigen::VectorXd step = xn - x_;
      const double predicted = g.dot(step) - 0.5 * step.dot((B.allFinite() ? B : Eigen::MatrixXd::Zero(B.rows(), B.cols())) * step);
      const double fn = eval(xn);
      const double rho = (fn > kNegInf && predicted > 0) ? (fn - fx_) / predicted : -1.0;
      if (rho < 0.25) {
        radius = 0.25 * std::max(step.norm(), 1e-3 * radius);
      } else if (rho > 0.75 && step.norm() >= 0.99 * radius) {
        radius = std::min(2.0 * radius, kMaxRadius);
      }
      if (opts_.verbosity >= 4)
        log_ << "        trust radius " << std::setprecision(4) << radius << ", ratio " << rho << "\n";
      if (rho > kArmijo) {
        x_ = xn;
        fx_ = fn;
        g = gradient(x_, fx_);
        H = hessian(x_);
      } else if (radius < 1e-12) {
        return finish_not_converged("trust region collapsed");
      }
    }
  }

  const Objective& f_;
  const FitOptions& opts_;
  Eigen::VectorXd lo_, up_;
  std::ostream& log_;
  Eigen::VectorXd x_;
  double fx_ = 0.0;
  Convergence conv_;
};

}  // namespace

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  std::string s(name);
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "newton" || s == "newtonraphson" || s == "newton-raphson" || s == "nr") return Algorithm::NewtonRaphson;
  if (s == "quasinewton" || s == "quasi-newton" || s == "qn" || s == "quanew" || s == "bfgs") return Algorithm::QuasiNewton;
  if (s == "trustregion" || s == "trust-region" || s == "trust" || s == "tr") return Algorithm::TrustRegion;
  return std::nullopt;
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::NewtonRaphson: return "newton-raphson";
    case Algorithm::QuasiNewton: return "quasi-newton";
    case Algorithm::TrustRegion: return "trust-region";
  }
  return "?";
}

OptimResult maximize(const Objective& f, const Eigen::VectorXd& x0, const FitOptions& options,
                     const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  if (!x0.allFinite()) throw DomainError("starting values are not finite");
  if (!(options.gradient_tolerance > 0)) throw InputError("gradient tolerance must be positive");
  if (options.max_iterations < 1) throw InputError("iteration limit must be positive");
  return Maximizer(f, options, lower, upper).run(x0);
}

OptimResult maximize(const Objective& f, const Eigen::VectorXd& x0, const FitOptions& options) {
  const auto inf = std::numeric_limits<double>::infinity();
  return maximize(f, x0, options, Eigen::VectorXd::Constant(x0.size(), -inf),
                  Eigen::VectorXd::Constant(x0.size(), inf));
}

}  // namespace parmsurv
