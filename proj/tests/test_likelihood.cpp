#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "parmsurv/errors.hpp"
#include "parmsurv/likelihood.hpp"

using namespace parmsurv;

namespace {

LikelihoodContext interval_ctx(const std::string& csv, DistributionId id = DistributionId::Exp) {
  ResponseSpec rs;
  rs.t1 = "t1";
  rs.t2 = "t2";
  return make_context(testutil::spec_for(id), normalize_response(parse_table(csv), rs));
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

}  // namespace

TEST_CASE("param_at applies links") {
  const auto d = testutil::censored("time,delta,x\n1,1,1\n");
  const auto w = testutil::context(d, DistributionId::Weibull);
  CHECK(param_at(vec({0.3, 0.0}), w, 0)[1] == 1.0);
  const auto e = testutil::context(d, DistributionId::Exp, {"x"});
  CHECK(param_at(vec({0.5, -1.0}), e, 0)[0] == -0.5);
  const auto gg = testutil::context(testutil::censored("time,delta,sex\n1,1,female\n2,1,male\n"), DistributionId::GenGamma,
                                    {}, {{"lambda", {"sex"}}}, {"male"});
  const auto p = param_at(vec({0.0, 0.0, 1.20726, -0.30016}), gg, 0);
  CHECK(p[2] == doctest::Approx(0.90710).epsilon(1e-12));
  CHECK_THROWS_AS(param_at(vec({0.0}), w, 0), DomainError);
}

TEST_CASE("individual log-likelihood by censoring kind") {
  const auto ctx = interval_ctx("t1,t2\n1,1\n2,\n1,2\n,3\n");
  const auto th = vec({0.0});
  CHECK(individual_loglik(th, ctx, 0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(individual_loglik(th, ctx, 1) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(individual_loglik(th, ctx, 2) == doctest::Approx(std::log(std::exp(-1.0) - std::exp(-2.0))).epsilon(1e-13));
  CHECK(individual_loglik(th, ctx, 2) == doctest::Approx(-1.45867).epsilon(1e-5));
  CHECK(individual_loglik(th, ctx, 3) == doctest::Approx(std::log(1 - std::exp(-3.0))).epsilon(1e-13));
}

TEST_CASE("total log-likelihood weighting and additivity") {
  const auto single = testutil::censored("time,delta\n1.5,1\n");
  const auto twice = testutil::censored("time,delta\n1.5,1\n1.5,1\n");
  ResponseSpec rs;
  rs.t1 = "time";
  rs.censor = "delta";
  rs.weight = "w";
  const auto weighted = normalize_response(parse_table("time,delta,w\n1.5,1,3\n"), rs);
  const auto th = vec({0.4});
  const double one = total_loglik(th, testutil::context(single, DistributionId::Exp));
  CHECK(total_loglik(th, testutil::context(twice, DistributionId::Exp)) == 2 * one);
  CHECK(total_loglik(th, testutil::context(weighted, DistributionId::Exp)) == 3 * one);
  const auto doubled = normalize_response(parse_table("time,delta,w\n1.5,1,2\n"), rs);
  CHECK(total_loglik(th, testutil::context(doubled, DistributionId::Exp)) ==
        total_loglik(th, testutil::context(twice, DistributionId::Exp)));
}

TEST_CASE("empty data is an error") {
  const auto empty = testutil::censored("time,delta\n-1,1\n");
  CHECK(empty.empty());
  CHECK_THROWS_WITH_AS(total_loglik(vec({0.0}), testutil::context(empty, DistributionId::Exp)),
                       doctest::Contains("no valid observations"), DomainError);
}

TEST_CASE("unusable likelihood terms name the observation") {
  // S(1) - S(1 + 1e-300) is zero in floating point.
  const auto ctx = interval_ctx("t1,t2\n1,1.0000000000000002\n", DistributionId::Exp);
  CHECK_THROWS_AS(individual_loglik(vec({30.0}), ctx, 0), DomainError);
  // log f below log(1e-300).
  const auto far = testutil::context(testutil::censored("time,delta\n1000,1\n"), DistributionId::Exp);
  CHECK_THROWS_WITH_AS(individual_loglik(vec({0.0}), far, 0), doctest::Contains("observation"), DomainError);
}

TEST_CASE("score contributions match hand differentiation") {
  const auto d = testutil::censored("time,delta\n0.7,1\n2.5,0\n1.1,1\n");
  const auto ctx = testutil::context(d, DistributionId::Exp);
  for (double beta : {-2.0, -1.0, 0.0, 0.5, 2.0}) {
    const auto U = score_contributions(vec({beta}), ctx);
    const double g = std::exp(-beta);
    CHECK(std::fabs(U(0, 0) - (-1 + 0.7 * g)) < 1e-6);
    CHECK(std::fabs(U(1, 0) - 2.5 * g) < 1e-6);
    CHECK(std::fabs(U(2, 0) - (-1 + 1.1 * g)) < 1e-6);
  }
}

TEST_CASE("scores sum to zero at the MLE") {
  const auto d = testutil::censored("time,delta\n0.7,1\n2.5,0\n1.1,1\n3.0,1\n");
  const auto ctx = testutil::context(d, DistributionId::Exp);
  const double mle = std::log((0.7 + 2.5 + 1.1 + 3.0) / 3.0);
  const auto U = score_contributions(vec({mle}), ctx);
  CHECK(std::fabs((ctx.weights().transpose() * U)(0, 0)) < 1e-4);
}

TEST_CASE("interval likelihood approaches density times width") {
  const double t = 1.3, w = 1e-6;
  std::ostringstream csv;
  csv.precision(17);
  csv << "t1,t2\n" << t << "," << t + w << "\n";
  const auto ctx = interval_ctx(csv.str(), DistributionId::Weibull);
  const auto th = vec({0.2, std::log(0.8)});
  const double f = density(DistributionId::Weibull, std::vector<double>{0.2, 0.8}, t);
  CHECK(std::exp(individual_loglik(th, ctx, 0)) / (f * w) == doctest::Approx(1.0).epsilon(1e-3));
}
