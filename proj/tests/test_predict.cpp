#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "parmsurv/errors.hpp"
#include "parmsurv/predict.hpp"

using namespace parmsurv;

namespace {

ObservationSet load(const std::string& name) {
  ResponseSpec rs;
  rs.t1 = "time";
  rs.censor = "delta";
  return normalize_response(load_table(testutil::data_path(name)), rs);
}

FitResult exp_fit(bool robust = false) {
  std::mt19937_64 rng(11);
  auto spec = testutil::spec_for(DistributionId::Exp);
  spec.robust = robust;
  return fit_model(make_context(spec, testutil::censored(testutil::exp_sample_csv(rng, 80, 0.5, 3.0))));
}

}  // namespace

TEST_CASE("intercept-only exponential predictions are exact") {
  const auto fit = exp_fit();
  const auto rows = prediction_rows(parse_table("time\n0.5\n1\n4\n"), fit.model);
  const auto pred = predict_at(fit, rows);
  REQUIRE(pred.size() == 3);
  const double b = fit.estimates[0], se = fit.rows[0].se, rate = std::exp(-b);
  for (const auto& p : pred) {
    CAPTURE(p.time);
    const double s = std::exp(-rate * p.time);
    CHECK(std::fabs(p.survival - s) < 1e-10);
    CHECK(std::fabs(p.survival_se - s * p.time * rate * se) < 1e-4);
    CHECK(std::fabs(p.hazard - rate) < 1e-12);
    CHECK(std::fabs(p.hazard_se - rate * se) < 1e-4);
    CHECK(p.group == "overall");
    CHECK(p.survival_lower <= p.survival);
    CHECK(p.survival_upper >= p.survival);
  }
}

TEST_CASE("trajectory grid") {
  const auto fit = exp_fit();
  const auto rows = prediction_rows(parse_table("time\n1\n2\n"), fit.model);
  const auto curves = trajectories(fit, rows, 5.0);
  REQUIRE(curves.size() == 1);
  const auto& c = curves[0];
  REQUIRE(c.times.size() == 100);
  CHECK(c.times.front() == doctest::Approx(0.05));
  CHECK(c.times.back() == 5.0);
  for (std::size_t j = 1; j < 100; ++j) {
    CHECK(c.survival[j] <= c.survival[j - 1]);
    CHECK(c.hazard[j] == doctest::Approx(c.hazard[0]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(trajectories(fit, rows, 0.0), InputError);
  const auto bare = trajectories(fit, rows, 5.0, false);
  CHECK(std::isnan(bare[0].survival_lower[0]));
  CHECK(bare[0].survival[10] == c.survival[10]);
}

TEST_CASE("robust flag moves bands only") {
  const auto reg = exp_fit(false);
  const auto rob = exp_fit(true);
  const auto rows = prediction_rows(parse_table("time\n1.5\n"), reg.model);
  const auto a = predict_at(reg, rows)[0];
  const auto b = predict_at(rob, rows)[0];
  CHECK(a.survival == b.survival);
  CHECK(a.hazard == b.hazard);
  CHECK(a.survival_se != b.survival_se);
  CHECK(a.survival_lower != b.survival_lower);
}

TEST_CASE("prediction table validation") {
  const auto d = load("simulated.csv");
  const auto fit = fit_model(testutil::context(d, DistributionId::Exp, {"age", "sex"}, {}, {"male"}));
  CHECK_THROWS_AS(prediction_rows(parse_table("sex,age\nfemale,0\n"), fit.model), InputError);
  CHECK_THROWS_AS(prediction_rows(parse_table("time,age\n1,0\n"), fit.model), InputError);
  CHECK_THROWS_AS(prediction_rows(parse_table("time,sex,age\n1,other,0\n"), fit.model), InputError);
  CHECK_THROWS_AS(prediction_rows(parse_table("time,sex,age\n-1,male,0\n"), fit.model), InputError);
  const auto rows = prediction_rows(load_table(testutil::data_path("pred.csv")), fit.model);
  REQUIRE(rows.size() == 2);
  CHECK(group_label(rows[0]) == "sex=female, age=0");
  CHECK(group_label(rows[1], "b") == "sex=male, age=0, stratum=b");
}

TEST_CASE("duplicate covariate rows give one curve") {
  const auto d = load("simulated.csv");
  const auto fit = fit_model(testutil::context(d, DistributionId::Weibull, {"age", "sex"}, {}, {"male"}));
  const auto rows = prediction_rows(parse_table("time,sex,age\n1,female,0\n3,female,0\n1,male,0\n"), fit.model);
  const auto curves = trajectories(fit, rows, 4.0);
  REQUIRE(curves.size() == 2);
  CHECK(curves[0].group == "sex=female, age=0");
  CHECK(curves[1].group == "sex=male, age=0");
  const auto csv = curves_csv(curves);
  CHECK(csv.rfind("group,time,surv,surv_lo,surv_hi,haz,haz_lo,haz_hi\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 201);
}

TEST_CASE("survival ordering follows the sign of the female coefficient") {
  for (const char* name : {"simulated.csv", "first10.csv"}) {
    CAPTURE(name);
    const auto d = load(name);
    const auto fit = fit_model(testutil::context(d, DistributionId::Exp, {"age", "sex"}, {}, {"male"}));
    REQUIRE(fit.convergence.converged());
    const auto rows = prediction_rows(load_table(testutil::data_path("pred.csv")), fit.model);
    const auto p = predict_at(fit, rows);
    const double coef = fit.estimates[2];
    CHECK((p[0].survival > p[1].survival) == (coef > 0));
    CHECK((p[0].hazard < p[1].hazard) == (coef > 0));
  }
}

TEST_CASE("female survival is above male on the simulated data") {
  const auto d = load("simulated.csv");
  const auto fit = fit_model(testutil::context(d, DistributionId::GenGamma, {"age", "sex"}, {}, {"male"}));
  REQUIRE(fit.convergence.converged());
  CHECK(fit.estimates[2] > 0);
  const auto p = predict_at(fit, prediction_rows(load_table(testutil::data_path("pred.csv")), fit.model));
  CHECK(p[0].survival > p[1].survival);
  CHECK(p[0].hazard < p[1].hazard);
}

TEST_CASE("stratified fits predict per stratum") {
  std::mt19937_64 rng(21);
  std::ostringstream csv;
  csv << "time,delta,grp\n";
  for (const char* g : {"a", "b"}) {
    std::istringstream in(testutil::exp_sample_csv(rng, 40, g[0] == 'a' ? 0.0 : 1.0, 3.0));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) csv << line << "," << g << "\n";
  }
  ResponseSpec rs;
  rs.t1 = "time";
  rs.censor = "delta";
  rs.strata = {"grp"};
  const auto fit = fit_model(testutil::context(normalize_response(parse_table(csv.str()), rs), DistributionId::Exp));
  const auto p = predict_at(fit, prediction_rows(parse_table("time\n1\n"), fit.model));
  REQUIRE(p.size() == 2);
  CHECK(p[0].group == "stratum=a");
  CHECK(p[1].stratum == "b");
  CHECK(p[0].survival < p[1].survival);
}
