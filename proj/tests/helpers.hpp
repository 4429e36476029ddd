#pragma once

#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "parmsurv/data.hpp"
#include "parmsurv/distributions.hpp"
#include "parmsurv/likelihood.hpp"
#include "parmsurv/model.hpp"

namespace testutil {

using namespace parmsurv;

inline std::string data_path(const std::string& name) { return std::string(PARMSURV_TEST_DATA) + "/" + name; }

inline ObservationSet censored(const std::string& csv, std::vector<std::string> required = {}) {
  ResponseSpec rs;
  rs.t1 = "time";
  rs.censor = "delta";
  rs.required_covariates = std::move(required);
  return normalize_response(parse_table(csv), rs);
}

inline ModelSpec spec_for(DistributionId id, std::vector<std::string> covars = {},
                          std::map<std::string, std::vector<std::string>> anc = {}) {
  ModelSpec s;
  s.distribution = make_builtin(id);
  if (!covars.empty()) s.param_covars[s.location()] = std::move(covars);
  for (auto& [p, c] : anc) s.param_covars[p] = c;
  return s;
}

inline LikelihoodContext context(const ObservationSet& data, DistributionId id, std::vector<std::string> covars = {},
                                 std::map<std::string, std::vector<std::string>> anc = {},
                                 std::vector<std::string> refgrp = {}) {
  return make_context(spec_for(id, std::move(covars), std::move(anc)), data, {}, refgrp);
}

// Right-censored exponential sample with rate e^{-beta}; censoring is
// exponential with the given mean.
inline std::string exp_sample_csv(std::mt19937_64& rng, int n, double beta, double censor_mean) {
  std::exponential_distribution<double> ev(std::exp(-beta)), cv(1.0 / censor_mean);
  std::ostringstream os;
  os.precision(17);
  os << "time,delta\n";
  for (int i = 0; i < n; ++i) {
    const double t = ev(rng), c = cv(rng);
    os << std::min(t, c) << "," << (t <= c ? 1 : 0) << "\n";
  }
  return os.str();
}

// The two-covariate design of the worked examples: standardized age, a
// female indicator with probability 1/2, exponential event times with
// log-mean b1*age + b2*female and exponential censoring whose mean equals
// the average event time.
inline std::string regression_sample_csv(std::mt19937_64& rng, int n, double b1, double b2) {
  std::normal_distribution<double> age_dist(50.0, 10.0);
  std::bernoulli_distribution sex_dist(0.5);
  std::vector<double> age(n), t(n);
  std::vector<int> female(n);
  double mean = 0, sd = 0;
  for (int i = 0; i < n; ++i) {
    age[i] = age_dist(rng);
    mean += age[i];
  }
  mean /= n;
  for (double a : age) sd += (a - mean) * (a - mean);
  sd = std::sqrt(sd / (n - 1));
  double tmean = 0;
  for (int i = 0; i < n; ++i) {
    age[i] = (age[i] - mean) / sd;
    female[i] = sex_dist(rng);
    std::exponential_distribution<double> ev(std::exp(-(b1 * age[i] + b2 * female[i])));
    t[i] = ev(rng);
    tmean += t[i];
  }
  tmean /= n;
  std::exponential_distribution<double> cv(1.0 / tmean);
  std::ostringstream os;
  os.precision(17);
  os << "time,delta,age,sex\n";
  for (int i = 0; i < n; ++i) {
    const double c = cv(rng);
    os << std::min(t[i], c) << "," << (t[i] <= c ? 1 : 0) << "," << age[i] << "," << (female[i] ? "female" : "male")
       << "\n";
  }
  return os.str();
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1)));
  return g;
}

}  // namespace testutil
