#include <doctest.h>

#include <cmath>

#include "parmsurv/custom.hpp"
#include "parmsurv/distributions.hpp"
#include "parmsurv/errors.hpp"
#include "parmsurv/expr.hpp"

using namespace parmsurv;
using P = std::vector<double>;

namespace {

double eval(const std::string& src, const std::map<std::string, double>& b = {}) {
  return expr::evaluate(expr::parse(src), b);
}

}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(eval("mu*alpha*time**(alpha-1)", {{"mu", 1}, {"alpha", 2}, {"time", 3}}) == 6);
  CHECK(eval("-mu*time**alpha", {{"mu", 1}, {"time", 2}, {"alpha", 2}}) == -4);
  CHECK(eval("2**3**2") == 512);
  CHECK(eval("1+2*3-4/2") == 5);
  CHECK(eval("2**-1") == 0.5);
  CHECK(eval("-2**2") == -4);
  CHECK(eval("(1+2)*3") == 9);
  CHECK(eval("1e-2*100") == doctest::Approx(1.0));
}

TEST_CASE("functions") {
  CHECK(eval("time", {{"time", 7}}) == 7);
  CHECK(eval("exp(-beta)", {{"beta", 0}}) == 1);
  CHECK(eval("log(exp(2))") == doctest::Approx(2));
  CHECK(eval("sqrt(16) + abs(-3)") == 7);
  CHECK(eval("pow(2, 10)") == 1024);
}

TEST_CASE("syntax errors carry positions") {
  CHECK_THROWS_AS(expr::parse("exp(-(beta)"), ParseError);
  try {
    expr::parse("exp(-(beta)");
  } catch (const ParseError& e) {
    CHECK(e.position() == 3);
  }
  CHECK_THROWS_AS(expr::parse("1 +"), ParseError);
  CHECK_THROWS_AS(expr::parse("foo(1)"), ParseError);
  CHECK_THROWS_AS(expr::parse(""), ParseError);
  CHECK_THROWS_AS(expr::parse("2 3"), ParseError);
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(eval("log(0-1)"), DomainError);
  try {
    eval("1 + log(0-1)");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("log") != std::string::npos);
  }
  CHECK_THROWS_AS(eval("1/(x-x)", {{"x", 2}}), DomainError);
  CHECK_THROWS_AS(eval("sqrt(-1)"), DomainError);
  CHECK_THROWS_AS(eval("y + 1"), InputError);
}

TEST_CASE("round trip through the printer") {
  for (const char* src : {"mu*alpha*time**(alpha-1)", "-mu*time**alpha", "2**3**2", "-(a+b)/c - -d",
                          "exp(-beta)*pow(time, 2) + sqrt(abs(x))", "a-b-c", "a/b/c", "-x**2"}) {
    CAPTURE(src);
    const auto e = expr::parse(src);
    CHECK(expr::parse(expr::to_string(e)) == e);
  }
}

TEST_CASE("free identifiers and binding") {
  const auto e = expr::parse("mu*alpha*time**(alpha-1)");
  CHECK(expr::free_identifiers(e) == std::set<std::string>{"alpha", "mu", "time"});
  const auto b = expr::bind(e, {"time", "alpha", "mu"});
  const double env[] = {3.0, 2.0, 1.0};
  CHECK(expr::evaluate_bound(b, env) == 6);
  CHECK_THROWS_AS(expr::bind(e, {"time", "alpha"}), InputError);
}

TEST_CASE("prep statements") {
  const auto prog = expr::parse_prep("mu=exp(-beta); k = 2*mu;");
  REQUIRE(prog.size() == 2);
  CHECK(prog[0].name == "mu");
  CHECK(prog[1].name == "k");
  CHECK(expr::parse_prep("mu=exp(-beta)").size() == 1);
  CHECK_THROWS_AS(expr::parse_prep("=1;"), ParseError);
}

namespace {

CustomSpec weibull_ph() {
  CustomSpec s;
  s.functions = {{FunctionRole::Hazard, false, "mu*alpha*time**(alpha-1)"},
                 {FunctionRole::Survival, true, "-mu*time**alpha"}};
  s.prep = "mu=exp(-beta);";
  s.ancillary = {"alpha"};
  s.positive = {"alpha"};
  return s;
}

}  // namespace

TEST_CASE("custom Weibull PH derives the density") {
  const auto d = assemble(weibull_ph());
  REQUIRE(d->parameters().size() == 2);
  CHECK(d->parameters()[0].name == "beta");
  CHECK(d->parameters()[1].name == "alpha");
  CHECK(d->parameters()[1].cls == ParamConstraint::Class::Positive);
  const P at{0.0, 1.0};
  CHECK(d->survival(at, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(d->hazard(at, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d->density(at, 1.0) == doctest::Approx(0.367879).epsilon(1e-6));
}

TEST_CASE("custom Weibull PH matches the built-in Weibull") {
  const auto d = assemble(weibull_ph());
  // AFT beta_w, sigma  <->  PH beta = beta_w / sigma, alpha = 1 / sigma.
  const double bw = 0.4, sigma = 0.7;
  const P ph{bw / sigma, 1 / sigma};
  for (double t : {0.05, 0.5, 1.0, 4.0, 30.0}) {
    CHECK(d->survival(ph, t) == doctest::Approx(survival(DistributionId::Weibull, P{bw, sigma}, t)).epsilon(1e-12));
    CHECK(d->density(ph, t) == doctest::Approx(density(DistributionId::Weibull, P{bw, sigma}, t)).epsilon(1e-12));
  }
}

TEST_CASE("custom exponential from density and survival") {
  CustomSpec s;
  s.functions = {{FunctionRole::Density, false, "exp(-beta)*exp(-exp(-beta)*time)"},
                 {FunctionRole::Survival, false, "exp(-exp(-beta)*time)"}};
  const auto d = assemble(s);
  for (double t : {0.1, 1.0, 5.0}) CHECK(d->hazard(P{0.0}, t) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("custom distribution errors") {
  CustomSpec one;
  one.functions = {{FunctionRole::Hazard, false, "1"}};
  CHECK_THROWS_AS(assemble(one), InputError);

  CustomSpec three = weibull_ph();
  three.functions.push_back({FunctionRole::Density, false, "1"});
  CHECK_THROWS_AS(assemble(three), InputError);

  CustomSpec unknown = weibull_ph();
  unknown.functions[0].source = "mu*gamma*time";
  CHECK_THROWS_AS(assemble(unknown), InputError);

  // f / h = 2 > 1 is not a survival probability.
  CustomSpec improper;
  improper.functions = {{FunctionRole::Density, false, "2*exp(-time)"}, {FunctionRole::Hazard, false, "exp(-time)"}};
  const auto d = assemble(improper);
  CHECK_THROWS_AS(d->survival(P{0.0}, 1.0), DomainError);
}
