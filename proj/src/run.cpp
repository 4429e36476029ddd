#include "parmsurv/run.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "parmsurv/custom.hpp"
#include "parmsurv/data.hpp"
#include "parmsurv/design.hpp"
#include "parmsurv/fit.hpp"
#include "parmsurv/predict.hpp"
#include "parmsurv/report.hpp"
#include "parmsurv/svg.hpp"

namespace parmsurv {

namespace {

std::string lower_case(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Maps a user-written parameter name onto the distribution's spelling.
std::string canonical_parameter(const std::string& name, const std::vector<std::string>& params) {
  for (const auto& p : params)
    if (lower_case(p) == lower_case(name)) return p;
  throw InputError("unknown parameter '" + name + "'");
}

std::map<std::string, double> canonical_values(const std::string& text, const std::vector<std::string>& params) {
  std::map<std::string, double> out;
  for (const auto& [key, v] : parse_named_values(text)) {
    const auto colon = key.find(':');
    std::string k = canonical_parameter(key.substr(0, colon), params);
    if (colon != std::string::npos) k += key.substr(colon);
    out[k] = v;
  }
  return out;
}

std::shared_ptr<const Distribution> build_distribution(const RunConfig& c) {
  if (!c.custom()) {
    const auto id = parse_distribution(c.dist);
    if (!id) throw InputError("unknown distribution '" + c.dist + "'");
    return make_builtin(*id);
  }
  CustomSpec spec;
  const std::pair<const std::optional<std::string>*, CustomFunction> forms[] = {
      {&c.density, {FunctionRole::Density, false, {}}},         {&c.log_density, {FunctionRole::Density, true, {}}},
      {&c.hazard, {FunctionRole::Hazard, false, {}}},           {&c.log_hazard, {FunctionRole::Hazard, true, {}}},
      {&c.survival, {FunctionRole::Survival, false, {}}},       {&c.log_survival, {FunctionRole::Survival, true, {}}},
  };
  for (const auto& [text, fn] : forms) {
    if (!*text) continue;
    for (const auto& existing : spec.functions)
      if (existing.role == fn.role) throw InputError("a custom function and its log form were both given");
    auto f = fn;
    f.source = **text;
    spec.functions.push_back(f);
  }
  spec.prep = c.custom_prep;
  spec.location = c.location;
  spec.ancillary = split_names(c.param_anc);
  spec.positive = split_names(c.log_transf_param);
  for (const auto& p : spec.positive)
    if (std::find(spec.ancillary.begin(), spec.ancillary.end(), p) == spec.ancillary.end())
      throw InputError("log_transf_param '" + p + "' is not listed in param_anc");
  return assemble(spec);
}

std::vector<std::string> missing_tokens(const RunConfig& c) {
  auto tokens = kDefaultMissingTokens;
  std::stringstream ss(c.missing);
  std::string tok;
  while (std::getline(ss, tok, ',')) tokens.push_back(tok);
  return tokens;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write " + path.string());
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& c, const std::string& dist_name) {
  std::vector<std::pair<std::string, std::string>> e;
  auto add = [&](const char* k, const std::string& v) {
    if (!v.empty()) e.emplace_back(k, v);
  };
  auto add_opt = [&](const char* k, const std::optional<std::string>& v) {
    if (v) e.emplace_back(k, *v);
  };
  add("data", c.data);
  add("t1", c.t1);
  add_opt("t2", c.t2);
  add_opt("censor", c.censor);
  if (c.censor) add("censval", c.censval);
  add("covars", c.covars);
  add("anc", c.anc);
  add("class_cov", c.class_cov);
  add("refgrp", c.refgrp);
  add("strata", c.strata);
  add("weight", c.weight);
  add("dist", dist_name);
  add_opt("density", c.density);
  add_opt("hazard", c.hazard);
  add_opt("survival", c.survival);
  add_opt("log_density", c.log_density);
  add_opt("log_hazard", c.log_hazard);
  add_opt("log_survival", c.log_survival);
  add("custom_prep", c.custom_prep);
  add("param_anc", c.param_anc);
  if (c.custom()) add("location", c.location);
  add("log_transf_param", c.log_transf_param);
  add("lower", c.lower);
  add("upper", c.upper);
  add("init", c.init);
  add("robust", c.robust ? "yes" : "no");
  std::ostringstream a;
  a << c.alpha;
  add("alpha", a.str());
  add("algorithm", c.algorithm);
  add("pred", c.pred);
  if (c.pred_max_time) {
    std::ostringstream t;
    t << *c.pred_max_time;
    add("pred_max_time", t.str());
  }
  if (!c.pred.empty()) add("pred_plot_cl", c.pred_plot_cl ? "yes" : "no");
  return e;
}

}  // namespace

bool RunConfig::custom() const {
  return density || hazard || survival || log_density || log_hazard || log_survival;
}

bool parse_flag(const std::string& text) {
  const auto t = lower_case(text);
  if (t == "yes" || t == "y" || t == "t" || t == "true" || t == "1" || t == "on") return true;
  if (t == "no" || t == "n" || t == "f" || t == "false" || t == "0" || t == "off") return false;
  throw InputError("expected yes/no, got '" + text + "'");
}

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig c;
  CLI::App app{"Parametric survival model fitting"};
  app.name("parmsurv");
  std::string robust = "no", log_result = "no", plot_cl = "yes";
  std::string t2, censor;
  std::string density, hazard, survival, log_density, log_hazard, log_survival;
  double pred_max_time = 0.0;

  app.add_option("--data", c.data, "input CSV file")->required();
  app.add_option("--t1", c.t1, "time column (or left bound)")->required();
  auto* o_t2 = app.add_option("--t2", t2, "right bound column (interval format)");
  auto* o_censor = app.add_option("--censor", censor, "censoring indicator column");
  app.add_option("--censval", c.censval, "value of the censoring indicator meaning censored (default 0)");
  app.add_option("--covars", c.covars, "covariates of the location parameter");
  app.add_option("--anc", c.anc, "ancillary covariates, e.g. \"sigma(age sex), lambda(sex)\"");
  app.add_option("--class-cov,--class_cov", c.class_cov, "numeric covariates to treat as classification");
  app.add_option("--refgrp", c.refgrp, "reference levels, comma separated");
  app.add_option("--strata", c.strata, "stratification columns");
  app.add_option("--weight", c.weight, "case weight column");
  auto* o_dist = app.add_option("--dist", c.dist, "exp, weibull, gamma, lnorm, gompertz, llogis, gengamma, genf, genf_orig");
  auto* o_density = app.add_option("--density", density, "custom density expression");
  auto* o_hazard = app.add_option("--hazard", hazard, "custom hazard expression");
  auto* o_survival = app.add_option("--survival", survival, "custom survival expression");
  auto* o_ldensity = app.add_option("--log-density,--log_density", log_density, "custom log density expression");
  auto* o_lhazard = app.add_option("--log-hazard,--log_hazard", log_hazard, "custom log hazard expression");
  auto* o_lsurvival = app.add_option("--log-survival,--log_survival", log_survival, "custom log survival expression");
  app.add_option("--custom-prep,--custom_prep", c.custom_prep, "statements such as \"mu=exp(-beta);\"");
  app.add_option("--param-anc,--param_anc", c.param_anc, "ancillary parameters of a custom distribution");
  app.add_option("--location", c.location, "location parameter of a custom distribution (default beta)");
  app.add_option("--log-transf-param,--log_transf_param", c.log_transf_param, "custom parameters optimized on the log scale");
  app.add_option("--lower", c.lower, "lower bounds, e.g. \"alpha=0\"");
  app.add_option("--upper", c.upper, "upper bounds");
  app.add_option("--init", c.init, "initial values, e.g. \"sigma=1, beta:age=0.1\"");
  app.add_option("--robust", robust, "sandwich covariance (yes/no)");
  app.add_option("--alpha", c.alpha, "significance level (default 0.05)");
  app.add_option("--log-result,--log_result", log_result, "also report optimizer-scale estimates (yes/no)");
  app.add_option("--verbosity,--nlp-print,--nlp_print", c.verbosity, "optimizer trace level 0-5")->check(CLI::Range(0, 5));
  app.add_option("--algorithm", c.algorithm, "nr, quanew or trust");
  app.add_option("--maxiter", c.max_iterations, "maximum optimizer iterations")->check(CLI::PositiveNumber);
  app.add_option("--gtol", c.gradient_tolerance, "gradient-norm tolerance")->check(CLI::PositiveNumber);
  app.add_option("--pred", c.pred, "prediction CSV with a time column");
  auto* o_pmax = app.add_option("--pred-max-time,--pred_max_time", pred_max_time, "longest time of the trajectory plots");
  app.add_option("--pred-plot-cl,--pred_plot_cl", plot_cl, "draw confidence bands (yes/no)");
  app.add_option("--out", c.out_dir, "output directory (default $PARMSURV_OUTDIR or .)");
  app.add_option("--missing", c.missing, "extra missing-value tokens, comma separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw InputError(std::string(e.what()) + "\n\n" + app.help());
  }

  auto fail = [&](const std::string& msg) { throw InputError(msg + "\n\n" + app.help()); };
  if (o_t2->count()) c.t2 = t2;
  if (o_censor->count()) c.censor = censor;
  if (o_density->count()) c.density = density;
  if (o_hazard->count()) c.hazard = hazard;
  if (o_survival->count()) c.survival = survival;
  if (o_ldensity->count()) c.log_density = log_density;
  if (o_lhazard->count()) c.log_hazard = log_hazard;
  if (o_lsurvival->count()) c.log_survival = log_survival;
  if (o_pmax->count()) c.pred_max_time = pred_max_time;

  if (c.t2.has_value() == c.censor.has_value()) fail("exactly one of --t2 and --censor is required");
  if (o_dist->count() && c.custom()) fail("--dist cannot be combined with custom function expressions");
  if (!o_dist->count() && !c.custom()) fail("either --dist or custom function expressions are required");
  if (!c.custom() && (!c.custom_prep.empty() || !c.param_anc.empty() || !c.log_transf_param.empty()))
    fail("--custom-prep, --param-anc and --log-transf-param apply to custom distributions only");
  if (c.pred_max_time && c.pred.empty()) fail("--pred-max-time requires --pred");
  if (c.pred_max_time && !(*c.pred_max_time > 0)) fail("--pred-max-time must be positive");
  if (!parse_algorithm(c.algorithm)) fail("unknown algorithm '" + c.algorithm + "'");
  c.robust = parse_flag(robust);
  c.log_result = parse_flag(log_result);
  c.pred_plot_cl = parse_flag(plot_cl);
  return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  std::string dir = c.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("PARMSURV_OUTDIR");
    dir = env && *env ? env : ".";
  }
  try {
    const auto tokens = missing_tokens(c);
    const RawTable table = load_table(c.data, tokens);

    ModelSpec spec;
    spec.distribution = build_distribution(c);
    const auto params = spec.parameter_names();
    const auto covars = split_names(c.covars);
    if (!covars.empty()) spec.param_covars[spec.location()] = covars;
    for (const auto& [p, cv] : parse_anc(c.anc)) {
      const auto name = canonical_parameter(p, params);
      if (name == spec.location()) throw InputError("use --covars for the location parameter");
      spec.param_covars[name] = cv;
    }
    spec.init = canonical_values(c.init, params);
    spec.lower = canonical_values(c.lower, params);
    spec.upper = canonical_values(c.upper, params);
    spec.alpha = c.alpha;
    spec.robust = c.robust;
    spec.validate();

    ResponseSpec rs;
    rs.t1 = c.t1;
    rs.t2 = c.t2;
    rs.censor = c.censor;
    rs.censval = c.censval;
    if (!c.weight.empty()) rs.weight = c.weight;
    rs.strata = split_names(c.strata);
    rs.required_covariates = spec.all_covariates();
    ObservationSet data = normalize_response(table, rs);
    if (data.empty()) throw InputError("no valid observations after deletions");

    const auto ctx = make_context(spec, data, split_names(c.class_cov), parse_refgrp(c.refgrp));

    FitOptions options;
    options.algorithm = *parse_algorithm(c.algorithm);
    options.max_iterations = c.max_iterations;
    options.gradient_tolerance = c.gradient_tolerance;
    options.verbosity = c.verbosity;
    options.log = &err;
    const FitResult fit = fit_model(ctx, options);

    std::optional<std::vector<Prediction>> predictions;
    std::vector<TrajectoryCurve> curves;
    if (!c.pred.empty()) {
      const auto rows = prediction_rows(load_table(c.pred, tokens), ctx.model);
      predictions = predict_at(fit, rows);
      double t_max = 0.0;
      if (c.pred_max_time) {
        t_max = *c.pred_max_time;
      } else {
        for (const auto& o : data.observations) t_max = std::max(t_max, observed_time(o));
      }
      if (!rows.empty()) curves = trajectories(fit, rows, t_max, c.pred_plot_cl);
    }

    // Everything is computed; only now touch the output directory.
    fs::create_directories(dir);
    std::vector<std::string> files = {(fs::path(dir) / "report.txt").string(), (fs::path(dir) / "results.json").string()};
    std::string svg_surv, svg_haz;
    if (!curves.empty()) {
      svg_surv = render_svg(curves, PlotKind::Survival, c.pred_plot_cl);
      svg_haz = render_svg(curves, PlotKind::Hazard, c.pred_plot_cl);
      for (const char* name : {"curves.csv", "surv.svg", "haz.svg"}) files.push_back((fs::path(dir) / name).string());
    }

    ReportInput in;
    in.fit = &fit;
    in.data = &data;
    in.predictions = predictions ? &*predictions : nullptr;
    in.algorithm = options.algorithm;
    in.log_result = c.log_result;
    in.config = config_echo(c, c.custom() ? "custom" : spec.distribution->name());
    in.files = files;

    const std::string report = render_report(in);
    write_file(fs::path(dir) / "report.txt", report);
    write_file(fs::path(dir) / "results.json", results_json(in));
    if (!curves.empty()) {
      write_file(fs::path(dir) / "curves.csv", curves_csv(curves));
      write_file(fs::path(dir) / "surv.svg", svg_surv);
      write_file(fs::path(dir) / "haz.svg", svg_haz);
    }
    out << report;
    if (!fit.convergence.converged()) {
      err << "warning: optimizer did not converge: " << fit.convergence.message << "\n";
      return 2;
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.text;
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return run(config, out, err);
}

}  // namespace parmsurv
