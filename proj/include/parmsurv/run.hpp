#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "parmsurv/errors.hpp"

namespace parmsurv {

struct RunConfig {
  std::string data;
  std::string t1;
  std::optional<std::string> t2;
  std::optional<std::string> censor;
  std::string censval = "0";
  std::string covars;
  std::string anc;
  std::string class_cov;
  std::string refgrp;
  std::string strata;
  std::string weight;

  std::string dist;
  std::optional<std::string> density, hazard, survival;
  std::optional<std::string> log_density, log_hazard, log_survival;
  std::string custom_prep;
  std::string param_anc;
  std::string location = "beta";
  std::string log_transf_param;

  std::string lower;
  std::string upper;
  std::string init;
  bool robust = false;
  double alpha = 0.05;
  bool log_result = false;
  int verbosity = 0;
  std::string algorithm = "nr";
  int max_iterations = 200;
  double gradient_tolerance = 1e-6;

  std::string pred;
  std::optional<double> pred_max_time;
  bool pred_plot_cl = true;

  std::string out_dir;  // empty: $PARMSURV_OUTDIR, then "."
  std::string missing;  // extra missing-value tokens, comma separated

  bool custom() const;
};

// Thrown for --help; carries the help text.
struct HelpRequested {
  std::string text;
};

// yes/no/t/true/1 and f/false/n/0 (case-insensitive).
bool parse_flag(const std::string& text);

// Throws InputError with usage text on conflicting or missing flags.
RunConfig parse_args(int argc, const char* const* argv);

// Fits, predicts and writes report.txt, results.json and (with pred)
// curves.csv, surv.svg, haz.svg. Returns 0 when converged, 2 when not,
// 1 on input errors (nothing written).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args + run with error reporting; the CLI entry point.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace parmsurv
