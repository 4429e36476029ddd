#pragma once

#include <string>
#include <vector>

#include "parmsurv/predict.hpp"

namespace parmsurv {

enum class PlotKind { Survival, Hazard };

// 800x500 line chart, one polyline per curve, shaded bands when requested.
// Throws InputError when there are no curves or a curve has fewer than two points.
std::string render_svg(const std::vector<TrajectoryCurve>& curves, PlotKind kind, bool bands);

// Writes surv.svg and haz.svg into dir; returns the written paths.
std::vector<std::string> emit_plots(const std::vector<TrajectoryCurve>& curves, const std::string& dir, bool bands);

}  // namespace parmsurv
