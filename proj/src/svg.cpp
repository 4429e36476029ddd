#include "parmsurv/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "parmsurv/errors.hpp"

namespace parmsurv {

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 70, kRight = 200, kTop = 40, kBottom = 60;
constexpr int kTicks = 10;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string render_svg(const std::vector<TrajectoryCurve>& curves, PlotKind kind, bool bands) {
  if (curves.empty()) throw InputError("no curves to plot");
  double xmax = 0.0, ymax = kind == PlotKind::Survival ? 1.0 : 0.0;
  for (const auto& c : curves) {
    if (c.times.size() < 2) throw InputError("a curve needs at least two points to plot");
    xmax = std::max(xmax, c.times.back());
    if (kind == PlotKind::Hazard) {
      for (std::size_t i = 0; i < c.times.size(); ++i) {
        if (std::isfinite(c.hazard[i])) ymax = std::max(ymax, c.hazard[i]);
        if (bands && std::isfinite(c.hazard_upper[i])) ymax = std::max(ymax, c.hazard_upper[i]);
      }
    }
  }
  if (kind == PlotKind::Hazard) ymax = ymax > 0 ? ymax * 1.05 : 1.0;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto X = [&](double t) { return kLeft + pw * t / xmax; };
  auto Y = [&](double v) { return kTop + ph * (1.0 - std::clamp(v, 0.0, ymax) / ymax); };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
  s += "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
       std::string(kind == PlotKind::Survival ? "Predicted survival" : "Predicted hazard") + "</text>\n";

  s += "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" + num(kTop + ph) + "\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(kTop + ph) + "\"/>\n";
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = xmax * i / kTicks, yv = ymax * i / kTicks;
    s += "<line x1=\"" + num(X(xv)) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(X(xv)) + "\" y2=\"" + num(kTop + ph + 5) + "\"/>\n";
    s += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(Y(yv)) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(Y(yv)) + "\"/>\n";
  }
  s += "</g>\n<g class=\"tick-labels\" font-size=\"11\">\n";
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = xmax * i / kTicks, yv = ymax * i / kTicks;
    s += "<text x=\"" + num(X(xv)) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" + tick_label(xv) + "</text>\n";
    s += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(Y(yv) + 4) + "\" text-anchor=\"end\">" + tick_label(yv) + "</text>\n";
  }
  s += "</g>\n";
  s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 15) + "\" text-anchor=\"middle\" font-size=\"13\">time</text>\n";
  s += "<text x=\"18\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
       num(kTop + ph / 2) + ")\">" + std::string(kind == PlotKind::Survival ? "probability" : "rate") + "</text>\n";

  for (std::size_t g = 0; g < curves.size(); ++g) {
    const auto& c = curves[g];
    const char* color = kPalette[g % std::size(kPalette)];
    const auto& y = kind == PlotKind::Survival ? c.survival : c.hazard;
    const auto& lo = kind == PlotKind::Survival ? c.survival_lower : c.hazard_lower;
    const auto& hi = kind == PlotKind::Survival ? c.survival_upper : c.hazard_upper;
    if (bands) {
      std::string pts;
      for (std::size_t i = 0; i < c.times.size(); ++i)
        if (std::isfinite(hi[i])) pts += num(X(c.times[i])) + "," + num(Y(hi[i])) + " ";
      for (std::size_t i = c.times.size(); i-- > 0;)
        if (std::isfinite(lo[i])) pts += num(X(c.times[i])) + "," + num(Y(lo[i])) + " ";
      if (!pts.empty()) {
        pts.pop_back();
        s += "<polygon class=\"band\" points=\"" + pts + "\" fill=\"" + color + "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
      }
    }
    std::string pts;
    for (std::size_t i = 0; i < c.times.size(); ++i)
      if (std::isfinite(y[i])) pts += num(X(c.times[i])) + "," + num(Y(y[i])) + " ";
    if (!pts.empty()) pts.pop_back();
    s += "<polyline class=\"curve\" points=\"" + pts + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
  }

  s += "<g class=\"legend\" font-size=\"12\">\n";
  for (std::size_t g = 0; g < curves.size(); ++g) {
    const double ly = kTop + 10 + 20.0 * static_cast<double>(g);
    const double lx = kLeft + pw + 15;
    s += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 20) + "\" y2=\"" + num(ly) + "\" stroke=\"" +
         kPalette[g % std::size(kPalette)] + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(lx + 26) + "\" y=\"" + num(ly + 4) + "\">" + escape(curves[g].group) + "</text>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

std::vector<std::string> emit_plots(const std::vector<TrajectoryCurve>& curves, const std::string& dir, bool bands) {
  const std::string surv = render_svg(curves, PlotKind::Survival, bands);
  const std::string haz = render_svg(curves, PlotKind::Hazard, bands);
  std::vector<std::string> written;
  for (const auto& [name, text] : {std::pair{"surv.svg", &surv}, std::pair{"haz.svg", &haz}}) {
    const auto path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << *text)) throw InputError("cannot write " + path);
    written.push_back(path);
  }
  return written;
}

}  // namespace parmsurv
