#include "parmsurv/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "parmsurv/errors.hpp"

namespace parmsurv {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

const std::string& ModelSpec::location() const {
  return distribution->parameters()[distribution->location_index()].name;
}

std::vector<std::string> ModelSpec::parameter_names() const {
  std::vector<std::string> out;
  for (const auto& p : distribution->parameters()) out.push_back(p.name);
  return out;
}

std::vector<std::string> ModelSpec::all_covariates() const {
  std::vector<std::string> out;
  for (const auto& p : parameter_names()) {
    auto it = param_covars.find(p);
    if (it == param_covars.end()) continue;
    for (const auto& c : it->second)
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

void ModelSpec::validate() const {
  if (!distribution) throw InputError("no distribution given");
  if (!(alpha > 0 && alpha < 1)) throw InputError("alpha must lie in (0, 1)");
  const auto names = parameter_names();
  auto known = [&](const std::string& p) { return std::find(names.begin(), names.end(), p) != names.end(); };
  for (const auto& [p, covs] : param_covars) {
    if (!known(p)) throw InputError("covariates assigned to unknown parameter '" + p + "'");
    for (std::size_t i = 0; i < covs.size(); ++i)
      if (std::find(covs.begin(), covs.begin() + static_cast<std::ptrdiff_t>(i), covs[i]) != covs.begin() + static_cast<std::ptrdiff_t>(i))
        throw InputError("covariate '" + covs[i] + "' listed twice for parameter '" + p + "'");
  }
  for (const auto* bounds : {&lower, &upper}) {
    for (const auto& [p, v] : *bounds) {
      (void)v;
      if (!known(p)) throw InputError("bound given for unknown parameter '" + p + "'");
      auto it = param_covars.find(p);
      if (it != param_covars.end() && !it->second.empty())
        throw InputError("bounds are only supported for parameters without covariates ('" + p + "')");
    }
  }
  for (const auto& [p, lo] : lower) {
    auto it = upper.find(p);
    if (it != upper.end() && !(lo < it->second)) throw InputError("lower bound must be below upper bound for '" + p + "'");
  }
  for (const auto& [key, v] : init) {
    (void)v;
    const auto param = key.substr(0, key.find(':'));
    if (!known(param)) throw InputError("init given for unknown parameter '" + param + "'");
  }
}

std::size_t ParameterLayout::parameter_index(const std::string& name) const {
  for (std::size_t k = 0; k < parameters.size(); ++k)
    if (parameters[k] == name) return k;
  throw InputError("unknown parameter '" + name + "'");
}

std::vector<Link> default_links(const ModelSpec& spec) {
  std::vector<Link> links;
  for (const auto& p : spec.distribution->parameters())
    links.push_back(p.cls == ParamConstraint::Class::Positive ? Link::Log : Link::Identity);
  return links;
}

ParameterLayout build_layout(const ModelSpec& spec, const std::vector<DesignMatrix>& designs) {
  spec.validate();
  ParameterLayout layout;
  layout.parameters = spec.parameter_names();
  layout.links = default_links(spec);
  if (designs.size() != layout.parameters.size())
    throw InputError("expected one design matrix per distribution parameter");

  const std::size_t loc = spec.distribution->location_index();
  bool by_parameter = false;
  for (std::size_t k = 0; k < designs.size(); ++k)
    if (k != loc && designs[k].columns.size() > 1) by_parameter = true;

  // Location first, then ancillary parameters in distribution order.
  std::vector<std::size_t> order = {loc};
  for (std::size_t k = 0; k < layout.parameters.size(); ++k)
    if (k != loc) order.push_back(k);

  layout.offsets.assign(layout.parameters.size(), 0);
  layout.counts.assign(layout.parameters.size(), 0);
  for (auto k : order) {
    const auto& dm = designs[k];
    const auto& param = layout.parameters[k];
    if (dm.parameter != param) throw InputError("design matrix order does not match parameters");
    layout.offsets[k] = layout.slots.size();
    layout.counts[k] = dm.columns.size();
    const bool log_link = layout.links[k] == Link::Log;
    const bool intercept_only = dm.columns.size() == 1;
    for (std::size_t j = 0; j < dm.columns.size(); ++j) {
      Slot s;
      s.parameter = param;
      s.column = dm.columns[j];
      s.intercept = j == 0;
      s.log_link = log_link;
      s.transformed = log_link && intercept_only;
      if (by_parameter) {
        s.label = param + ": " + (j == 0 ? std::string("intercept") : dm.columns[j]);
      } else if (k == loc) {
        s.label = dm.columns[j];
      } else {
        s.label = upper(param);
      }
      layout.slots.push_back(std::move(s));
    }
  }
  return layout;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::map<std::string, std::vector<std::string>> parse_anc(const std::string& text) {
  std::map<std::string, std::vector<std::string>> out;
  std::size_t pos = 0;
  while (true) {
    while (pos < text.size() && (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == ',')) ++pos;
    if (pos >= text.size()) break;
    const auto open = text.find('(', pos);
    if (open == std::string::npos) throw ParseError("expected 'param(covariates)' in anc", pos);
    const auto close = text.find(')', open);
    if (close == std::string::npos) throw ParseError("unmatched '(' in anc", open);
    auto name = trim(text.substr(pos, open - pos));
    if (name.empty()) throw ParseError("missing parameter name in anc", pos);
    if (out.count(name)) throw InputError("parameter '" + name + "' appears twice in anc");
    out[name] = split_names(text.substr(open + 1, close - open - 1));
    pos = close + 1;
  }
  return out;
}

std::map<std::string, double> parse_named_values(const std::string& text) {
  std::map<std::string, double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const auto item = trim(text.substr(start, end - start));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InputError("expected name=value, got '" + item + "'");
      std::string key = trim(item.substr(0, eq));
      if (const auto colon = key.find(':'); colon != std::string::npos)
        key = trim(key.substr(0, colon)) + ":" + trim(key.substr(colon + 1));
      const auto val = trim(item.substr(eq + 1));
      double v = 0;
      auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
      if (ec != std::errc() || p != val.data() + val.size() || key.empty())
        throw InputError("malformed value in '" + item + "'");
      out[key] = v;
    }
    start = end + 1;
  }
  return out;
}

}  // namespace parmsurv
