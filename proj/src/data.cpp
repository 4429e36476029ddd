#include "parmsurv/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "parmsurv/errors.hpp"

namespace parmsurv {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && trim(field).empty()) {
      field.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      out.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw InputError("unterminated quoted field on line " + std::to_string(line_no));
  out.push_back(was_quoted ? field : trim(field));
  return out;
}

}  // namespace

Cell Cell::numeric(double v, std::string src) { return {Kind::Numeric, v, std::move(src)}; }

std::optional<std::size_t> RawTable::find_column(const std::string& name) const {
  const auto key = lower(name);
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (lower(columns[j]) == key) return j;
  return std::nullopt;
}

std::size_t RawTable::column_index(const std::string& name) const {
  auto j = find_column(name);
  if (!j) throw InputError("column '" + name + "' not found");
  return *j;
}

RawTable parse_table(const std::string& csv_text, const std::vector<std::string>& missing_tokens) {
  std::istringstream in(csv_text);
  std::string line;
  RawTable table;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_record(line, line_no);
    if (!have_header) {
      std::unordered_set<std::string> seen;
      for (auto& f : fields) {
        if (f.empty()) throw InputError("empty column name in header");
        if (!seen.insert(lower(f)).second) throw InputError("duplicate column name '" + f + "'");
      }
      table.columns = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.columns.size()) {
      throw InputError("ragged row on line " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.columns.size()) + " cells, found " +
                       std::to_string(fields.size()));
    }
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (auto& f : fields) {
      if (std::find(missing_tokens.begin(), missing_tokens.end(), f) != missing_tokens.end()) {
        row.push_back(Cell::missing());
      } else if (auto v = parse_number(f)) {
        row.push_back(Cell::numeric(*v, f));
      } else {
        row.push_back(Cell::of_text(f));
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw InputError("input has no header row");
  return table;
}

RawTable load_table(const std::string& path, const std::vector<std::string>& missing_tokens) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_table(buf.str(), missing_tokens);
}

const char* to_string(CensorKind kind) {
  switch (kind) {
    case CensorKind::Event: return "event";
    case CensorKind::RightCensored: return "right";
    case CensorKind::LeftCensored: return "left";
    case CensorKind::IntervalCensored: return "interval";
  }
  return "?";
}

CensorKind ResponseBounds::kind() const {
  if (!t2) return CensorKind::RightCensored;
  if (!t1) return CensorKind::LeftCensored;
  return *t1 == *t2 ? CensorKind::Event : CensorKind::IntervalCensored;
}

const char* to_string(DeletionReason reason) {
  switch (reason) {
    case DeletionReason::BothMissing: return "both time bounds missing";
    case DeletionReason::NegativeTime: return "negative time";
    case DeletionReason::ReversedInterval: return "t1 > t2";
    case DeletionReason::ZeroTime: return "zero time";
    case DeletionReason::MissingTime: return "missing observed time";
    case DeletionReason::MissingCensor: return "missing censoring status";
    case DeletionReason::MissingStratum: return "missing stratum value";
    case DeletionReason::MissingCovariate: return "missing covariate value";
  }
  return "?";
}

std::size_t DeletionReport::total() const {
  std::size_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

void DeletionReport::add(std::size_t row, DeletionReason r) {
  ++counts[static_cast<std::size_t>(r)];
  rows.emplace_back(row, r);
}

std::optional<std::size_t> ObservationSet::covariate_index(const std::string& name) const {
  const auto key = lower(name);
  for (std::size_t j = 0; j < covariate_names.size(); ++j)
    if (lower(covariate_names[j]) == key) return j;
  return std::nullopt;
}

std::vector<std::string> ObservationSet::strata() const {
  std::vector<std::string> out;
  for (const auto& o : observations)
    if (std::find(out.begin(), out.end(), o.stratum) == out.end()) out.push_back(o.stratum);
  return out;
}

ObservationSet ObservationSet::subset_stratum(const std::string& label) const {
  ObservationSet s;
  s.covariate_names = covariate_names;
  s.strata_columns = strata_columns;
  for (const auto& o : observations)
    if (o.stratum == label) s.observations.push_back(o);
  s.input_rows = s.observations.size();
  return s;
}

namespace {

std::optional<double> time_cell(const Cell& c, const std::string& col, std::size_t row) {
  if (c.is_missing()) return std::nullopt;
  if (!c.is_numeric())
    throw InputError("non-numeric value '" + c.text + "' in time column '" + col + "' (row " +
                     std::to_string(row + 1) + ")");
  return c.number;
}

bool is_censor_value(const Cell& c, const std::string& censval) {
  if (c.is_numeric()) {
    if (auto v = parse_number(trim(censval))) return c.number == *v;
    return c.text == trim(censval);
  }
  return trim(c.text) == trim(censval);
}

}  // namespace

ObservationSet normalize_response(const RawTable& table, const ResponseSpec& spec) {
  if (spec.t2.has_value() == spec.censor.has_value())
    throw InputError("exactly one of t2 / censor must be given");

  const std::size_t t1_col = table.column_index(spec.t1);
  const std::optional<std::size_t> t2_col =
      spec.t2 ? std::optional(table.column_index(*spec.t2)) : std::nullopt;
  const std::optional<std::size_t> censor_col =
      spec.censor ? std::optional(table.column_index(*spec.censor)) : std::nullopt;
  const std::optional<std::size_t> weight_col =
      spec.weight ? std::optional(table.column_index(*spec.weight)) : std::nullopt;
  std::vector<std::size_t> strata_cols;
  for (const auto& s : spec.strata) strata_cols.push_back(table.column_index(s));

  std::vector<std::size_t> reserved = {t1_col};
  if (t2_col) reserved.push_back(*t2_col);
  if (censor_col) reserved.push_back(*censor_col);
  if (weight_col) reserved.push_back(*weight_col);
  reserved.insert(reserved.end(), strata_cols.begin(), strata_cols.end());

  ObservationSet out;
  out.strata_columns = spec.strata;
  std::vector<std::size_t> cov_cols;
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (std::find(reserved.begin(), reserved.end(), j) != reserved.end()) continue;
    cov_cols.push_back(j);
    out.covariate_names.push_back(table.columns[j]);
  }
  std::vector<std::size_t> required;
  for (const auto& name : spec.required_covariates) {
    auto j = table.column_index(name);
    if (std::find(cov_cols.begin(), cov_cols.end(), j) == cov_cols.end())
      throw InputError("column '" + name + "' is used as a response, weight or stratum column");
    required.push_back(j);
  }

  out.input_rows = table.rows.size();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    ResponseBounds b;
    std::optional<DeletionReason> bad;

    if (t2_col) {
      b.t1 = time_cell(row[t1_col], table.columns[t1_col], r);
      b.t2 = time_cell(row[*t2_col], table.columns[*t2_col], r);
      if (!b.t1 && !b.t2) {
        bad = DeletionReason::BothMissing;
      } else if ((b.t1 && *b.t1 < 0) || (b.t2 && *b.t2 < 0)) {
        bad = DeletionReason::NegativeTime;
      } else if (b.t1 && b.t2 && *b.t1 > *b.t2) {
        bad = DeletionReason::ReversedInterval;
      } else if ((b.t1 && !b.t2 && *b.t1 == 0) || (b.t2 && *b.t2 == 0)) {
        bad = DeletionReason::ZeroTime;
      } else if (b.t1 && b.t2 && *b.t1 == 0) {
        b.t1.reset();  // (0, t2] is left censoring at t2
      }
    } else {
      auto t = time_cell(row[t1_col], table.columns[t1_col], r);
      const Cell& d = row[*censor_col];
      if (!t) {
        bad = DeletionReason::MissingTime;
      } else if (*t < 0) {
        bad = DeletionReason::NegativeTime;
      } else if (d.is_missing()) {
        bad = DeletionReason::MissingCensor;
      } else if (*t == 0) {
        bad = DeletionReason::ZeroTime;
      } else {
        b.t1 = t;
        if (!is_censor_value(d, spec.censval)) b.t2 = t;
      }
    }

    Observation obs;
    obs.source_row = r;
    if (!bad && weight_col) {
      const Cell& w = row[*weight_col];
      if (!w.is_numeric() || !(w.number > 0))
        throw InputError("weight column '" + table.columns[*weight_col] +
                         "' must hold positive numbers (row " + std::to_string(r + 1) + ")");
      obs.weight = w.number;
    }
    if (!bad) {
      for (std::size_t k = 0; k < strata_cols.size(); ++k) {
        const Cell& c = row[strata_cols[k]];
        if (c.is_missing()) {
          bad = DeletionReason::MissingStratum;
          break;
        }
        if (k) obs.stratum += ",";
        obs.stratum += c.text;
      }
    }
    if (!bad) {
      for (auto j : required)
        if (row[j].is_missing()) bad = DeletionReason::MissingCovariate;
    }
    if (bad) {
      out.deletions.add(r, *bad);
      continue;
    }
    obs.bounds = b;
    obs.covariates.reserve(cov_cols.size());
    for (auto j : cov_cols) obs.covariates.push_back(row[j]);
    out.observations.push_back(std::move(obs));
  }
  return out;
}

double observed_time(const Observation& obs) {
  const auto& b = obs.bounds;
  switch (b.kind()) {
    case CensorKind::Event:
    case CensorKind::RightCensored: return *b.t1;
    case CensorKind::LeftCensored: return *b.t2;
    case CensorKind::IntervalCensored: return 0.5 * (*b.t1 + *b.t2);
  }
  return 0.0;
}

}  // namespace parmsurv
