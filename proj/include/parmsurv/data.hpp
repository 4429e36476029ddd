#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace parmsurv {

// One CSV cell. Numeric cells keep their source text so labels can be
// rendered the way the user wrote them.
struct Cell {
  enum class Kind { Numeric, Text, Missing };
  Kind kind = Kind::Missing;
  double number = 0.0;
  std::string text;

  bool is_missing() const { return kind == Kind::Missing; }
  bool is_numeric() const { return kind == Kind::Numeric; }
  bool is_text() const { return kind == Kind::Text; }

  static Cell missing() { return {}; }
  static Cell numeric(double v, std::string src);
  static Cell of_text(std::string s) { return {Kind::Text, 0.0, std::move(s)}; }
};

struct RawTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  // Case-insensitive lookup; nullopt when absent.
  std::optional<std::size_t> find_column(const std::string& name) const;
  std::size_t column_index(const std::string& name) const;  // throws InputError
};

inline const std::vector<std::string> kDefaultMissingTokens = {"", "."};

RawTable load_table(const std::string& path,
                    const std::vector<std::string>& missing_tokens = kDefaultMissingTokens);
RawTable parse_table(const std::string& csv_text,
                     const std::vector<std::string>& missing_tokens = kDefaultMissingTokens);

enum class CensorKind { Event, RightCensored, LeftCensored, IntervalCensored };

const char* to_string(CensorKind kind);

// Canonical two-bound response. A missing bound is nullopt.
struct ResponseBounds {
  std::optional<double> t1;
  std::optional<double> t2;

  CensorKind kind() const;
};

struct Observation {
  ResponseBounds bounds;
  double weight = 1.0;
  std::string stratum;
  std::vector<Cell> covariates;  // aligned with ObservationSet::covariate_names
  std::size_t source_row = 0;    // zero-based data row in the input table
};

enum class DeletionReason {
  BothMissing,
  NegativeTime,
  ReversedInterval,
  ZeroTime,
  MissingTime,
  MissingCensor,
  MissingStratum,
  MissingCovariate,
};
inline constexpr std::size_t kDeletionReasonCount = 8;

const char* to_string(DeletionReason reason);

struct DeletionReport {
  std::array<std::size_t, kDeletionReasonCount> counts{};
  std::vector<std::pair<std::size_t, DeletionReason>> rows;  // (source row, reason)

  std::size_t total() const;
  std::size_t count(DeletionReason r) const { return counts[static_cast<std::size_t>(r)]; }
  void add(std::size_t row, DeletionReason r);
};

struct ObservationSet {
  std::vector<Observation> observations;
  std::vector<std::string> covariate_names;
  std::vector<std::string> strata_columns;
  std::size_t input_rows = 0;
  DeletionReport deletions;

  std::size_t size() const { return observations.size(); }
  bool empty() const { return observations.empty(); }
  std::optional<std::size_t> covariate_index(const std::string& name) const;

  // Distinct stratum labels in order of first appearance.
  std::vector<std::string> strata() const;
  ObservationSet subset_stratum(const std::string& label) const;
};

struct ResponseSpec {
  std::string t1;
  std::optional<std::string> t2;
  std::optional<std::string> censor;
  std::string censval = "0";
  std::optional<std::string> weight;
  std::vector<std::string> strata;
  // Rows missing any of these columns are deleted (MissingCovariate).
  std::vector<std::string> required_covariates;
};

// Converts both response formats to canonical (t1, t2) bounds and deletes
// invalid rows. Columns other than the response, weight and strata columns
// are carried as covariates.
ObservationSet normalize_response(const RawTable& table, const ResponseSpec& spec);

// τ: t1 for events and right censoring, t2 for left censoring, interval midpoint.
double observed_time(const Observation& obs);

}  // namespace parmsurv
