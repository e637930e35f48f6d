#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "smoothweyl/check.hpp"

namespace swl {

using Json = nlohmann::ordered_json;

/// One parameter point of an experiment: the measured quantity, the bound
/// expression it is compared against (implicit constant 1) and their ratio.
struct ReportRow {
  Json params = Json::object();
  double value = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct ExperimentReport {
  std::string experiment;
  Json config = Json::object();
  std::vector<ReportRow> rows;
  std::vector<CheckResult> checks;
  std::optional<double> fitted_slope;
  std::optional<double> slope_stderr;
  double wall_time_s = 0.0;

  bool all_hold() const;
  std::size_t violations() const;
  /// Appends rows and checks of `other`; used to concatenate suites.
  void append(const ExperimentReport& other);
};

/// Adds a check, deriving the margin as rhs - lhs.
CheckResult& add_check(ExperimentReport& report, std::string name, bool holds, double lhs, double rhs,
                       std::string detail = {});

Json to_json(const ExperimentReport& report, bool include_wall_time = true);
std::string to_json_string(const ExperimentReport& report, bool include_wall_time = true);

/// One line per row; columns are the union of parameter keys in first-seen
/// order followed by value, bound, ratio. Numbers use the shortest
/// round-trip decimal form.
std::string to_csv(const ExperimentReport& report);

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

}  // namespace swl
