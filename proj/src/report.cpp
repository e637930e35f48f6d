#include "smoothweyl/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace swl {

bool ExperimentReport::all_hold() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.holds; });
}

std::size_t ExperimentReport::violations() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.holds; }));
}

void ExperimentReport::append(const ExperimentReport& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

CheckResult& add_check(ExperimentReport& report, std::string name, bool holds, double lhs, double rhs,
                       std::string detail) {
  report.checks.push_back({std::move(name), holds, lhs, rhs, rhs - lhs, std::move(detail)});
  return report.checks.back();
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

Json to_json(const ExperimentReport& report, bool include_wall_time) {
  Json j;
  j["experiment"] = report.experiment;
  j["config"] = report.config;
  j["rows"] = Json::array();
  for (const auto& row : report.rows) {
    j["rows"].push_back({{"params", row.params}, {"value", row.value}, {"bound", row.bound}, {"ratio", row.ratio}});
  }
  j["checks"] = Json::array();
  for (const auto& c : report.checks) {
    Json cj = {{"name", c.name}, {"holds", c.holds}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"margin", c.margin}};
    if (!c.detail.empty()) cj["detail"] = c.detail;
    j["checks"].push_back(std::move(cj));
  }
  if (report.fitted_slope) j["fitted_slope"] = *report.fitted_slope;
  if (report.slope_stderr) j["slope_stderr"] = *report.slope_stderr;
  if (include_wall_time) j["wall_time_s"] = report.wall_time_s;
  return j;
}

std::string to_json_string(const ExperimentReport& report, bool include_wall_time) {
  return to_json(report, include_wall_time).dump(2);
}

namespace {

std::string csv_cell(const Json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + "\"";
  }
  if (v.is_null()) return "";
  return v.dump();
}

}  // namespace

std::string to_csv(const ExperimentReport& report) {
  std::vector<std::string> keys;
  for (const auto& row : report.rows) {
    for (const auto& [key, _] : row.params.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
  }
  std::ostringstream out;
  for (const auto& key : keys) out << key << ',';
  out << "value,bound,ratio\n";
  for (const auto& row : report.rows) {
    for (const auto& key : keys) {
      if (row.params.contains(key)) out << csv_cell(row.params.at(key));
      out << ',';
    }
    out << format_double(row.value) << ',' << format_double(row.bound) << ',' << format_double(row.ratio) << '\n';
  }
  return out.str();
}

}  // namespace swl
