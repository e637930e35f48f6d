#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <random>
#include <sstream>
#include <stdexcept>

#include "smoothweyl/harness.hpp"
#include "smoothweyl/report.hpp"

using namespace swl;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (quoted) {
        if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else if (ch == '"') {
          quoted = false;
        } else {
          cell += ch;
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += ch;
      }
    }
    cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

ExperimentConfig small_envelope() {
  ExperimentConfig c = ExperimentConfig::defaults("envelope");
  c.P_list = {30, 60};
  c.samples = 200;
  return c;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("shortest round-trip formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  std::mt19937_64 rng(9);
  for (int i = 0; i < 5000; ++i) {
    double x;
    const std::uint64_t bits = rng();
    std::memcpy(&x, &bits, sizeof x);
    if (!std::isfinite(x)) continue;
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("CSV rows carry the JSON values exactly") {
  ExperimentReport r;
  r.experiment = "demo";
  r.rows.push_back({{{"P", 10.0}, {"label", "a,b"}}, 1.0 / 3.0, 2.0, 1.0 / 6.0});
  r.rows.push_back({{{"P", 20.0}, {"Q", 3}}, 0.1, 0.7, 0.1 / 0.7});
  const auto table = parse_csv(to_csv(r));
  REQUIRE(table.size() == 3);
  CHECK(table[0] == std::vector<std::string>{"P", "label", "Q", "value", "bound", "ratio"});
  CHECK(table[1][1] == "a,b");
  CHECK(table[2][1].empty());
  CHECK(table[2][2] == "3");
  const Json j = to_json(r);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(std::stod(table[i + 1][3]) == j["rows"][i]["value"].get<double>());
    CHECK(std::stod(table[i + 1][5]) == j["rows"][i]["ratio"].get<double>());
  }
}

TEST_CASE("JSON schema") {
  ExperimentReport r;
  r.experiment = "demo";
  add_check(r, "c1", true, 1.0, 2.0);
  r.fitted_slope = 0.5;
  const Json j = to_json(r);
  const std::vector<std::string> keys{"experiment", "config", "rows", "checks", "fitted_slope", "wall_time_s"};
  std::vector<std::string> got;
  for (const auto& [key, _] : j.items()) got.push_back(key);
  CHECK(got == keys);
  CHECK(j["checks"][0]["margin"] == 1.0);
  CHECK_FALSE(to_json(r, false).contains("wall_time_s"));
  CHECK(r.all_hold());
  add_check(r, "c2", false, 3.0, 2.0);
  CHECK(r.violations() == 1);
}

TEST_CASE("configuration validation") {
  for (const auto& name : sweep_experiments()) CHECK_NOTHROW(ExperimentConfig::defaults(name).validate());
  ExperimentConfig c = ExperimentConfig::defaults("major_moment");
  c.omega = 0.6;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("omega"), std::domain_error);
  c = ExperimentConfig::defaults("major_moment");
  c.omega_prime = 1.5;
  CHECK_THROWS_AS(c.validate(), std::domain_error);
  c = ExperimentConfig::defaults("narrow_decay");
  c.u = 6;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("u > 2t+4"), std::domain_error);
  c = ExperimentConfig::defaults("envelope");
  c.R = 1;
  CHECK_THROWS_AS(c.validate(), std::domain_error);
  c = ExperimentConfig::defaults("envelope");
  c.eta = 0.5;
  CHECK(c.R_for(400) == doctest::Approx(20));
  CHECK_THROWS_AS(ExperimentConfig::defaults("nope"), std::invalid_argument);
  CHECK_THROWS_AS(run_verify("nope"), std::invalid_argument);
}

TEST_CASE("sweeps are deterministic") {
  const ExperimentConfig c = small_envelope();
  const ExperimentReport a = run_sweep(c), b = run_sweep(c);
  CHECK(to_json_string(a, false) == to_json_string(b, false));
  CHECK(a.rows.size() == 2);
  ExperimentConfig other = c;
  other.seed = 2;
  CHECK(to_json_string(run_sweep(other), false) != to_json_string(a, false));
}

TEST_CASE("sample budget is checked before evaluation") {
  ExperimentConfig c = ExperimentConfig::defaults("major_moment");
  c.max_samples = 100;
  CHECK_THROWS_AS(run_sweep(c), ResourceError);
}

TEST_CASE("lattice count matches summed representation counts") {
  CHECK(lattice_count(2, 2, 2) == 1);
  CHECK(lattice_count(2, 2, 5) == 3);
  CHECK(verify_waring_suite(3, 3, 2000).all_hold());
  CHECK(verify_waring_suite(2, 4, 300).all_hold());
}

TEST_CASE("verify suites hold on small settings") {
  const std::vector<unsigned> ks{2, 3};
  CHECK(verify_script_S_suite(ks, 40, 50, 500, 1).all_hold());
  CHECK(verify_kappa_divisor_suite(ks, 40, 20).all_hold());
  CHECK(verify_kappa_bounds_suite(2000, 100).all_hold());
  CHECK(verify_dissection_suite(500, 1).all_hold());
  const ExperimentReport ineq = verify_inequalities_suite(500, 30, 1);
  CHECK(ineq.all_hold());
  CHECK(to_json_string(ineq, false) == to_json_string(verify_inequalities_suite(500, 30, 1), false));
}

}  // TEST_SUITE
