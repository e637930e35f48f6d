// Command-line front end. Every subcommand emits an experiment report as
// JSON or CSV; exit status is 0 when all checks hold, 1 when a check fails
// and 2 on invalid input or an exhausted budget.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smoothweyl/arcs.hpp"
#include "smoothweyl/arithmetic.hpp"
#include "smoothweyl/expsums.hpp"
#include "smoothweyl/harness.hpp"
#include "smoothweyl/moments.hpp"
#include "smoothweyl/report.hpp"
#include "smoothweyl/smooth.hpp"

namespace {

using namespace swl;

struct Globals {
  unsigned k = 3;
  double P = 100.0;
  double R = 4.0;
  double Q = 0.0;
  unsigned t = 1;
  double u = 2.0;
  double omega = 0.5;
  double epsilon = 0.01;
  std::uint64_t grid_per_arc = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
};

ExperimentReport single_row(std::string experiment, Json config, Json params, double value, double bound) {
  ExperimentReport r;
  r.experiment = std::move(experiment);
  r.config = std::move(config);
  ReportRow row;
  row.params = std::move(params);
  row.value = value;
  row.bound = bound;
  row.ratio = value / bound;
  r.rows.push_back(std::move(row));
  return r;
}

std::string rational_string(const mpq_class& q) { return q.get_str(); }

void emit(const ExperimentReport& report, const Globals& g) {
  const std::string text = g.format == "csv" ? to_csv(report) : to_json_string(report) + "\n";
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw std::runtime_error("cannot open " + g.out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smooth Weyl sums on major arcs: exact checks and numerical experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--k", g.k, "Degree k");
  app.add_option("--P", g.P, "Length P");
  app.add_option("--R", g.R, "Smoothness bound R");
  app.add_option("--Q", g.Q, "Arc parameter Q");
  app.add_option("--t", g.t, "Moment parameter t");
  app.add_option("--u", g.u, "Moment exponent u");
  app.add_option("--omega", g.omega, "Major arc exponent omega (Q = P^omega)");
  app.add_option("--epsilon", g.epsilon, "Epsilon in envelopes");
  app.add_option("--grid-per-arc", g.grid_per_arc, "Minimum samples per arc");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Write the report to this path instead of stdout");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  // sieve
  auto* sieve = app.add_subcommand("sieve", "R-smooth integers up to P");
  std::optional<double> nu;
  bool list = false;
  sieve->add_option("--nu", nu, "Keep only elements above P/nu");
  sieve->add_flag("--list", list, "Include the elements in the config block");

  // kappa
  auto* kap = app.add_subcommand("kappa", "kappa_k(q), exact square and double value");
  std::uint64_t q = 1;
  kap->add_option("--q", q, "Modulus q")->required();

  // expsum
  auto* expsum = app.add_subcommand("expsum", "Complete sums S, W and scriptS");
  std::string which = "S";
  std::int64_t a = 1;
  expsum->add_option("--which", which, "Which sum")->check(CLI::IsMember({"S", "W", "scriptS"}));
  expsum->add_option("--q", q, "Modulus q")->required();
  expsum->add_option("--a", a, "Numerator a");

  // wsum
  auto* wsum = app.add_subcommand("wsum", "Smooth Weyl sum g(alpha; P, R)");
  double alpha = 0.0;
  wsum->add_option("--alpha", alpha, "Point alpha")->required();
  wsum->add_option("--nu", nu, "Truncation parameter nu");

  // classify
  auto* cls = app.add_subcommand("classify", "Major/minor classification of alpha");
  cls->add_option("--alpha", alpha, "Point alpha in [0,1)")->required();

  // measure
  auto* meas = app.add_subcommand("measure", "Exact measure of M(Q) or N(Q)");
  bool narrow = false;
  meas->add_flag("--narrow", narrow, "Measure N(Q) = M(Q) \\ M(Q/2)");

  // moment
  auto* mom = app.add_subcommand("moment", "Integral of |g|^u over an arc set");
  std::string arcs_kind = "full";
  std::uint64_t max_samples = 200'000'000;
  mom->add_option("--arcs", arcs_kind, "Arc set")->check(CLI::IsMember({"full", "major", "narrow", "minor"}));
  mom->add_option("--max-samples", max_samples, "Sample budget");

  // verify
  auto* ver = app.add_subcommand("verify", "Run a verification suite");
  std::string suite;
  ver->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(verify_suites()));

  // sweep
  auto* sw = app.add_subcommand("sweep", "Run a parameter sweep");
  std::string experiment;
  std::vector<double> P_list, Q_list;
  std::optional<double> omega_prime, eta;
  double delta = 1.5, c = 1.0;
  std::size_t samples = 1000;
  sw->add_option("experiment", experiment, "Experiment name")->required()->check(CLI::IsMember(sweep_experiments()));
  sw->add_option("--P-list", P_list, "Values of P (X for weighted_mean)")->delimiter(',');
  sw->add_option("--Q-list", Q_list, "Values of Q")->delimiter(',');
  sw->add_option("--omega-prime", omega_prime, "Exponent omega'");
  sw->add_option("--eta", eta, "Use R = P^eta instead of a fixed R");
  sw->add_option("--delta", delta, "Weight exponent delta");
  sw->add_option("--c", c, "Constant c in the small-q envelope");
  sw->add_option("--samples", samples, "Sampled points per P (envelope)");
  sw->add_option("--max-samples", max_samples, "Sample budget");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentReport report;
    const auto start = std::chrono::steady_clock::now();
    if (sieve->parsed()) {
      SmoothSet s = sieve_smooth(g.P, g.R);
      if (nu) s = truncate(s, *nu);
      Json config = {{"P", g.P}, {"R", g.R}};
      if (nu) config["nu"] = *nu;
      if (list) config["elements"] = s.elements();
      Json params = {{"P", g.P}, {"R", g.R}, {"card", s.size()}};
      report = single_row("sieve", config, params, static_cast<double>(s.size()), std::floor(g.P));
    } else if (kap->parsed()) {
      const Factorization f = factorize(q);
      const ExactKappaSq ks = kappa_squared(g.k, f);
      Json params = {{"k", g.k},
                     {"q", q},
                     {"kappa_sq", rational_string(ks.value())},
                     {"psi", psi_value(f)},
                     {"omega", omega(f)}};
      report = single_row("kappa", {{"k", g.k}, {"q", q}, {"bound", "q^-1/2 (lower bound)"}}, params, ks.kappa(),
                          1.0 / std::sqrt(static_cast<double>(q)));
    } else if (expsum->parsed()) {
      const Factorization f = factorize(q);
      Json config = {{"which", which}, {"k", g.k}, {"q", q}, {"a", a}};
      if (which == "scriptS") {
        const double v = script_S(g.k, q, a);
        const double bound = 6.0 * g.k * kappa(g.k, f) * psi_value(f);
        config["bound"] = "6 k kappa(q) psi(q)";
        report = single_row("expsum", config, {{"k", g.k}, {"q", q}, {"a", a}}, v, bound);
      } else {
        const Complex z = which == "S" ? complete_sum_S(g.k, q, a) : reduced_sum_W(g.k, q, a);
        const double bound = which == "S" ? static_cast<double>(q) : static_cast<double>(euler_phi(f));
        config["bound"] = which == "S" ? "q" : "phi(q)";
        report = single_row("expsum", config,
                            {{"k", g.k}, {"q", q}, {"a", a}, {"re", z.real()}, {"im", z.imag()}}, std::abs(z), bound);
      }
    } else if (wsum->parsed()) {
      SmoothSet s = sieve_smooth(g.P, g.R);
      if (nu) s = truncate(s, *nu);
      const Complex z = weyl_sum(g.k, alpha, s);
      Json config = {{"k", g.k}, {"P", g.P}, {"R", g.R}, {"alpha", alpha}, {"bound", "card A"}};
      if (nu) config["nu"] = *nu;
      report = single_row("wsum", config,
                          {{"alpha", alpha}, {"re", z.real()}, {"im", z.imag()}, {"modulus", std::abs(z)}},
                          std::abs(z), static_cast<double>(s.size()));
    } else if (cls->parsed()) {
      const double Q = g.Q > 0.0 ? g.Q : 1.0;
      const ArcClassification r = classify(alpha, g.k, g.P, Q);
      const double width = Q / std::pow(g.P, static_cast<double>(g.k));
      Json params = {{"alpha", alpha}, {"class", r ? "major" : "minor"}};
      double off = std::nan("");
      if (r) {
        params["a"] = r->a;
        params["q"] = r->q;
        off = std::abs(static_cast<double>(r->q) * alpha - static_cast<double>(r->a));
      }
      report = single_row("classify", {{"k", g.k}, {"P", g.P}, {"Q", Q}, {"bound", "Q P^-k"}}, params, off, width);
    } else if (meas->parsed()) {
      const double Q = g.Q > 0.0 ? g.Q : 1.0;
      const mpq_class P_exact = exact(g.P), Q_exact = exact(Q);
      const IntervalSet set = narrow ? narrow_arcs(g.k, P_exact, Q_exact) : major_arcs(g.k, P_exact, Q_exact);
      const mpq_class m = set.measure();
      Json params = {{"set", narrow ? "narrow" : "major"},
                     {"exact_measure", rational_string(m)},
                     {"intervals", set.size()}};
      const mpq_class formula = major_arc_measure_formula(g.k, P_exact, Q_exact);
      params["formula_exact"] = rational_string(formula);
      params["arcs_disjoint"] = 2.0 * Q * Q < std::pow(g.P, static_cast<double>(g.k));
      report = single_row("measure", {{"k", g.k}, {"P", g.P}, {"Q", Q}, {"bound", "(2Q/P^k) sum phi(q)/q"}}, params,
                          to_double(m), to_double(formula));
    } else if (mom->parsed()) {
      const SmoothSet s = sieve_smooth(g.P, g.R);
      const double Q = g.Q > 0.0 ? g.Q : std::max(1.0, std::pow(g.P, g.omega));
      IntervalSet set = IntervalSet::unit();
      if (arcs_kind == "major") set = major_arcs(g.k, g.P, Q);
      if (arcs_kind == "narrow") set = narrow_arcs(g.k, g.P, Q);
      if (arcs_kind == "minor") set = minor_arcs(g.k, g.P, Q);
      QuadratureOptions opts;
      opts.max_samples = max_samples;
      if (g.grid_per_arc > 0) opts.min_samples_per_interval = g.grid_per_arc;
      const MomentResult m = quad_moment(g.k, s, set, g.u, opts, arcs_kind);
      Json params = {{"arcs", m.arcs},
                     {"u", m.u},
                     {"intervals", m.intervals},
                     {"measure", m.measure},
                     {"samples", m.samples},
                     {"estimated_quadrature_error", m.estimated_quadrature_error},
                     {"card", s.size()}};
      Json config = {{"k", g.k}, {"P", g.P}, {"R", g.R}, {"u", g.u}, {"arcs", arcs_kind}, {"bound", "P^(u-k)"}};
      if (arcs_kind != "full") config["Q"] = Q;
      report = single_row("moment", config, params, m.value, std::pow(g.P, g.u - g.k));
    } else if (ver->parsed()) {
      report = run_verify(suite, g.seed);
    } else if (sw->parsed()) {
      ExperimentConfig cfg = ExperimentConfig::defaults(experiment);
      auto given = [&](const char* name) { return app.count(name) > 0; };
      if (given("--k")) cfg.k = g.k;
      if (given("--t")) cfg.t = g.t;
      if (given("--u")) cfg.u = g.u;
      if (given("--omega")) cfg.omega = g.omega;
      if (given("--Q")) cfg.Q = g.Q;
      if (given("--R")) cfg.R = g.R;
      if (given("--epsilon")) cfg.epsilon = g.epsilon;
      if (given("--P")) cfg.P_list = {g.P};
      if (!P_list.empty()) cfg.P_list = P_list;
      if (!Q_list.empty()) cfg.Q_list = Q_list;
      cfg.omega_prime = omega_prime;
      cfg.eta = eta;
      cfg.delta = delta;
      cfg.c = c;
      cfg.samples = samples;
      cfg.grid_per_arc = g.grid_per_arc;
      cfg.seed = g.seed;
      cfg.max_samples = max_samples;
      report = run_sweep(cfg);
    }
    if (report.wall_time_s == 0.0) {
      report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    emit(report, g);
    return report.all_hold() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
