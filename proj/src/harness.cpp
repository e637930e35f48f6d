#include "smoothweyl/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "smoothweyl/arcs.hpp"
#include "smoothweyl/arithmetic.hpp"
#include "smoothweyl/expsums.hpp"
#include "smoothweyl/moments.hpp"
#include "smoothweyl/numeric.hpp"
#include "smoothweyl/smooth.hpp"

namespace swl {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Folds many individual checks into one, keeping the case with the
// smallest margin and counting violations.
class Aggregate {
 public:
  explicit Aggregate(std::string name) : name_(std::move(name)) {}

  void add(const CheckResult& c) {
    ++cases_;
    if (!c.holds) ++violations_;
    if (cases_ == 1 || (!c.holds && worst_.holds) || (c.holds == worst_.holds && c.margin < worst_.margin)) {
      worst_ = c;
    }
  }
  void add(bool holds, double lhs, double rhs, std::string detail = {}) {
    add(CheckResult{name_, holds, lhs, rhs, rhs - lhs, std::move(detail)});
  }

  void emit(ExperimentReport& report) const {
    CheckResult out = worst_;
    out.name = name_;
    out.holds = violations_ == 0;
    std::ostringstream d;
    d << "cases=" << cases_ << " violations=" << violations_;
    if (!worst_.detail.empty()) d << " worst: " << worst_.detail;
    out.detail = d.str();
    report.checks.push_back(std::move(out));
  }

 private:
  std::string name_;
  std::size_t cases_ = 0;
  std::size_t violations_ = 0;
  CheckResult worst_;
};

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
  return std::exp(d(rng));
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) {
    if (!out.empty()) out += ", ";
    out += x;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// configuration

ExperimentConfig ExperimentConfig::defaults(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "major_moment") {
    c.k = 3;
    c.t = 1;
    c.omega = 0.5;
    c.P_list = {16, 32, 64, 128};
  } else if (experiment == "narrow_decay") {
    c.k = 3;
    c.t = 1;
    c.u = 7.0;
    c.P_list = {128};
    c.Q_list = {8, 16, 32, 64};
  } else if (experiment == "weighted_mean") {
    c.k = 3;
    c.t = 1;
    c.delta = 1.5;
    c.P_list = {50, 100, 200};
  } else if (experiment == "envelope") {
    c.k = 3;
    c.P_list = {50, 100, 200, 400};
  } else {
    throw std::invalid_argument("unknown experiment '" + experiment + "' (expected " + join(sweep_experiments()) + ")");
  }
  return c;
}

double ExperimentConfig::R_for(double P) const { return eta ? std::max(2.0, std::pow(P, *eta)) : R; }

void ExperimentConfig::validate() const {
  auto fail = [&](const std::string& what) { throw std::domain_error(experiment + ": constraint violated: " + what); };
  if (k < 2) fail("k >= 2");
  if (P_list.empty()) fail("at least one P");
  for (double P : P_list) {
    if (!(P >= 2.0)) fail("P >= 2");
    const double r = R_for(P);
    if (!(r >= 2.0 && r <= P)) fail("2 <= R <= P");
  }
  if (!(epsilon > 0.0)) fail("epsilon > 0");
  if (!(c > 0.0)) fail("c > 0");
  if (eta && !(*eta > 0.0 && *eta <= 1.0)) fail("0 < eta <= 1");

  if (experiment == "major_moment") {
    if (k < 3) fail("k >= 3");
    if (t < k / 2) fail("t >= floor(k/2)");
    const double bound = (2.0 * t + 4.0) / (t + 10.0);
    if (!(omega > 0.0 && omega < bound)) fail("0 < omega < (2t+4)/(t+10)");
    if (omega_prime && !(*omega_prime > 0.0 && *omega_prime < 2.0 * k / (k + 4.0))) fail("omega' < 2k/(k+4)");
    if (P_list.size() < 2) fail("at least two P values for a slope");
  } else if (experiment == "narrow_decay") {
    if (k < 3) fail("k >= 3");
    if (t != k / 2) fail("t = floor(k/2)");
    if (!(u > 2.0 * t + 4.0)) fail("u > 2t+4");
    if (P_list.size() != 1) fail("exactly one P");
    if (Q_list.size() < 2) fail("at least two Q values for a slope");
    const double P = P_list.front();
    for (double Q : Q_list) {
      if (!(Q >= 1.0 && Q * Q <= std::pow(P, static_cast<double>(k)))) fail("1 <= Q <= P^(k/2)");
    }
  } else if (experiment == "weighted_mean") {
    if (k < 3) fail("k >= 3");
    if (t < 1) fail("t >= 1");
    if (!(delta > 1.0)) fail("delta > 1");
    for (double X : P_list) {
      const double Q_eff = Q > 0.0 ? Q : std::floor(std::sqrt(X));
      if (!(Q_eff >= 1.0)) fail("Q >= 1");
      if (!(Q_eff * Q_eff <= 0.25 * std::pow(X, static_cast<double>(k)))) fail("QY <= X^k/4");
    }
  } else if (experiment == "envelope") {
    for (double P : P_list) {
      const double Q_eff = Q > 0.0 ? Q : P;
      if (!(Q_eff >= 1.0 && Q_eff * Q_eff <= std::pow(P, static_cast<double>(k)))) fail("1 <= Q <= P^(k/2)");
    }
    if (samples == 0) fail("samples >= 1");
  } else {
    throw std::invalid_argument("unknown experiment '" + experiment + "' (expected " + join(sweep_experiments()) + ")");
  }
}

Json ExperimentConfig::to_json() const {
  Json j;
  j["experiment"] = experiment;
  j["k"] = k;
  j["t"] = t;
  j["u"] = u;
  j["omega"] = omega;
  if (omega_prime) j["omega_prime"] = *omega_prime;
  j["Q"] = Q;
  j["P_list"] = P_list;
  j["Q_list"] = Q_list;
  if (eta) {
    j["eta"] = *eta;
  } else {
    j["R"] = R;
  }
  j["epsilon"] = epsilon;
  j["c"] = c;
  j["delta"] = delta;
  j["grid_per_arc"] = grid_per_arc;
  j["samples"] = samples;
  j["seed"] = seed;
  j["max_samples"] = max_samples;
  return j;
}

std::vector<std::string> sweep_experiments() { return {"major_moment", "narrow_decay", "weighted_mean", "envelope"}; }

std::vector<std::string> verify_suites() { return {"arithmetic", "expsums", "arcs", "inequalities", "moments", "all"}; }

// ---------------------------------------------------------------------------
// verification suites

ExperimentReport verify_script_S_suite(std::span<const unsigned> ks, std::uint64_t all_q_max, std::size_t random_draws,
                                       std::uint64_t random_q_max, std::uint64_t seed) {
  ExperimentReport report;
  report.experiment = "script_S_bound";
  std::mt19937_64 rng(seed);
  for (unsigned k : ks) {
    WCache cache(k);
    Aggregate agg("script_S_bound_k" + std::to_string(k));
    for (std::uint64_t q = 1; q <= all_q_max; ++q) {
      for (std::uint64_t a = 0; a < q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        agg.add(verify_script_S_bound(cache, q, static_cast<std::int64_t>(a)));
      }
    }
    std::uniform_int_distribution<std::uint64_t> qd(1, random_q_max);
    for (std::size_t i = 0; i < random_draws;) {
      const std::uint64_t q = qd(rng);
      std::uniform_int_distribution<std::uint64_t> ad(0, q - 1);
      const std::uint64_t a = ad(rng);
      if (std::gcd(a, q) != 1) continue;
      agg.add(verify_script_S_bound(cache, q, static_cast<std::int64_t>(a)));
      ++i;
    }
    agg.emit(report);
  }
  return report;
}

ExperimentReport verify_W_suite(std::span<const unsigned> ks, std::uint64_t seed) {
  ExperimentReport report;
  report.experiment = "W_properties";
  for (unsigned k : ks) {
    WSampleSpec spec;
    spec.seed = seed + k;
    ExperimentReport sub = verify_W_properties(k, spec);
    for (auto& c : sub.checks) c.name += "_k" + std::to_string(k);
    report.append(sub);
  }
  return report;
}

ExperimentReport verify_kappa_divisor_suite(std::span<const unsigned> ks, std::uint64_t q_max, std::uint64_t p_max) {
  ExperimentReport report;
  report.experiment = "kappa_divisor";
  const auto primes = primes_up_to(static_cast<std::uint32_t>(p_max));
  for (unsigned k : ks) {
    Aggregate divisor("kappa_quotient_bound_k" + std::to_string(k));
    for (std::uint64_t q = 1; q <= q_max; ++q) divisor.add(verify_lemma_2_1(k, q));
    divisor.emit(report);
    Aggregate submult("kappa_submultiplicative_k" + std::to_string(k));
    for (std::uint32_t p : primes) {
      for (unsigned a = 0; a <= 3 * k; ++a) {
        for (unsigned b = a == 0 ? 1 : 0; b <= 3 * k; ++b) submult.add(verify_kappa_submult(k, p, a, b));
      }
    }
    submult.emit(report);
  }
  return report;
}

ExperimentReport verify_kappa_bounds_suite(std::uint64_t q_max, std::uint64_t p_max) {
  ExperimentReport report;
  report.experiment = "kappa_bounds";
  for (unsigned k = 2; k <= 6; ++k) {
    // lhs 1, rhs min over q of q kappa^2; holds iff kappa^2 >= 1/q exactly for every q
    bool holds = true;
    mpq_class worst = -1;
    std::uint64_t worst_q = 1;
    for (std::uint64_t q = 1; q <= q_max; ++q) {
      mpq_class scaled = kappa_squared(k, factorize(q)).value() * q;
      if (scaled < 1) holds = false;
      if (worst < 0 || scaled < worst) {
        worst = scaled;
        worst_q = q;
      }
    }
    add_check(report, "kappa_sq_lower_k" + std::to_string(k), holds, 1.0, to_double(worst),
              "min q kappa^2 at q=" + std::to_string(worst_q));
  }
  {
    bool holds = true;
    double worst_ratio = 0.0;
    std::uint64_t worst_q = 1;
    for (std::uint64_t q = 1; q <= q_max; ++q) {
      const Factorization f = factorize(q);
      mpz_class four_pow = 1;
      four_pow <<= 2 * omega(f);
      const mpq_class rhs(four_pow, mpz_class(static_cast<unsigned long>(q)));
      const mpq_class lhs = kappa_squared(2, f).value();
      if (lhs > rhs) holds = false;
      const double ratio = to_double(lhs / rhs);
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst_q = q;
      }
    }
    add_check(report, "kappa2_sq_upper", holds, worst_ratio, 1.0,
              "max kappa^2 q / 4^omega at q=" + std::to_string(worst_q));
  }
  {
    Aggregate closed("kappa3_series_closed_form");
    Aggregate small("kappa3_series_83_over_p");
    for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(p_max))) {
      const mpq_class series = kappa_weighted_series_limit(3, p, 4);
      mpq_class expected(mpz_class(82UL * p + 1), mpz_class(static_cast<unsigned long>(p)) * (p - 1));
      expected.canonicalize();
      const double diff = to_double(series - expected);
      closed.add(series == expected, std::abs(diff), 0.0, "p=" + std::to_string(p));
      if (p >= 89) {
        const mpq_class cap(83, p);
        small.add(series <= cap, to_double(series), to_double(cap), "p=" + std::to_string(p));
      }
    }
    closed.emit(report);
    small.emit(report);
  }
  return report;
}

namespace {

ArcClassification brute_classify(double alpha, double Q, double width) {
  const auto qmax = static_cast<std::int64_t>(std::floor(Q));
  for (std::int64_t q = 1; q <= qmax; ++q) {
    std::optional<ReducedFraction> best;
    double best_off = 0.0;
    for (std::int64_t a = 0; a <= q; ++a) {
      if (std::gcd(a, q) != 1 || !within_arc(alpha, q, a, width)) continue;
      const double off = std::abs(static_cast<double>(q) * alpha - static_cast<double>(a));
      if (!best || off < best_off) {
        best = ReducedFraction(a, q);
        best_off = off;
      }
    }
    if (best) return best;
  }
  return std::nullopt;
}

std::string describe(const ArcClassification& c) {
  if (!c) return "minor";
  return std::to_string(c->a) + "/" + std::to_string(c->q);
}

}  // namespace

ExperimentReport verify_dissection_suite(std::size_t samples, std::uint64_t seed) {
  ExperimentReport report;
  report.experiment = "dissection";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr std::size_t kConfigs = 100;
  const std::size_t per_config = std::max<std::size_t>(1, (samples + kConfigs - 1) / kConfigs);

  Aggregate agree("classify_matches_brute_force");
  Aggregate member("classify_matches_arc_union");
  Aggregate measure("measure_formula_matches_union");
  Aggregate nesting("arc_nesting");
  Aggregate narrow("narrow_measure_is_difference");
  std::size_t majors = 0, total = 0;

  for (std::size_t cfg = 0; cfg < kConfigs; ++cfg) {
    const unsigned k = 2 + static_cast<unsigned>(rng() % 3);
    const double P = static_cast<double>(4 + rng() % 37);
    const double qcap = std::min(std::pow(P, 0.5 * k), 150.0);
    const double Q = std::clamp(std::round(8.0 * log_uniform(rng, 1.0, qcap)) / 8.0, 1.0, qcap);
    const double width = Q / std::pow(P, static_cast<double>(k));
    const IntervalSet arcs = major_arcs(k, P, Q);

    for (std::size_t i = 0; i < per_config && total < samples; ++i, ++total) {
      double alpha = unit(rng);
      if (i % 2 == 1) {
        const auto qmax = static_cast<std::uint64_t>(std::floor(Q));
        const std::uint64_t q = 1 + rng() % qmax;
        const std::uint64_t a = rng() % (q + 1);
        alpha = static_cast<double>(a) / static_cast<double>(q) + (3.0 * unit(rng) - 1.5) * width / static_cast<double>(q);
        alpha -= std::floor(alpha);
      }
      const ArcClassification got = classify(alpha, k, P, Q);
      const ArcClassification want = brute_classify(alpha, Q, width);
      if (got) ++majors;
      std::ostringstream d;
      d.precision(17);
      d << "alpha=" << alpha << " k=" << k << " P=" << P << " Q=" << Q << " classify=" << describe(got)
        << " brute=" << describe(want);
      agree.add(got == want, got == want ? 0.0 : 1.0, 0.0, d.str());
      const bool inside = arcs.contains(alpha);
      member.add(inside == got.has_value(), inside == got.has_value() ? 0.0 : 1.0, 0.0, d.str());
    }

    const mpq_class Pq = exact(P), Qq = exact(Q);
    if (2.0 * Q * Q < std::pow(P, static_cast<double>(k))) {
      const mpq_class formula = major_arc_measure_formula(k, Pq, Qq);
      const mpq_class union_measure = arcs.measure();
      measure.add(formula == union_measure, to_double(union_measure), to_double(formula),
                  "k=" + std::to_string(k) + " P=" + format_double(P) + " Q=" + format_double(Q));
    }
    if (Q / 2.0 >= 1.0) {
      const IntervalSet half = major_arcs(k, Pq, Qq / 2);
      const std::string d = "k=" + std::to_string(k) + " P=" + format_double(P) + " Q=" + format_double(Q);
      const bool nested = arcs.contains(half);
      nesting.add(nested, nested ? 0.0 : 1.0, 0.0, d);
      if (nested) {
        const mpq_class diff = arcs.measure() - half.measure();
        const mpq_class nm = narrow_arcs(k, Pq, Qq).measure();
        narrow.add(nm == diff, to_double(nm), to_double(diff), d);
      }
    }
  }
  agree.emit(report);
  member.emit(report);
  measure.emit(report);
  nesting.emit(report);
  narrow.emit(report);
  ReportRow row;
  row.params = {{"samples", total}, {"major", majors}, {"configs", kConfigs}};
  row.value = static_cast<double>(majors);
  row.bound = static_cast<double>(total);
  row.ratio = static_cast<double>(majors) / static_cast<double>(std::max<std::size_t>(total, 1));
  report.rows.push_back(row);
  return report;
}

ExperimentReport verify_inequalities_suite(std::size_t draws_2_2, std::size_t draws_3_1, std::uint64_t seed) {
  ExperimentReport report;
  report.experiment = "inequalities";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Aggregate l22("harmonic_sum_bound");
  for (std::size_t i = 0; i < draws_2_2; ++i) {
    const double X = log_uniform(rng, 1e-6, 1e6);
    const double J = log_uniform(rng, 1.0, 1e6);
    l22.add(verify_lemma_2_2(X, J));
  }
  l22.emit(report);

  const std::vector<MonotoneShape> shapes = {
      MonotoneShape::constant(1.0),
      MonotoneShape::constant(2.5),
      MonotoneShape::power(-1.0),
      MonotoneShape::power(-0.5),
      MonotoneShape::power(-2.0),
      MonotoneShape::log_scaled(1.0),
      MonotoneShape::tabulated({0.1, 0.5, 1.0, 2.0, 3.0}, {4.0, 2.0, 1.5, 0.5, 0.25}),
      MonotoneShape::tabulated({0.1, 1.0, 2.0, 3.0}, {0.0, 1.0, 1.2, 3.0}),
  };
  Aggregate l31("oscillatory_bound");
  for (std::size_t i = 0; i < draws_3_1; ++i) {
    const MonotoneShape& f = shapes[i % shapes.size()];
    const unsigned k = 2 + static_cast<unsigned>(rng() % 3);
    const double Y = 0.2 + 1.8 * unit(rng);
    const double X = Y + (3.0 - Y) * (0.05 + 0.95 * unit(rng));
    const double gamma = (unit(rng) < 0.5 ? -1.0 : 1.0) * log_uniform(rng, 1e-3, 30.0);
    const OscillatoryResult r = oscillatory_integral(f, k, gamma, Y, X);
    std::ostringstream d;
    d << f.name() << " k=" << k << " gamma=" << gamma << " Y=" << Y << " X=" << X;
    l31.add(r.holds, r.value, r.bound, d.str());
  }
  l31.emit(report);

  for (unsigned k = 2; k <= 4; ++k) {
    for (double lambda : {1.0 / k + 0.05, 1.0}) {
      CheckResult c = dyadic_sum_grid_stability(k, 10, lambda, 1024.0);
      c.name += "_k" + std::to_string(k);
      report.checks.push_back(std::move(c));
    }
  }
  return report;
}

ExperimentReport verify_orthogonality_suite() {
  ExperimentReport report;
  report.experiment = "orthogonality";
  const unsigned k = 3;
  Aggregate agree("quadrature_matches_solution_count");
  for (auto [P, R] : {std::pair{10.0, 3.0}, std::pair{20.0, 4.0}}) {
    const SmoothSet s = sieve_smooth(P, R);
    for (unsigned t : {1u, 2u}) {
      const std::uint64_t exact_count = exact_even_moment(k, s, t);
      const MomentResult m = quad_moment(k, s, IntervalSet::unit(), 2.0 * t, {}, "full");
      const double rel = std::abs(m.value - static_cast<double>(exact_count)) / static_cast<double>(exact_count);
      std::ostringstream d;
      d << "P=" << P << " R=" << R << " t=" << t;
      agree.add(rel <= 0.005, rel, 0.005, d.str());
      ReportRow row;
      row.params = {{"k", k}, {"P", P}, {"R", R}, {"t", t}, {"card", s.size()}, {"samples", m.samples}};
      row.value = m.value;
      row.bound = static_cast<double>(exact_count);
      row.ratio = m.value / static_cast<double>(exact_count);
      report.rows.push_back(row);
      if (P == 10.0 && t == 2) {
        add_check(report, "fourth_moment_A_10_3", exact_count == 91, static_cast<double>(exact_count), 91.0,
                  "expected 91 solutions");
      }
    }
  }
  agree.emit(report);
  return report;
}

std::uint64_t lattice_count(unsigned k, unsigned s, std::uint64_t N) {
  if (s == 0) return 1;
  std::uint64_t total = 0;
  for (std::uint64_t x = 1;; ++x) {
    std::uint64_t p = 1;
    bool over = false;
    for (unsigned i = 0; i < k; ++i) {
      p *= x;
      if (p > N) {
        over = true;
        break;
      }
    }
    if (over) break;
    total += lattice_count(k, s - 1, N - p);
  }
  return total;
}

ExperimentReport verify_waring_suite(unsigned k, unsigned s, std::uint64_t N) {
  ExperimentReport report;
  report.experiment = "waring";
  const auto counts = representation_counts(k, s, N);
  std::uint64_t summed = 0;
  for (std::uint64_t n = 1; n <= N; ++n) summed += counts[n];
  const std::uint64_t direct = lattice_count(k, s, N);
  add_check(report, "summatory_identity", summed == direct, static_cast<double>(summed), static_cast<double>(direct),
            "k=" + std::to_string(k) + " s=" + std::to_string(s) + " N=" + std::to_string(N));
  ReportRow row;
  row.params = {{"k", k}, {"s", s}, {"N", N}};
  row.value = static_cast<double>(summed);
  row.bound = static_cast<double>(direct);
  row.ratio = direct == 0 ? 0.0 : static_cast<double>(summed) / static_cast<double>(direct);
  report.rows.push_back(row);
  return report;
}

ExperimentReport run_verify(const std::string& suite, std::uint64_t seed) {
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment = "verify_" + suite;
  report.config = {{"suite", suite}, {"seed", seed}};
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "arithmetic") {
    known = true;
    const unsigned ks[] = {2, 3, 4};
    report.append(verify_kappa_divisor_suite(ks));
    report.append(verify_kappa_bounds_suite());
  }
  if (all || suite == "expsums") {
    known = true;
    const unsigned s_ks[] = {2, 3, 4, 5};
    report.append(verify_script_S_suite(s_ks, 300, 1000, 5000, seed));
    const unsigned w_ks[] = {2, 3, 4};
    report.append(verify_W_suite(w_ks, seed));
  }
  if (all || suite == "arcs") {
    known = true;
    report.append(verify_dissection_suite(10'000, seed));
  }
  if (all || suite == "inequalities") {
    known = true;
    report.append(verify_inequalities_suite(10'000, 1000, seed));
  }
  if (all || suite == "moments") {
    known = true;
    report.append(verify_orthogonality_suite());
    report.append(verify_waring_suite());
  }
  if (!known) throw std::invalid_argument("unknown suite '" + suite + "' (expected " + join(verify_suites()) + ")");
  report.wall_time_s = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// sweeps

namespace {

QuadratureOptions quadrature_options(const ExperimentConfig& c) {
  QuadratureOptions o;
  o.max_samples = c.max_samples;
  if (c.grid_per_arc > 0) o.min_samples_per_interval = c.grid_per_arc;
  return o;
}

void require_budget(const std::string& what, std::uint64_t needed, std::uint64_t budget) {
  if (needed > budget) {
    std::ostringstream msg;
    msg << what << ": grid needs an estimated " << needed << " samples, budget is " << budget;
    throw ResourceError(msg.str());
  }
}

void fit_slope(ExperimentReport& report, const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const LineFit fit = least_squares(lx, ly);
  report.fitted_slope = fit.slope;
  report.slope_stderr = fit.slope_stderr;
}

ExperimentReport sweep_major_moment(const ExperimentConfig& c) {
  ExperimentReport report;
  const QuadratureOptions opts = quadrature_options(c);
  const double u = 2.0 * c.t + 4.0;
  const double exponent = u - static_cast<double>(c.k);

  struct Point {
    double P, Q;
    SmoothSet s;
    IntervalSet arcs;
  };
  std::vector<Point> points;
  std::uint64_t planned = 0;
  for (double P : c.P_list) {
    const double Q = std::max(1.0, std::pow(P, c.omega));
    Point p{P, Q, sieve_smooth(P, c.R_for(P)), major_arcs(c.k, P, Q)};
    planned += quad_moment_samples(c.k, p.s, p.arcs, opts);
    points.push_back(std::move(p));
  }
  require_budget("major_moment", planned, c.max_samples);

  std::vector<double> xs, ys;
  for (const auto& p : points) {
    const MomentResult m = quad_moment(c.k, p.s, p.arcs, u, opts, "major");
    ReportRow row;
    row.params = {{"P", p.P},           {"R", c.R_for(p.P)},  {"Q", p.Q},
                  {"card", p.s.size()}, {"intervals", m.intervals}, {"samples", m.samples},
                  {"quadrature_error", m.estimated_quadrature_error}};
    row.value = m.value;
    row.bound = std::pow(p.P, exponent);
    row.ratio = row.value / row.bound;
    report.rows.push_back(row);
    xs.push_back(p.P);
    ys.push_back(m.value);
  }
  fit_slope(report, xs, ys);
  const double gap = std::abs(*report.fitted_slope - exponent);
  add_check(report, "slope_near_2t_plus_4_minus_k", gap <= 0.5, gap, 0.5,
            "fitted slope " + format_double(*report.fitted_slope) + " against exponent " + format_double(exponent));
  return report;
}

ExperimentReport sweep_narrow_decay(const ExperimentConfig& c) {
  ExperimentReport report;
  const QuadratureOptions opts = quadrature_options(c);
  const double P = c.P_list.front();
  const SmoothSet s = sieve_smooth(P, c.R_for(P));
  const double tau_max = (c.u - 2.0 * c.t - 4.0) / (2.0 * c.k);

  std::vector<IntervalSet> sets;
  std::uint64_t planned = 0;
  for (double Q : c.Q_list) {
    sets.push_back(narrow_arcs(c.k, P, Q));
    planned += quad_moment_samples(c.k, s, sets.back(), opts);
  }
  require_budget("narrow_decay", planned, c.max_samples);

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < c.Q_list.size(); ++i) {
    const double Q = c.Q_list[i];
    const MomentResult m = quad_moment(c.k, s, sets[i], c.u, opts, "narrow");
    ReportRow row;
    row.params = {{"P", P},
                  {"R", c.R_for(P)},
                  {"Q", Q},
                  {"within_hypothesis", Q * Q <= P},
                  {"measure", m.measure},
                  {"intervals", m.intervals},
                  {"samples", m.samples},
                  {"quadrature_error", m.estimated_quadrature_error}};
    row.value = m.value;
    row.bound = std::pow(P, c.u - static_cast<double>(c.k));
    row.ratio = row.value / row.bound;
    report.rows.push_back(row);
    xs.push_back(Q);
    ys.push_back(m.value);
  }
  fit_slope(report, xs, ys);
  add_check(report, "Q_exponent_negative", *report.fitted_slope <= -0.01, *report.fitted_slope, -0.01,
            "decay target Q^-tau with 0 < tau < " + format_double(tau_max));
  report.config["tau_max"] = tau_max;
  return report;
}

ExperimentReport sweep_weighted_mean(const ExperimentConfig& c) {
  ExperimentReport report;
  const QuadratureOptions opts = quadrature_options(c);
  std::vector<double> ratios;
  bool finite = true;
  for (double X : c.P_list) {
    const double Q = c.Q > 0.0 ? c.Q : std::floor(std::sqrt(X));
    const double Y = Q;
    const SmoothSet Z = sieve_smooth(X, c.R_for(X));
    const Lemma41Result r = lemma41_mean_value(c.k, c.t, X, Q, Y, c.delta, Z.elements(), opts);
    ReportRow row;
    row.params = {{"X", X},
                  {"Q", Q},
                  {"Y", Y},
                  {"card", Z.size()},
                  {"arcs", r.arcs},
                  {"samples", r.samples},
                  {"main_term", r.main_term},
                  {"secondary_term", r.secondary_term},
                  {"quadrature_error", r.estimated_quadrature_error}};
    row.value = r.lhs;
    row.bound = r.main_term + r.secondary_term;
    row.ratio = r.ratio;
    report.rows.push_back(row);
    ratios.push_back(r.ratio);
    if (!std::isfinite(r.ratio)) finite = false;
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  add_check(report, "ratios_finite", finite, *hi, std::numeric_limits<double>::infinity());
  const double spread = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  add_check(report, "ratio_spread_at_most_5", spread <= 5.0, spread, 5.0, "max ratio / min ratio across X");
  return report;
}

ExperimentReport sweep_envelope(const ExperimentConfig& c) {
  ExperimentReport report;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  struct Point {
    double P, Q;
    std::vector<Arc> arcs;
    std::size_t per_arc;
  };
  std::vector<Point> points;
  std::uint64_t planned = 0;
  for (double P : c.P_list) {
    const double Q = c.Q > 0.0 ? c.Q : P;
    const mpq_class Pk = exact(std::pow(P, static_cast<double>(c.k)));
    Point p{P, Q, enumerate_arcs(exact(Q), exact(Q) / Pk), 0};
    p.per_arc = c.grid_per_arc > 0 ? c.grid_per_arc : (c.samples + p.arcs.size() - 1) / p.arcs.size();
    planned += p.per_arc * p.arcs.size();
    points.push_back(std::move(p));
  }
  require_budget("envelope", planned, c.max_samples);

  std::vector<double> maxima;
  bool finite = true;
  for (const auto& p : points) {
    const SmoothSet s = sieve_smooth(p.P, c.R_for(p.P));
    const WeylSumEvaluator g(c.k, s);
    EnvelopeParams params;
    params.k = c.k;
    params.P = p.P;
    params.R = c.R_for(p.P);
    params.epsilon = c.epsilon;
    params.c = c.c;
    params.validate();
    const double L = params.L();

    double best = -1.0, best_value = 0.0, best_bound = 0.0, best_alpha = 0.0;
    std::int64_t best_q = 0;
    double best12 = 0.0;
    std::size_t taken = 0, unclassified = 0;
    for (const auto& arc : p.arcs) {
      const double lo = to_double(arc.span.lo), hi = to_double(arc.span.hi);
      for (std::size_t j = 0; j < p.per_arc; ++j) {
        double alpha = lo + (static_cast<double>(j) + unit(rng)) * (hi - lo) / static_cast<double>(p.per_arc);
        if (alpha >= 1.0) alpha = std::nextafter(1.0, 0.0);
        const ArcClassification frac = classify(alpha, c.k, p.P, p.Q);
        if (!frac) {
          ++unclassified;
          continue;
        }
        ++taken;
        const double mod = std::abs(g(alpha));
        const double env = envelope_thm11(alpha, *frac, params, SumKind::Full);
        const double ratio = mod / env;
        if (ratio > best) {
          best = ratio;
          best_value = mod;
          best_bound = env;
          best_alpha = alpha;
          best_q = frac->q;
        }
        if (static_cast<double>(frac->q) <= L) {
          best12 = std::max(best12, mod / envelope_thm12(alpha, *frac, params, SumKind::Full));
        }
      }
    }
    ReportRow row;
    row.params = {{"P", p.P},
                  {"R", params.R},
                  {"Q", p.Q},
                  {"arcs", p.arcs.size()},
                  {"samples", taken},
                  {"unclassified", unclassified},
                  {"argmax_alpha", best_alpha},
                  {"argmax_q", best_q},
                  {"small_q_envelope_max_ratio", best12}};
    row.value = best_value;
    row.bound = best_bound;
    row.ratio = best;
    report.rows.push_back(row);
    maxima.push_back(best);
    if (!std::isfinite(best) || best < 0.0) finite = false;
  }
  add_check(report, "max_ratio_finite", finite, *std::max_element(maxima.begin(), maxima.end()),
            std::numeric_limits<double>::infinity());
  add_check(report, "max_ratio_growth_at_most_3", maxima.back() <= 3.0 * maxima.front(), maxima.back(),
            3.0 * maxima.front(), "last P against first P");
  return report;
}

}  // namespace

ExperimentReport run_sweep(const ExperimentConfig& config) {
  config.validate();
  const auto start = Clock::now();
  ExperimentReport report;
  if (config.experiment == "major_moment") {
    report = sweep_major_moment(config);
  } else if (config.experiment == "narrow_decay") {
    report = sweep_narrow_decay(config);
  } else if (config.experiment == "weighted_mean") {
    report = sweep_weighted_mean(config);
  } else {
    report = sweep_envelope(config);
  }
  report.experiment = config.experiment;
  Json cfg = config.to_json();
  for (auto& [key, value] : report.config.items()) cfg[key] = value;
  report.config = std::move(cfg);
  report.wall_time_s = seconds_since(start);
  return report;
}

}  // namespace swl
