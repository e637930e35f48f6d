#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "smoothweyl/arithmetic.hpp"
#include "smoothweyl/moments.hpp"

using namespace swl;

namespace {

// composite Simpson on |int_Y^X f(w) e(gamma w^k) dw|
double simpson_oscillatory(const std::function<double(double)>& f, unsigned k, double gamma, double Y, double X,
                           int n) {
  const double h = (X - Y) / n;
  std::complex<double> s = 0;
  for (int i = 0; i <= n; ++i) {
    const double w = Y + i * h;
    const double c = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += c * f(w) * oracle::e(gamma * std::pow(w, k));
  }
  return std::abs(s * h / 3.0);
}

// exact weighted integral when Z = {1}: the sum is e(alpha) with |.| = 1
double upsilon_integral_oracle(unsigned k, double X, double Q, double Y, double delta) {
  const double Xk = std::pow(X, k);
  double total = 0;
  for (std::uint64_t q = 1; q <= static_cast<std::uint64_t>(Q); ++q) {
    const double w = Y / (static_cast<double>(q) * Xk);
    const double per_side = (1.0 - std::pow(1.0 + Xk * w, 1.0 - delta)) / (Xk * (delta - 1.0));
    // q = 1 has half arcs at 0 and 1, together one full arc
    total += oracle::kappa_sq(k, q).get_d() * 2.0 * per_side * static_cast<double>(oracle::phi(q));
  }
  return total;
}

}  // namespace

TEST_SUITE("moments") {

TEST_CASE("trapezoid rule") {
  CHECK(trapezoid_panels(0, 1, 0.1, 64) == 64);
  CHECK(trapezoid_panels(0, 1, 0.001, 64) == 1000);
  CHECK(trapezoid_panels(0, 1, 0.3, 3) == 4);
  CHECK(trapezoid_panels(1, 1, 0.1, 64) == 0);
  CHECK_THROWS_AS(trapezoid_panels(0, 1, 0.0, 64), std::invalid_argument);
  // exact for trigonometric polynomials over a full period
  const auto r = trapezoid([](double x) { return std::pow(std::sin(2 * M_PI * 3 * x), 2); }, 0, 1, 0.01, 64);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-14));
  const auto s = trapezoid([](double x) { return x * x; }, 0, 1, 1e-3, 64);
  CHECK(s.value == doctest::Approx(1.0 / 3).epsilon(1e-6));
  CHECK(std::abs(s.value - 1.0 / 3) <= 1.01 * s.error);
  CHECK(s.samples == 1001);
}

TEST_CASE("exact even moments") {
  const SmoothSet a = sieve_smooth(10, 3);
  CHECK(exact_even_moment(3, a, 1) == a.size());
  CHECK(exact_even_moment(3, a, 2) == 91);
  CHECK(exact_even_moment(2, sieve_smooth(5, 2), 2) == 15);
  for (auto [P, R, k] : {std::tuple{30.0, 5.0, 2u}, {25.0, 25.0, 3u}, {40.0, 3.0, 2u}}) {
    const SmoothSet s = sieve_smooth(P, R);
    for (unsigned t = 1; t <= 2; ++t) CHECK(exact_even_moment(k, s, t) == oracle::even_moment(k, s.elements(), t));
  }
  CHECK(exact_even_moment(2, sieve_smooth(12, 3), 3) == oracle::even_moment(2, sieve_smooth(12, 3).elements(), 3));
  CHECK_THROWS_AS(exact_even_moment(3, a, 0), std::domain_error);
  CHECK_THROWS_AS(exact_even_moment(3, sieve_smooth(1000, 10), 3, 1000), ResourceError);
}

TEST_CASE("moments by quadrature") {
  const SmoothSet a = sieve_smooth(10, 3);
  const IntervalSet unit = IntervalSet::unit();
  CHECK(quad_moment(3, a, unit, 2).value == doctest::Approx(7.0).epsilon(1e-12));
  const MomentResult m4 = quad_moment(3, a, unit, 4);
  CHECK(m4.value == doctest::Approx(91.0).epsilon(1e-10));
  CHECK(m4.intervals == 1);
  CHECK(m4.measure == 1.0);
  CHECK(quad_moment(3, a, IntervalSet(), 5).value == 0.0);
  const SmoothSet b = sieve_smooth(20, 4);
  CHECK(quad_moment(3, b, unit, 6).value == doctest::Approx(exact_even_moment(3, b, 3)).epsilon(1e-9));
  QuadratureOptions tight;
  tight.max_samples = 1000;
  CHECK_THROWS_AS(quad_moment(3, b, unit, 4, tight), ResourceError);
  CHECK(quad_moment_samples(3, b, unit) == 8 * 8000 + 1);
  CHECK_THROWS_AS(quad_moment(3, a, unit, 0.5), std::domain_error);
}

TEST_CASE("moment over arcs sums over disjoint pieces") {
  const SmoothSet s = sieve_smooth(30, 5);
  const IntervalSet major = major_arcs(3, 30.0, 20.0);
  const IntervalSet minor = major.complement();
  const double whole = quad_moment(3, s, IntervalSet::unit(), 4).value;
  const MomentResult a = quad_moment(3, s, major, 4), b = quad_moment(3, s, minor, 4);
  // the unit interval is a full period, so only the pieces carry endpoint error
  CHECK(std::abs(a.value + b.value - whole) <= 2.0 * (a.estimated_quadrature_error + b.estimated_quadrature_error));
  CHECK(a.value + b.value == doctest::Approx(whole).epsilon(1e-4));
  CHECK(whole == doctest::Approx(exact_even_moment(3, s, 2)).epsilon(1e-9));
}

TEST_CASE("weighted mean value over arcs") {
  const std::vector<std::uint64_t> none;
  CHECK(lemma41_mean_value(3, 1, 10, 3, 3, 1.5, none).lhs == 0.0);
  QuadratureOptions fine;
  fine.min_samples_per_interval = 1 << 14;
  const std::vector<std::uint64_t> one{1};
  for (auto [X, Q, Y, delta] : {std::tuple{10.0, 3.0, 3.0, 1.5}, {6.0, 5.0, 2.0, 2.0}, {20.0, 10.0, 10.0, 1.25}}) {
    const Lemma41Result r = lemma41_mean_value(3, 1, X, Q, Y, delta, one, fine);
    CHECK(r.lhs == doctest::Approx(upsilon_integral_oracle(3, X, Q, Y, delta)).epsilon(1e-6));
  }
  const SmoothSet z = sieve_smooth(50, 4);
  const Lemma41Result r = lemma41_mean_value(3, 1, 50, 7, 7, 1.5, z.elements());
  CHECK(std::isfinite(r.ratio));
  CHECK(r.ratio > 0.0);
  CHECK(r.main_term == doctest::Approx(0.02));
  CHECK(r.secondary_term == doctest::Approx(49.0 / 125000));
  CHECK_THROWS_AS(lemma41_mean_value(3, 1, 10, 3, 3, 1.0, one), std::domain_error);
  CHECK_THROWS_AS(lemma41_mean_value(3, 1, 10, 30, 30, 1.5, one), std::domain_error);
  const std::vector<std::uint64_t> big{11};
  CHECK_THROWS_AS(lemma41_mean_value(3, 1, 10, 3, 3, 1.5, big), std::domain_error);
}

TEST_CASE("monotone shapes") {
  CHECK(MonotoneShape::constant(2)(5) == 2);
  CHECK(MonotoneShape::power(-1)(4) == 0.25);
  CHECK(MonotoneShape::log_scaled(2)(std::exp(1.0) - 1) == doctest::Approx(2));
  const MonotoneShape t = MonotoneShape::tabulated({1, 2, 4}, {3, 2, 0});
  CHECK(t(1.5) == 2.5);
  CHECK(t(3) == 1);
  CHECK(t(0) == 3);
  CHECK(t.name() == "tabulated");
  CHECK_THROWS_AS(MonotoneShape::tabulated({1, 2, 3}, {0, 1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(MonotoneShape::tabulated({1, 1}, {0, 1}), std::invalid_argument);
}

TEST_CASE("oscillatory integral") {
  const OscillatoryResult flat = oscillatory_integral(MonotoneShape::constant(1), 2, 0, 1, 2);
  CHECK(flat.value == doctest::Approx(1.0));
  CHECK(flat.bound == doctest::Approx(8.0));
  const OscillatoryResult r = oscillatory_integral(MonotoneShape::constant(1), 2, 10, 1, 2);
  CHECK(r.bound == doctest::Approx(8.0 / 11));
  CHECK(r.holds);
  CHECK(r.value == doctest::Approx(simpson_oscillatory([](double) { return 1.0; }, 2, 10, 1, 2, 200000)).epsilon(1e-8));
  const OscillatoryResult inv = oscillatory_integral(MonotoneShape::power(-1), 3, 5, 1, 4);
  CHECK(inv.holds);
  CHECK(inv.value ==
        doctest::Approx(simpson_oscillatory([](double w) { return 1.0 / w; }, 3, 5, 1, 4, 400000)).epsilon(1e-7));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const double Y = 0.2 + unit(rng), X = Y + 0.1 + 2 * unit(rng), gamma = 20 * unit(rng) - 10;
    const MonotoneShape f = MonotoneShape::log_scaled(1.0);
    const OscillatoryResult o = oscillatory_integral(f, 2, gamma, Y, X);
    CHECK(o.holds);
    CHECK(o.value == doctest::Approx(simpson_oscillatory([](double w) { return std::log1p(w); }, 2, gamma, Y, X, 100000))
                         .epsilon(1e-7));
  }
  CHECK_THROWS_AS(oscillatory_integral(MonotoneShape::constant(1), 2, 1, 2, 1), std::domain_error);
  CHECK_THROWS_AS(oscillatory_integral(MonotoneShape::tabulated({1, 2}, {0, 1}), 2, 1, 1, 3), std::domain_error);
  CHECK_THROWS_AS(oscillatory_integral(MonotoneShape::constant(1), 3, 1e7, 1, 2), ResourceError);
}

TEST_CASE("representation counts") {
  auto brute = [](unsigned k, unsigned s, std::uint64_t N) {
    std::vector<std::uint64_t> out(N + 1, 0);
    std::vector<std::uint64_t> powers;
    for (std::uint64_t x = 1; std::pow(x, k) <= N; ++x) powers.push_back(static_cast<std::uint64_t>(std::llround(std::pow(x, k))));
    std::function<void(unsigned, std::uint64_t)> rec = [&](unsigned left, std::uint64_t sum) {
      if (left == 0) {
        ++out[sum];
        return;
      }
      for (auto p : powers) {
        if (sum + p > N) break;
        rec(left - 1, sum + p);
      }
    };
    rec(s, 0);
    return out;
  };
  CHECK(representation_counts(3, 4, 2000) == brute(3, 4, 2000));
  CHECK(representation_counts(2, 3, 500) == brute(2, 3, 500));
  CHECK(representation_counts(2, 5, 200) == brute(2, 5, 200));
  CHECK(representation_count(3, 2, 1729) == 4);
  CHECK(representation_count(2, 4, 4) == 1);
  CHECK(representation_count(3, 4, 3) == 0);
  CHECK_THROWS_AS(representation_count(3, 4, 100, 50), ResourceError);
  CHECK_THROWS_AS(representation_count(0, 4, 100), std::domain_error);
}

TEST_CASE("elementary inequalities") {
  const CheckResult small = verify_lemma_2_2(1e-12, 5);
  CHECK(small.lhs == doctest::Approx(5.0));
  CHECK(small.rhs == doctest::Approx(10.0));
  CHECK(small.holds);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double X = std::exp(30 * unit(rng) - 15), J = std::exp(12 * unit(rng) - 4);
    CHECK(verify_lemma_2_2(X, J).holds);
  }
  CHECK_THROWS_AS(verify_lemma_2_2(0, 1), std::domain_error);
  const CheckResult flat = verify_lemma_2_3(3, 10, 0.5, 0.0, 1024);
  CHECK(flat.lhs == doctest::Approx(1024.0 * (2 - std::ldexp(1.0, -10))));
  CHECK(flat.lhs / flat.rhs <= 2.0);
  CHECK(flat.holds);
  CHECK(dyadic_sum_grid_stability(3, 10, 0.5, 1024).holds);
  CHECK_THROWS_AS(verify_lemma_2_3(3, 11, 0.5, 0, 1024), std::domain_error);
  CHECK_THROWS_AS(verify_lemma_2_3(3, 10, 0.3, 0, 1024), std::domain_error);
}

}  // TEST_SUITE
