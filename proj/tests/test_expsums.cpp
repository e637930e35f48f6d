#include <doctest.h>

#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "smoothweyl/arithmetic.hpp"
#include "smoothweyl/expsums.hpp"

using namespace swl;

namespace {

// g(alpha) with the phase x^k alpha reduced exactly in rationals
Complex weyl_oracle(unsigned k, double alpha, const std::vector<std::uint64_t>& xs) {
  const mpq_class a(alpha);
  Complex s = 0;
  for (auto x : xs) {
    mpz_class xk;
    mpz_ui_pow_ui(xk.get_mpz_t(), x, k);
    mpq_class phase = a * xk;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), phase.get_num_mpz_t(), phase.get_den_mpz_t());
    phase -= fl;
    s += oracle::e(to_double(phase));
  }
  return s;
}

double script_S_oracle(unsigned k, std::uint64_t q, std::int64_t a) {
  double total = 0;
  for (std::uint64_t d = 1; d <= q; ++d) {
    if (q % d != 0) continue;
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), q / d, k - 1);
    m = (m * a) % d;
    const double psi_d = static_cast<double>(d) / static_cast<double>(oracle::phi(d));
    total += psi_d * std::abs(oracle::S(k, d, m.get_si(), true));
  }
  return total / static_cast<double>(q);
}

}  // namespace

TEST_SUITE("expsums") {

TEST_CASE("Weyl sum examples") {
  const SmoothSet s = sieve_smooth(10, 3);
  CHECK(std::abs(weyl_sum(3, 0.0, s) - Complex(7, 0)) < 1e-12);
  CHECK(std::abs(weyl_sum(3, 1.0, s) - Complex(7, 0)) < 1e-12);
  CHECK(std::abs(weyl_sum(3, 0.5, s) - Complex(1, 0)) < 1e-12);
}

TEST_CASE("Weyl sum against exact phase reduction") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto [P, R, k] : {std::tuple{1000.0, 7.0, 3u}, {5000.0, 20.0, 4u}, {200.0, 200.0, 5u}, {100000.0, 3.0, 3u}}) {
    const SmoothSet s = sieve_smooth(P, R);
    const WeylSumEvaluator g(k, s);
    CHECK(g.size() == s.size());
    for (int i = 0; i < 40; ++i) {
      const double alpha = unit(rng);
      const Complex ref = weyl_oracle(k, alpha, s.elements());
      CHECK(std::abs(g(alpha) - ref) < 1e-9 * static_cast<double>(s.size()));
    }
  }
}

TEST_CASE("Weyl sum is 1-periodic and conjugate symmetric") {
  const SmoothSet s = sieve_smooth(300, 11);
  const WeylSumEvaluator g(3, s);
  // dyadic points, so that 1 - alpha and alpha - 1 are exact
  for (double alpha : {0.09375, 0.234375, 0.7734375, 0.5}) {
    CHECK(std::abs(g(alpha) - std::conj(g(1.0 - alpha))) < 1e-10);
    CHECK(std::abs(g(alpha) - g(alpha - 1.0)) < 1e-10);
  }
}

TEST_CASE("complete and reduced sums") {
  CHECK(std::abs(complete_sum_S(3, 1, 5) - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(complete_sum_S(3, 2, 1)) < 1e-12);
  CHECK(std::abs(complete_sum_S(2, 4, 1) - Complex(2, 2)) < 1e-12);
  CHECK(std::abs(reduced_sum_W(2, 1, 7) - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(reduced_sum_W(2, 5, 1) - Complex(1.2360679774997896, 0)) < 1e-12);
  CHECK(std::abs(reduced_sum_W(2, 16, 1)) < 1e-9);
  CHECK_THROWS_AS(reduced_sum_W(2, 0, 1), std::domain_error);
  for (unsigned k = 2; k <= 4; ++k) {
    for (std::uint64_t q = 1; q <= 60; ++q) {
      for (std::int64_t a : {1, 2, 5, -3}) {
        CHECK(std::abs(complete_sum_S(k, q, a) - oracle::S(k, q, a, false)) < 1e-9);
        CHECK(std::abs(reduced_sum_W(k, q, a) - oracle::S(k, q, a, true)) < 1e-9);
      }
    }
  }
}

TEST_CASE("complete sum splits over divisors") {
  for (unsigned k = 2; k <= 4; ++k) {
    for (std::uint64_t q = 1; q <= 80; ++q) {
      Complex total = 0;
      for (std::uint64_t d = 1; d <= q; ++d) {
        if (q % d != 0) continue;
        mpz_class m;
        mpz_ui_pow_ui(m.get_mpz_t(), q / d, k - 1);
        total += reduced_sum_W(k, d, mpz_class(m * 3 % d).get_si());
      }
      CHECK(std::abs(total - complete_sum_S(k, q, 3)) < 1e-9);
    }
  }
}

TEST_CASE("reduced sum is multiplicative") {
  for (unsigned k = 2; k <= 4; ++k) {
    for (auto [r1, r2] : {std::pair<std::int64_t, std::int64_t>{2, 5}, {9, 4}, {7, 16}, {25, 27}}) {
      for (std::int64_t c : {1, 2, 11}) {
        if (std::gcd(c, r1 * r2) != 1) continue;
        const Complex lhs = reduced_sum_W(k, r1 * r2, c);
        std::int64_t m1 = c, m2 = c;
        for (unsigned i = 0; i + 1 < k; ++i) {
          m1 = m1 * r2 % r1;
          m2 = m2 * r1 % r2;
        }
        CHECK(std::abs(lhs - reduced_sum_W(k, r1, m1) * reduced_sum_W(k, r2, m2)) < 1e-9);
      }
    }
  }
}

TEST_CASE("Weil-type bound at primes") {
  for (unsigned k = 2; k <= 5; ++k) {
    for (std::uint64_t p : primes_up_to(200)) {
      const double bound = (static_cast<double>(std::gcd<std::uint64_t>(k, p - 1)) - 1.0) * std::sqrt(p) + 1.0;
      CHECK(std::abs(reduced_sum_W(k, p, 1)) <= bound + 1e-9);
    }
  }
}

TEST_CASE("script S examples and oracle") {
  CHECK(script_S(3, 1, 1) == doctest::Approx(1.0));
  CHECK(script_S(2, 2, 1) == doctest::Approx(1.5));
  CHECK(script_S(3, 4, 1) == doctest::Approx(0.75));
  CHECK_THROWS_AS(script_S(3, 4, 2), std::invalid_argument);
  CHECK_THROWS_AS(script_S(3, 0, 1), std::domain_error);
  WCache cache(3);
  for (std::uint64_t q = 1; q <= 120; ++q) {
    for (std::int64_t a = 1; a <= static_cast<std::int64_t>(q); ++a) {
      if (std::gcd<std::uint64_t>(a, q) != 1) continue;
      if (q > 40 && a % 7 != 1) continue;
      CHECK(script_S(cache, q, a) == doctest::Approx(script_S_oracle(3, q, a)).epsilon(1e-10));
      CHECK(verify_script_S_bound(cache, q, a).holds);
    }
  }
  CHECK(cache.size() > 0);
}

TEST_CASE("W properties report") {
  WSampleSpec spec;
  spec.vanishing_max_modulus = 2000;
  spec.vanishing_a_samples = 20;
  spec.weil_max_prime = 60;
  spec.identity_instances = 40;
  spec.identity_max_modulus = 500;
  for (unsigned k = 2; k <= 4; ++k) {
    const ExperimentReport r = verify_W_properties(k, spec);
    CHECK(r.checks.size() >= 4);
    CHECK(r.all_hold());
  }
}

}  // TEST_SUITE
