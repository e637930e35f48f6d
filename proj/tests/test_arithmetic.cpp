#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "smoothweyl/arithmetic.hpp"

using namespace swl;

TEST_SUITE("arithmetic") {

TEST_CASE("factorize small values") {
  CHECK(factorize(1).factors().empty());
  CHECK(factorize(12).factors() == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(factorize(97).factors() == std::vector<PrimePower>{{97, 1}});
  CHECK_THROWS_AS(factorize(0), std::domain_error);
}

TEST_CASE("factorize agrees with trial division") {
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    const auto ref = oracle::trial_factor(n);
    const auto got = factorize(n).factors();
    REQUIRE(got.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(got[i].prime == ref[i].first);
      CHECK(got[i].exponent == ref[i].second);
    }
  }
}

TEST_CASE("factorize large composites") {
  // two primes above the trial-division table
  const std::uint64_t p = 1'000'003, q = 4'294'967'291ULL;
  const auto f = factorize(p * q).factors();
  REQUIRE(f.size() == 2);
  CHECK(f[0].prime == p);
  CHECK(f[1].prime == q);
  const auto g = factorize(std::uint64_t{1'000'003} * 1'000'003 * 1'000'033).factors();
  REQUIRE(g.size() == 2);
  CHECK(g[0] == PrimePower{1'000'003, 2});
  CHECK(g[1] == PrimePower{1'000'033, 1});
  CHECK(is_prime(18446744073709551557ULL));
  CHECK_FALSE(is_prime(18446744073709551615ULL));
}

TEST_CASE("Factorization rejects inconsistent input") {
  CHECK_THROWS_AS(Factorization(12, {{2, 1}, {3, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Factorization(12, {{3, 1}, {2, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(Factorization(8, {{4, 1}, {2, 1}}), std::invalid_argument);
  CHECK_NOTHROW(Factorization(12, {{2, 2}, {3, 1}}));
}

TEST_CASE("phi, psi and divisors") {
  for (std::uint64_t n = 1; n <= 500; ++n) {
    const Factorization f = factorize(n);
    CHECK(euler_phi(f) == oracle::phi(n));
    mpq_class expected(mpz_class(n), mpz_class(oracle::phi(n)));
    expected.canonicalize();
    CHECK(psi(f) == expected);
    CHECK(psi_value(f) == doctest::Approx(static_cast<double>(n) / oracle::phi(n)).epsilon(1e-14));
    std::vector<std::uint64_t> ds;
    for (std::uint64_t d = 1; d <= n; ++d) {
      if (n % d == 0) ds.push_back(d);
    }
    CHECK(divisors(f) == ds);
  }
}

TEST_CASE("kappa squared examples") {
  CHECK(kappa_squared(3, factorize(1)).value() == 1);
  CHECK(kappa_squared(3, factorize(2)).value() == mpq_class(9, 2));
  CHECK(kappa_squared(3, factorize(2)).kappa() == doctest::Approx(2.1213203).epsilon(1e-7));
  CHECK(kappa_squared(3, factorize(8)).value() == mpq_class(1, 4));
  CHECK(kappa_squared(2, factorize(8)).value() == mpq_class(1, 2));
  CHECK_THROWS_AS(kappa_sq_prime_power(1, 2, 1), std::domain_error);
}

TEST_CASE("kappa squared matches the case-split oracle") {
  for (unsigned k = 2; k <= 6; ++k) {
    for (std::uint64_t q = 1; q <= 2000; ++q) {
      const mpq_class ref = oracle::kappa_sq(k, q);
      const Factorization f = factorize(q);
      REQUIRE(kappa_squared(k, f).value() == ref);
      CHECK(kappa_sq(k, f) == doctest::Approx(ref.get_d()).epsilon(1e-13));
    }
  }
}

TEST_CASE("kappa drops by 1/p every k steps") {
  for (unsigned k = 2; k <= 5; ++k) {
    for (std::uint64_t p : {2, 3, 7, 101}) {
      for (unsigned l = 1; l <= 3 * k; ++l) {
        CHECK(kappa_sq_prime_power(k, p, l + k) * mpq_class(mpz_class(p * p)) == kappa_sq_prime_power(k, p, l));
      }
    }
  }
}

TEST_CASE("k-full decomposition") {
  CHECK(kfull_decompose(3, 1).parts == std::vector<std::uint64_t>{1, 1, 1});
  CHECK(kfull_decompose(3, 12).parts == std::vector<std::uint64_t>{3, 2, 1});
  CHECK(kfull_decompose(3, 8).parts == std::vector<std::uint64_t>{1, 1, 2});
  for (unsigned k = 2; k <= 5; ++k) {
    for (std::uint64_t n = 1; n <= 3000; ++n) {
      const auto d = kfull_decompose(k, n);
      REQUIRE(recompose(d) == n);
      // the first k-1 parts are squarefree and pairwise coprime
      for (unsigned i = 0; i + 1 < k; ++i) {
        for (auto [p, e] : oracle::trial_factor(d.parts[i])) CHECK(e == 1);
        for (unsigned j = i + 1; j + 1 < k; ++j) CHECK(std::gcd(d.parts[i], d.parts[j]) == 1);
      }
    }
  }
  CHECK_THROWS_AS(kfull_decompose(3, 0), std::domain_error);
}

TEST_CASE("divisor inequality and submultiplicativity") {
  CHECK(verify_lemma_2_1(3, 1).holds);
  CHECK(verify_lemma_2_1(3, 12).holds);
  CHECK(verify_lemma_2_1(2, 360).holds);
  for (unsigned k = 2; k <= 4; ++k) {
    for (std::uint64_t p : {2, 3, 5, 97}) {
      for (unsigned a = 0; a <= 3 * k; ++a) {
        for (unsigned b = a == 0 ? 1 : 0; b <= 3 * k; ++b) CHECK(verify_kappa_submult(k, p, a, b).holds);
      }
    }
  }
  CHECK_THROWS_AS(verify_kappa_submult(3, 4, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(verify_kappa_submult(3, 5, 0, 0), std::invalid_argument);
}

TEST_CASE("kappa-weighted series") {
  CHECK(kappa_weighted_series(3, 5, 4, 0) == 0);
  CHECK(kappa_weighted_series(3, 5, 4, 1) == mpq_class(81, 5));
  CHECK(kappa_weighted_series_limit(3, 5, 4) == mpq_class(411, 20));
  // after 3m terms the tail is exactly lim / p^m
  const mpq_class lim = kappa_weighted_series_limit(3, 7, 4);
  mpz_class p20;
  mpz_ui_pow_ui(p20.get_mpz_t(), 7, 20);
  CHECK(lim - kappa_weighted_series(3, 7, 4, 60) == lim / p20);
  for (std::uint64_t p : primes_up_to(200)) {
    mpq_class expected(mpz_class(82 * p + 1), mpz_class(p * (p - 1)));
    expected.canonicalize();
    CHECK(kappa_weighted_series_limit(3, p, 4) == expected);
  }
  CHECK_THROWS_AS(kappa_weighted_series_limit(4, 5, 4), std::domain_error);
  CHECK_THROWS_AS(kappa_weighted_series(3, 5, 3, 2), std::invalid_argument);
}

TEST_CASE("vw sum against divisor enumeration") {
  CHECK(vw_sum(3, 1, 1).value == doctest::Approx(1.0));
  CHECK(vw_sum(3, 1, 2).value == doctest::Approx(46.0));
  auto brute = [](unsigned k, unsigned t, std::uint64_t Q) {
    double total = 0;
    for (std::uint64_t q = 1; q <= Q; ++q) {
      double sigma = 0;
      for (std::uint64_t r = 1; r <= q; ++r) {
        if (q % r == 0) sigma += static_cast<double>(r) * std::pow(oracle::kappa_sq(k, r).get_d(), t);
      }
      total += oracle::kappa_sq(k, q).get_d() * sigma;
    }
    return total;
  };
  CHECK(vw_sum(4, 2, 100).value == doctest::Approx(brute(4, 2, 100)).epsilon(1e-12));
  CHECK(vw_sum(3, 1, 60).value == doctest::Approx(brute(3, 1, 60)).epsilon(1e-12));
  CHECK_THROWS_AS(vw_sum(3, 1, 0), std::domain_error);
}

TEST_CASE("to_double rounds to nearest") {
  CHECK(to_double(mpq_class(3, 500)) == 0.006);
  CHECK(to_double(mpq_class(1, 3)) == 1.0 / 3.0);
  CHECK(to_double(mpq_class(-2, 7)) == -2.0 / 7.0);
  CHECK(to_double(mpq_class(0)) == 0.0);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(static_cast<double>(rng() >> 11), -static_cast<int>(rng() % 80));
    CHECK(to_double(mpq_class(x)) == x);
    // a rational strictly between x and its successor rounds to one of them
    const double next = std::nextafter(x, std::numeric_limits<double>::infinity());
    const mpq_class third = mpq_class(x) + (mpq_class(next) - mpq_class(x)) / 3;
    CHECK(to_double(third) == x);
  }
}

}  // TEST_SUITE
