#pragma once

// Slow reference implementations used only by the tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include <gmpxx.h>

namespace oracle {

inline std::vector<std::pair<std::uint64_t, unsigned>> trial_factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::uint64_t phi(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t r = 1; r <= n; ++r) c += std::gcd(r, n) == 1;
  return c;
}

// kappa^2 straight from the case split on e = uk + v, 1 <= v <= k
inline mpq_class kappa_sq(unsigned k, std::uint64_t q) {
  mpq_class r = 1;
  for (auto [p, e] : trial_factor(q)) {
    unsigned u = 0, v = e;
    while (v > k) {
      v -= k;
      ++u;
    }
    mpz_class pp = 1;
    for (unsigned i = 0; i < 2 * u + 1; ++i) pp *= p;
    if (v == 1) {
      r *= mpq_class(mpz_class(k * k), pp);
    } else {
      r *= mpq_class(mpz_class(1), pp * p);
    }
  }
  r.canonicalize();
  return r;
}

inline std::vector<std::uint64_t> smooth(std::uint64_t P, std::uint64_t R) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= P; ++n) {
    std::uint64_t m = n;
    for (std::uint64_t p = 2; p <= R; ++p) {
      while (m % p == 0) m /= p;
    }
    if (m == 1) out.push_back(n);
  }
  return out;
}

inline std::complex<double> e(double x) {
  return std::polar(1.0, 2.0 * std::numbers::pi * (x - std::floor(x)));
}

inline std::complex<double> S(unsigned k, std::uint64_t q, std::int64_t a, bool reduced) {
  std::complex<double> s = 0;
  for (std::uint64_t r = 1; r <= q; ++r) {
    if (reduced && std::gcd(r, q) != 1) continue;
    mpz_class rk;
    mpz_ui_pow_ui(rk.get_mpz_t(), r, k);
    mpz_class m = (rk * a) % q;
    if (m < 0) m += q;
    s += e(static_cast<double>(m.get_ui()) / static_cast<double>(q));
  }
  return s;
}

// number of solutions of x_1^k + ... + x_t^k = y_1^k + ... + y_t^k over xs
inline std::uint64_t even_moment(unsigned k, const std::vector<std::uint64_t>& xs, unsigned t) {
  std::vector<std::uint64_t> sums{0};
  for (unsigned i = 0; i < t; ++i) {
    std::vector<std::uint64_t> next;
    for (auto s : sums) {
      for (auto x : xs) {
        std::uint64_t p = 1;
        for (unsigned j = 0; j < k; ++j) p *= x;
        next.push_back(s + p);
      }
    }
    sums = std::move(next);
  }
  std::uint64_t count = 0;
  for (auto a : sums) {
    for (auto b : sums) count += a == b;
  }
  return count;
}

}  // namespace oracle
