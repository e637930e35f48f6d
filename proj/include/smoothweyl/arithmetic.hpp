#pragma once

// Multiplicative arithmetic functions: factorization, phi, omega, psi and
// the kappa_k function that controls complete exponential sums. Kappa is
// irrational in general (it carries half-integral powers of p) but its
// square is always rational, so every inequality in which it appears is
// compared on squares in exact GMP arithmetic.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "smoothweyl/check.hpp"

namespace swl {

struct PrimePower {
  std::uint64_t prime = 0;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Canonical factorization: primes strictly increasing, exponents >= 1,
/// empty iff value == 1.
class Factorization {
 public:
  Factorization() = default;
  /// Validates the invariants; throws std::invalid_argument on violation.
  Factorization(std::uint64_t value, std::vector<PrimePower> factors);

  std::uint64_t value() const { return value_; }
  const std::vector<PrimePower>& factors() const { return factors_; }

 private:
  std::uint64_t value_ = 1;
  std::vector<PrimePower> factors_;
};

/// Factorizes 1 <= n < 2^64. Trial division by a table of primes below 10^6,
/// then Miller-Rabin and Pollard-Brent for the cofactor. Deterministic.
/// Throws std::domain_error for n == 0.
Factorization factorize(std::uint64_t n);

bool is_prime(std::uint64_t n);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
/// a mod m in [0, m) for signed a.
inline std::uint64_t reduce_mod(std::int64_t a, std::uint64_t m) {
  const std::int64_t mm = static_cast<std::int64_t>(m);
  std::int64_t r = a % mm;
  if (r < 0) r += mm;
  return static_cast<std::uint64_t>(r);
}

/// Nearest double to an exact rational (mpq_class::get_d truncates).
double to_double(const mpq_class& x);

/// Primes up to `limit` by a sieve of Eratosthenes.
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

/// Divisors of the factorized integer in increasing order.
std::vector<std::uint64_t> divisors(const Factorization& f);

std::uint64_t euler_phi(const Factorization& f);
unsigned omega(const Factorization& f);
/// psi(q) = q / phi(q), exact.
mpq_class psi(const Factorization& f);
double psi_value(const Factorization& f);

/// Exact value of kappa_k(q)^2.
class ExactKappaSq {
 public:
  explicit ExactKappaSq(mpq_class value);

  const mpq_class& value() const { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  /// Double-precision kappa, the square root of the stored square.
  double kappa() const;

 private:
  mpq_class value_;
};

/// kappa(p^e)^2 for e >= 0, with e = u*k + v, 1 <= v <= k:
/// k^2 p^(-2u-1) when v == 1 and p^(-2u-2) otherwise.
mpq_class kappa_sq_prime_power(unsigned k, std::uint64_t p, unsigned e);

ExactKappaSq kappa_squared(unsigned k, const Factorization& f);
/// Double-precision kappa_k(q), computed prime by prime.
double kappa(unsigned k, const Factorization& f);
/// Double-precision kappa_k(q)^2, computed prime by prime.
double kappa_sq(unsigned k, const Factorization& f);

/// n = d_1 d_2^2 ... d_k^k with d_1..d_{k-1} squarefree and pairwise coprime.
/// parts[i] holds d_{i+1}.
struct KFullDecomposition {
  std::vector<std::uint64_t> parts;
};

/// Canonical split: a prime with exponent e = k*m + r (0 <= r < k) contributes
/// p to d_r when r >= 1 and p^m to d_k.
KFullDecomposition kfull_decompose(unsigned k, std::uint64_t n);
std::uint64_t recompose(const KFullDecomposition& d);

/// kappa(p^a) kappa(p^b) <= k^2 kappa(p^(a+b)), compared on squares.
CheckResult verify_kappa_submult(unsigned k, std::uint64_t p, unsigned a, unsigned b);

/// kappa(q/d) <= k^(4 omega(q)) kappa(q) e0 d_1 ... d_k for every d | q and
/// every e0 | d, with d/e0 split by kfull_decompose. lhs/rhs report the worst
/// squared ratio; holds iff that ratio is <= 1 exactly.
CheckResult verify_lemma_2_1(unsigned k, std::uint64_t q);

/// sum_{l=1}^{terms} p^l kappa(p^l)^s for even s, exact.
mpq_class kappa_weighted_series(unsigned k, std::uint64_t p, unsigned s, unsigned terms);

/// The full series, summed in blocks of k as a geometric series with ratio
/// p^(k-s). Requires even s > k (otherwise the series diverges).
mpq_class kappa_weighted_series_limit(unsigned k, std::uint64_t p, unsigned s);

struct VwSum {
  double value = 0.0;
  /// Largest relative gap between the two sigma evaluations.
  double max_sigma_discrepancy = 0.0;
};

/// sum_{q <= Q} kappa(q)^2 sigma(q), sigma(q) = sum_{r | q} r kappa(r)^(2t).
/// sigma is computed by a divisor sieve and by the multiplicative product
/// over prime powers; a relative gap above 1e-9 raises ConsistencyError.
VwSum vw_sum(unsigned k, unsigned t, std::uint64_t Q);

}  // namespace swl
