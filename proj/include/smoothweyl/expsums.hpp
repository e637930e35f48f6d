#pragma once

// Exponential sums over k-th powers: the smooth Weyl sums g and g_nu, the
// complete sum S(q,a), the reduced-residue sum W(q,a) and the divisor
// convolution scriptS(q,a). Rational phases are reduced modulo q in integer
// arithmetic before any trigonometric call.

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "smoothweyl/check.hpp"
#include "smoothweyl/numeric.hpp"
#include "smoothweyl/report.hpp"
#include "smoothweyl/smooth.hpp"

namespace swl {

/// Evaluates alpha -> sum_{x in Z} e(alpha x^k) for a fixed finite set Z.
///
/// The phase alpha x^k mod 1 is formed without rounding the product: x^k is
/// held exactly as a 128-bit integer and split into 32-bit limbs, and each
/// limb is multiplied against frac(alpha 2^(32 i)) with an error-free product.
/// Summation is compensated, so the result does not depend on the order of Z.
class WeylSumEvaluator {
 public:
  WeylSumEvaluator(unsigned k, std::span<const std::uint64_t> xs);
  WeylSumEvaluator(unsigned k, const SmoothSet& s) : WeylSumEvaluator(k, s.elements()) {}

  Complex operator()(double alpha) const;
  unsigned k() const { return k_; }
  std::size_t size() const { return limbs_.size(); }
  /// Largest x^k in the set, as a double (the trigonometric degree).
  double degree() const { return degree_; }

 private:
  unsigned k_;
  std::vector<std::array<double, 4>> limbs_;
  double degree_ = 0.0;
};

Complex weyl_sum(unsigned k, double alpha, const SmoothSet& s);

/// S(q,a) = sum_{r=1}^{q} e(a r^k / q).
Complex complete_sum_S(unsigned k, std::uint64_t q, std::int64_t a);

/// W(q,a) = sum over 1 <= r <= q with gcd(r,q) = 1 of e(a r^k / q).
Complex reduced_sum_W(unsigned k, std::uint64_t q, std::int64_t a);

/// Residues r^k mod q with multiplicities, over reduced residues r only or
/// over all residues. W(q,c) and S(q,c) for any c follow by one pass.
class PowerResidueProfile {
 public:
  PowerResidueProfile(unsigned k, std::uint64_t q, bool reduced_only);

  /// sum over the profile of count * e(c m / q).
  Complex sum(std::int64_t c) const;
  std::uint64_t modulus() const { return q_; }

 private:
  std::uint64_t q_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> residues_;
  std::vector<Complex> roots_;
};

/// Memoized W(d, c) keyed by (d, c mod d) for a fixed k. Not synchronized:
/// give each worker its own cache.
class WCache {
 public:
  explicit WCache(unsigned k) : k_(k) {}

  Complex get(std::uint64_t d, std::int64_t c);
  unsigned k() const { return k_; }
  std::size_t size() const { return values_.size(); }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& key) const {
      return std::hash<std::uint64_t>{}(key.first * 0x9E3779B97F4A7C15ULL ^ key.second);
    }
  };
  unsigned k_;
  std::unordered_map<std::uint64_t, PowerResidueProfile> profiles_;
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, Complex, KeyHash> values_;
};

/// scriptS(q,a) = q^-1 sum_{d | q} psi(d) |W(d, a (q/d)^(k-1))|.
/// Throws std::invalid_argument unless gcd(a,q) = 1.
double script_S(unsigned k, std::uint64_t q, std::int64_t a);
double script_S(WCache& cache, std::uint64_t q, std::int64_t a);

/// scriptS(q,a) <= 6k kappa(q) psi(q) with additive slack 1e-9.
CheckResult verify_script_S_bound(WCache& cache, std::uint64_t q, std::int64_t a);

struct WSampleSpec {
  std::uint64_t vanishing_max_prime = 31;
  std::uint64_t vanishing_max_modulus = 100'000;
  std::size_t vanishing_a_samples = 200;
  std::uint64_t weil_max_prime = 499;
  std::size_t identity_instances = 500;
  std::uint64_t identity_max_modulus = 20'000;
  std::uint64_t seed = 1;
};

/// Checks the four structural properties of W:
///  (i)   W(p^t, a) = 0 for p odd, t >= theta + 2 and for p = 2, t >= theta + 3,
///        where p^theta || k  (tolerance 1e-6 p^t);
///  (ii)  |W(p,a)| <= 1 + ((k, p-1) - 1) sqrt(p)   (slack 1e-9);
///  (iii) W(p^t, a p^tau) = p^tau W(p^(t-tau), a)  for 1 <= tau < t;
///  (iv)  W(r1 r2, c) = W(r1, c r2^(k-1)) W(r2, c r1^(k-1)) for coprime r1, r2.
/// Identities are compared to 1e-9 relative to max(1, |lhs|, |rhs|).
/// One aggregated check per clause, carrying the worst case.
ExperimentReport verify_W_properties(unsigned k, const WSampleSpec& spec = {});

}  // namespace swl
