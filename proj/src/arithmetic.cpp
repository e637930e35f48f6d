#include "smoothweyl/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "smoothweyl/numeric.hpp"

namespace swl {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr std::uint32_t kTrialLimit = 1'000'000;

const std::vector<std::uint32_t>& prime_table() {
  static const std::vector<std::uint32_t> table = primes_up_to(kTrialLimit);
  return table;
}

bool miller_rabin_witness(u64 n, u64 a, u64 d, unsigned s) {
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

// Pollard-Brent with a fixed sequence of increments.
u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 x) { return (mul_mod(x, x, n) + c) % n; };
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    const u64 m = 128;
    u64 r = 1;
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_large(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_brent(n);
  split_large(d, out);
  split_large(n / d, out);
}

u64 ipow(u64 base, unsigned e) {
  u64 r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

mpz_class zpow(u64 base, unsigned e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

mpq_class qpow(const mpq_class& base, unsigned e) {
  mpq_class r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

// kappa^2 as a double for a prime power.
double kappa_sq_pp_double(unsigned k, u64 p, unsigned e) {
  if (e == 0) return 1.0;
  const unsigned u = (e - 1) / k;
  const unsigned v = e - u * k;
  const double pd = static_cast<double>(p);
  if (v == 1) return static_cast<double>(k) * k * std::pow(pd, -(2.0 * u + 1.0));
  return std::pow(pd, -(2.0 * u + 2.0));
}

}  // namespace

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

Factorization::Factorization(std::uint64_t value, std::vector<PrimePower> factors)
    : value_(value), factors_(std::move(factors)) {
  if (value_ == 0) throw std::invalid_argument("Factorization: value must be positive");
  u128 product = 1;
  u64 prev = 0;
  for (const auto& pp : factors_) {
    if (pp.prime <= prev || pp.exponent == 0 || !is_prime(pp.prime)) {
      throw std::invalid_argument("Factorization: malformed prime list");
    }
    prev = pp.prime;
    for (unsigned i = 0; i < pp.exponent; ++i) {
      product *= pp.prime;
      if (product > value_) throw std::invalid_argument("Factorization: product exceeds value");
    }
  }
  if (product != value_) throw std::invalid_argument("Factorization: product mismatch");
}

double to_double(const mpq_class& x) {
  if (sgn(x) == 0) return 0.0;
  mpz_class num = abs(x.get_num());
  const mpz_class& den = x.get_den();
  // quotient scaled to 63 bits, with a sticky bit for the discarded remainder
  const long shift = 62 - (static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)));
  mpz_class scaled_num = num, scaled_den = den;
  if (shift >= 0) {
    scaled_num <<= static_cast<mp_bitcnt_t>(shift);
  } else {
    scaled_den <<= static_cast<mp_bitcnt_t>(-shift);
  }
  mpz_class m, r;
  mpz_fdiv_qr(m.get_mpz_t(), r.get_mpz_t(), scaled_num.get_mpz_t(), scaled_den.get_mpz_t());
  std::uint64_t bits = 0;
  mpz_export(&bits, nullptr, -1, sizeof(bits), 0, 0, m.get_mpz_t());
  if (r != 0) bits |= 1;
  const double v = std::ldexp(static_cast<double>(bits), static_cast<int>(-shift));
  return sgn(x) < 0 ? -v : v;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // deterministic for all 64-bit n
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw std::domain_error("factorize: n must be positive");
  std::vector<PrimePower> factors;
  u64 rest = n;
  for (std::uint32_t p : prime_table()) {
    if (static_cast<u64>(p) * p > rest) break;
    if (rest % p != 0) continue;
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    factors.push_back({p, e});
  }
  if (rest > 1) {
    const u64 bound = static_cast<u64>(kTrialLimit) * kTrialLimit;
    if (rest < bound) {
      factors.push_back({rest, 1});
    } else {
      std::vector<u64> large;
      split_large(rest, large);
      std::sort(large.begin(), large.end());
      for (u64 p : large) {
        if (!factors.empty() && factors.back().prime == p) {
          ++factors.back().exponent;
        } else {
          factors.push_back({p, 1});
        }
      }
    }
  }
  return Factorization(n, std::move(factors));
}

std::vector<std::uint64_t> divisors(const Factorization& f) {
  std::vector<u64> divs{1};
  for (const auto& [p, e] : f.factors()) {
    const std::size_t base = divs.size();
    u64 pk = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::uint64_t euler_phi(const Factorization& f) {
  u64 phi = 1;
  for (const auto& [p, e] : f.factors()) phi *= ipow(p, e - 1) * (p - 1);
  return phi;
}

unsigned omega(const Factorization& f) { return static_cast<unsigned>(f.factors().size()); }

mpq_class psi(const Factorization& f) {
  mpq_class r(mpz_class(f.value()), mpz_class(euler_phi(f)));
  r.canonicalize();
  return r;
}

double psi_value(const Factorization& f) {
  double r = 1.0;
  for (const auto& pp : f.factors()) {
    const double p = static_cast<double>(pp.prime);
    r *= p / (p - 1.0);
  }
  return r;
}

ExactKappaSq::ExactKappaSq(mpq_class value) : value_(std::move(value)) {
  value_.canonicalize();
  if (sgn(value_) < 0) throw std::invalid_argument("ExactKappaSq: negative value");
}

double ExactKappaSq::kappa() const { return std::sqrt(value_.get_d()); }

mpq_class kappa_sq_prime_power(unsigned k, std::uint64_t p, unsigned e) {
  if (k < 2) throw std::domain_error("kappa: k must be at least 2");
  if (e == 0) return 1;
  const unsigned u = (e - 1) / k;
  const unsigned v = e - u * k;
  mpq_class r;
  if (v == 1) {
    r = mpq_class(mpz_class(k) * k, zpow(p, 2 * u + 1));
  } else {
    r = mpq_class(mpz_class(1), zpow(p, 2 * u + 2));
  }
  r.canonicalize();
  return r;
}

ExactKappaSq kappa_squared(unsigned k, const Factorization& f) {
  mpq_class r = 1;
  for (const auto& [p, e] : f.factors()) r *= kappa_sq_prime_power(k, p, e);
  return ExactKappaSq(r);
}

double kappa_sq(unsigned k, const Factorization& f) {
  if (k < 2) throw std::domain_error("kappa: k must be at least 2");
  double r = 1.0;
  for (const auto& [p, e] : f.factors()) r *= kappa_sq_pp_double(k, p, e);
  return r;
}

double kappa(unsigned k, const Factorization& f) { return std::sqrt(kappa_sq(k, f)); }

KFullDecomposition kfull_decompose(unsigned k, std::uint64_t n) {
  if (k < 2) throw std::domain_error("kfull_decompose: k must be at least 2");
  if (n == 0) throw std::domain_error("kfull_decompose: n must be positive");
  KFullDecomposition d{std::vector<u64>(k, 1)};
  const Factorization f = factorize(n);
  for (const auto& [p, e] : f.factors()) {
    const unsigned m = e / k;
    const unsigned r = e % k;
    if (r >= 1) d.parts[r - 1] *= p;
    d.parts[k - 1] *= ipow(p, m);
  }
  return d;
}

std::uint64_t recompose(const KFullDecomposition& d) {
  u64 n = 1;
  for (std::size_t i = 0; i < d.parts.size(); ++i) n *= ipow(d.parts[i], static_cast<unsigned>(i + 1));
  return n;
}

CheckResult verify_kappa_submult(unsigned k, std::uint64_t p, unsigned a, unsigned b) {
  if (!is_prime(p)) throw std::invalid_argument("verify_kappa_submult: p must be prime");
  if (a + b == 0) throw std::invalid_argument("verify_kappa_submult: need a + b >= 1");
  const mpq_class lhs_sq = kappa_sq_prime_power(k, p, a) * kappa_sq_prime_power(k, p, b);
  const mpq_class rhs_sq = mpq_class(zpow(k, 4)) * kappa_sq_prime_power(k, p, a + b);
  CheckResult c;
  std::ostringstream name;
  name << "kappa_submult(k=" << k << ",p=" << p << ",a=" << a << ",b=" << b << ")";
  c.name = name.str();
  c.holds = lhs_sq <= rhs_sq;
  c.lhs = std::sqrt(lhs_sq.get_d());
  c.rhs = std::sqrt(rhs_sq.get_d());
  c.margin = c.rhs - c.lhs;
  return c;
}

CheckResult verify_lemma_2_1(unsigned k, std::uint64_t q) {
  const Factorization fq = factorize(q);
  const mpq_class kq = kappa_squared(k, fq).value();
  const mpq_class scale = mpq_class(zpow(k, 8 * omega(fq))) * kq;
  mpq_class worst_lhs = 0, worst_rhs = 1, worst_ratio = -1;
  u64 worst_d = 1, worst_e0 = 1;
  for (u64 d : divisors(fq)) {
    const mpq_class lhs = kappa_squared(k, factorize(q / d)).value();
    for (u64 e0 : divisors(factorize(d))) {
      const KFullDecomposition parts = kfull_decompose(k, d / e0);
      mpz_class prod = e0;
      for (u64 x : parts.parts) prod *= x;
      const mpq_class rhs = scale * mpq_class(prod * prod);
      const mpq_class ratio = lhs / rhs;
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst_lhs = lhs;
        worst_rhs = rhs;
        worst_d = d;
        worst_e0 = e0;
      }
    }
  }
  CheckResult c;
  c.name = "kappa_quotient(k=" + std::to_string(k) + ",q=" + std::to_string(q) + ")";
  c.holds = worst_ratio <= 1;
  c.lhs = std::sqrt(worst_lhs.get_d());
  c.rhs = std::sqrt(worst_rhs.get_d());
  c.margin = c.rhs - c.lhs;
  c.detail = "worst d=" + std::to_string(worst_d) + " e0=" + std::to_string(worst_e0) +
             " squared ratio=" + worst_ratio.get_str();
  return c;
}

mpq_class kappa_weighted_series(unsigned k, std::uint64_t p, unsigned s, unsigned terms) {
  if (s == 0 || s % 2 != 0) throw std::invalid_argument("kappa_weighted_series: s must be positive and even");
  if (!is_prime(p)) throw std::invalid_argument("kappa_weighted_series: p must be prime");
  mpq_class sum = 0;
  for (unsigned l = 1; l <= terms; ++l) {
    sum += mpq_class(zpow(p, l)) * qpow(kappa_sq_prime_power(k, p, l), s / 2);
  }
  sum.canonicalize();
  return sum;
}

mpq_class kappa_weighted_series_limit(unsigned k, std::uint64_t p, unsigned s) {
  if (s == 0 || s % 2 != 0) throw std::invalid_argument("kappa_weighted_series_limit: s must be positive and even");
  if (s <= k) throw std::domain_error("kappa_weighted_series_limit: series diverges unless s > k");
  // kappa(p^(l+k)) = kappa(p^l) / p, so each block of k terms is p^(k-s) times the previous one
  const mpq_class first_block = kappa_weighted_series(k, p, s, k);
  const mpq_class ratio(mpz_class(1), zpow(p, s - k));
  mpq_class r = first_block / (1 - ratio);
  r.canonicalize();
  return r;
}

VwSum vw_sum(unsigned k, unsigned t, std::uint64_t Q) {
  if (Q == 0) throw std::domain_error("vw_sum: Q must be positive");
  if (Q > 10'000'000) throw ResourceError("vw_sum: Q exceeds the desk-scale limit 10^7");
  const std::size_t n = Q + 1;
  // smallest prime factor sieve
  std::vector<std::uint32_t> spf(n, 0);
  std::vector<std::uint32_t> primes;
  for (std::size_t i = 2; i < n; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      if (p > spf[i] || static_cast<u64>(p) * i >= n) break;
      spf[p * i] = p;
    }
  }
  std::vector<double> ksq(n, 1.0);
  for (std::size_t i = 2; i < n; ++i) {
    const std::uint32_t p = spf[i];
    std::size_t m = i;
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    ksq[i] = ksq[m] * kappa_sq_pp_double(k, p, e);
  }
  // route 1: divisor sieve
  std::vector<double> sigma(n, 0.0);
  for (std::size_t r = 1; r < n; ++r) {
    const double w = static_cast<double>(r) * std::pow(ksq[r], t);
    for (std::size_t q = r; q < n; q += r) sigma[q] += w;
  }
  // route 2: multiplicative product over prime powers
  VwSum out;
  CompensatedSum total;
  for (std::size_t q = 1; q < n; ++q) {
    double sigma_mult = 1.0;
    std::size_t m = q;
    while (m > 1) {
      const std::uint32_t p = spf[m];
      unsigned e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      double local = 0.0, pj = 1.0;
      for (unsigned j = 0; j <= e; ++j) {
        local += pj * std::pow(kappa_sq_pp_double(k, p, j), t);
        pj *= p;
      }
      sigma_mult *= local;
    }
    const double gap = std::abs(sigma[q] - sigma_mult) / std::max(std::abs(sigma_mult), 1e-300);
    out.max_sigma_discrepancy = std::max(out.max_sigma_discrepancy, gap);
    if (gap > 1e-9) {
      throw ConsistencyError("vw_sum: sigma(" + std::to_string(q) + ") routes disagree");
    }
    total.add(ksq[q] * sigma[q]);
  }
  out.value = total.value();
  return out;
}

}  // namespace swl
