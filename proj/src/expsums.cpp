#include "smoothweyl/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "smoothweyl/arithmetic.hpp"

namespace swl {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

double frac(double x) { return x - std::floor(x); }

}  // namespace

WeylSumEvaluator::WeylSumEvaluator(unsigned k, std::span<const std::uint64_t> xs) : k_(k) {
  if (k < 2) throw std::domain_error("WeylSumEvaluator: k must be at least 2");
  limbs_.reserve(xs.size());
  for (u64 x : xs) {
    u128 power = 1;
    for (unsigned i = 0; i < k; ++i) {
      if (x != 0 && power > (~static_cast<u128>(0)) / x) {
        throw std::domain_error("WeylSumEvaluator: x^k exceeds 128 bits");
      }
      power *= x;
    }
    std::array<double, 4> limb{};
    for (int i = 0; i < 4; ++i) limb[i] = static_cast<double>(static_cast<u64>(power >> (32 * i)) & 0xFFFFFFFFULL);
    degree_ = std::max(degree_, static_cast<double>(power));
    limbs_.push_back(limb);
  }
}

Complex WeylSumEvaluator::operator()(double alpha) const {
  std::array<double, 4> scaled{};
  scaled[0] = frac(alpha);
  for (int i = 1; i < 4; ++i) scaled[i] = frac(std::ldexp(scaled[i - 1], 32));
  ComplexCompensatedSum acc;
  for (const auto& limb : limbs_) {
    double head = 0.0, tail = 0.0;
    for (int i = 0; i < 4; ++i) {
      if (limb[i] == 0.0) continue;
      const double p = limb[i] * scaled[i];
      tail += std::fma(limb[i], scaled[i], -p);
      head += frac(p);
    }
    acc.add(unit_phase(frac(head + tail)));
  }
  return acc.value();
}

Complex weyl_sum(unsigned k, double alpha, const SmoothSet& s) { return WeylSumEvaluator(k, s)(alpha); }

PowerResidueProfile::PowerResidueProfile(unsigned k, std::uint64_t q, bool reduced_only) : q_(q) {
  if (q == 0) throw std::domain_error("PowerResidueProfile: q must be positive");
  std::vector<u64> counts(q, 0);
  for (u64 r = 1; r <= q; ++r) {
    if (reduced_only && std::gcd(r, q) != 1) continue;
    ++counts[pow_mod(r, k, q)];
  }
  for (u64 m = 0; m < q; ++m) {
    if (counts[m] != 0) residues_.emplace_back(m, counts[m]);
  }
  roots_ = roots_of_unity(q);
}

Complex PowerResidueProfile::sum(std::int64_t c) const {
  const u64 cm = reduce_mod(c, q_);
  ComplexCompensatedSum acc;
  for (const auto& [m, count] : residues_) {
    acc.add(roots_[mul_mod(cm, m, q_)], static_cast<double>(count));
  }
  return acc.value();
}

Complex complete_sum_S(unsigned k, std::uint64_t q, std::int64_t a) {
  if (q == 0) throw std::domain_error("complete_sum_S: q must be positive");
  const u64 am = reduce_mod(a, q);
  ComplexCompensatedSum acc;
  for (u64 r = 1; r <= q; ++r) acc.add(root_of_unity(static_cast<std::int64_t>(mul_mod(am, pow_mod(r, k, q), q)), q));
  return acc.value();
}

Complex reduced_sum_W(unsigned k, std::uint64_t q, std::int64_t a) {
  if (q == 0) throw std::domain_error("reduced_sum_W: q must be positive");
  const u64 am = reduce_mod(a, q);
  ComplexCompensatedSum acc;
  for (u64 r = 1; r <= q; ++r) {
    if (std::gcd(r, q) != 1) continue;
    acc.add(root_of_unity(static_cast<std::int64_t>(mul_mod(am, pow_mod(r, k, q), q)), q));
  }
  return acc.value();
}

Complex WCache::get(std::uint64_t d, std::int64_t c) {
  const u64 cm = reduce_mod(c, d);
  const auto key = std::make_pair(d, cm);
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  auto pit = profiles_.find(d);
  if (pit == profiles_.end()) pit = profiles_.emplace(d, PowerResidueProfile(k_, d, true)).first;
  const Complex w = pit->second.sum(static_cast<std::int64_t>(cm));
  values_.emplace(key, w);
  return w;
}

double script_S(WCache& cache, std::uint64_t q, std::int64_t a) {
  if (q == 0) throw std::domain_error("script_S: q must be positive");
  if (std::gcd(reduce_mod(a, q), q) != 1) throw std::invalid_argument("script_S: a and q must be coprime");
  const unsigned k = cache.k();
  CompensatedSum acc;
  for (u64 d : divisors(factorize(q))) {
    const u64 m = (q / d) % d;
    const u64 arg = mul_mod(reduce_mod(a, d), pow_mod(m, k - 1, d), d);
    acc.add(psi_value(factorize(d)) * std::abs(cache.get(d, static_cast<std::int64_t>(arg))));
  }
  return acc.value() / static_cast<double>(q);
}

double script_S(unsigned k, std::uint64_t q, std::int64_t a) {
  WCache cache(k);
  return script_S(cache, q, a);
}

CheckResult verify_script_S_bound(WCache& cache, std::uint64_t q, std::int64_t a) {
  const Factorization f = factorize(q);
  const double lhs = script_S(cache, q, a);
  const double rhs = 6.0 * cache.k() * kappa(cache.k(), f) * psi_value(f);
  return {"scriptS_bound(k=" + std::to_string(cache.k()) + ",q=" + std::to_string(q) + ",a=" + std::to_string(a) + ")",
          lhs <= rhs + 1e-9, lhs, rhs, rhs - lhs, {}};
}

namespace {

double relative_gap(Complex lhs, Complex rhs) {
  return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

u64 upow(u64 p, unsigned t) {
  u64 r = 1;
  for (unsigned i = 0; i < t; ++i) r *= p;
  return r;
}

unsigned valuation(u64 n, u64 p) {
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

}  // namespace

ExperimentReport verify_W_properties(unsigned k, const WSampleSpec& spec) {
  ExperimentReport report;
  report.experiment = "W_properties";
  report.config = {{"k", k},
                   {"vanishing_max_prime", spec.vanishing_max_prime},
                   {"vanishing_max_modulus", spec.vanishing_max_modulus},
                   {"vanishing_a_samples", spec.vanishing_a_samples},
                   {"weil_max_prime", spec.weil_max_prime},
                   {"identity_instances", spec.identity_instances},
                   {"identity_max_modulus", spec.identity_max_modulus},
                   {"seed", spec.seed}};
  std::mt19937_64 rng(spec.seed);
  const auto small_primes = primes_up_to(static_cast<std::uint32_t>(spec.vanishing_max_prime));

  // (i) vanishing at high prime powers
  {
    double worst = 0.0;
    std::size_t cases = 0, bad = 0;
    std::string where;
    for (u64 p : small_primes) {
      const unsigned theta = valuation(k, p);
      const unsigned t0 = theta + (p == 2 ? 3 : 2);
      for (unsigned t = t0;; ++t) {
        const u128 pt128 = static_cast<u128>(upow(p, t - 1)) * p;
        if (pt128 > spec.vanishing_max_modulus) break;
        const u64 pt = static_cast<u64>(pt128);
        const PowerResidueProfile profile(k, pt, true);
        std::vector<u64> as;
        const u64 coprime_count = pt - pt / p;
        if (coprime_count <= spec.vanishing_a_samples) {
          for (u64 a = 1; a < pt; ++a) {
            if (a % p != 0) as.push_back(a);
          }
        } else {
          std::uniform_int_distribution<u64> pick(1, pt - 1);
          while (as.size() < spec.vanishing_a_samples) {
            const u64 a = pick(rng);
            if (a % p != 0 && std::find(as.begin(), as.end(), a) == as.end()) as.push_back(a);
          }
        }
        for (u64 a : as) {
          const double ratio = std::abs(profile.sum(static_cast<std::int64_t>(a))) / static_cast<double>(pt);
          ++cases;
          if (ratio > 1e-6) ++bad;
          if (ratio >= worst) {
            worst = ratio;
            where = "p=" + std::to_string(p) + " t=" + std::to_string(t) + " a=" + std::to_string(a);
          }
        }
      }
    }
    add_check(report, "W(i) vanishing |W(p^t,a)|/p^t", bad == 0, worst, 1e-6,
              std::to_string(cases) + " cases, " + std::to_string(bad) + " violations, worst " + where);
    report.rows.push_back({{{"clause", "i"}, {"cases", cases}}, worst, 1e-6, worst / 1e-6});
  }

  // (ii) Weil-type bound at primes
  {
    double worst_margin = INFINITY, worst_lhs = 0.0, worst_rhs = 0.0;
    std::size_t cases = 0, bad = 0;
    std::string where;
    for (u64 p : primes_up_to(static_cast<std::uint32_t>(spec.weil_max_prime))) {
      const PowerResidueProfile profile(k, p, true);
      const double rhs = 1.0 + (static_cast<double>(std::gcd<u64>(k, p - 1)) - 1.0) * std::sqrt(static_cast<double>(p));
      for (u64 a = 1; a < p; ++a) {
        const double lhs = std::abs(profile.sum(static_cast<std::int64_t>(a)));
        ++cases;
        if (lhs > rhs + 1e-9) ++bad;
        if (rhs - lhs < worst_margin) {
          worst_margin = rhs - lhs;
          worst_lhs = lhs;
          worst_rhs = rhs;
          where = "p=" + std::to_string(p) + " a=" + std::to_string(a);
        }
      }
    }
    add_check(report, "W(ii) |W(p,a)| <= 1 + ((k,p-1)-1) sqrt(p)", bad == 0, worst_lhs, worst_rhs,
              std::to_string(cases) + " cases, " + std::to_string(bad) + " violations, tightest " + where);
    report.rows.push_back({{{"clause", "ii"}, {"cases", cases}}, worst_lhs, worst_rhs, worst_lhs / worst_rhs});
  }

  std::uniform_int_distribution<std::int64_t> pick_c(-1'000'000, 1'000'000);

  // (iii) W(p^t, a p^tau) = p^tau W(p^(t-tau), a)
  {
    double worst = 0.0;
    std::size_t bad = 0;
    std::string where;
    std::uniform_int_distribution<std::size_t> pick_p(0, small_primes.size() - 1);
    for (std::size_t n = 0; n < spec.identity_instances;) {
      const u64 p = small_primes[pick_p(rng)];
      unsigned tmax = 1;
      while (static_cast<u128>(upow(p, tmax)) * p <= spec.identity_max_modulus) ++tmax;
      if (tmax < 2) continue;
      ++n;
      const unsigned t = std::uniform_int_distribution<unsigned>(2, tmax)(rng);
      const unsigned tau = std::uniform_int_distribution<unsigned>(1, t - 1)(rng);
      const std::int64_t a = pick_c(rng);
      const u64 ptau = upow(p, tau);
      const Complex lhs = reduced_sum_W(k, upow(p, t), static_cast<std::int64_t>(mul_mod(reduce_mod(a, upow(p, t)), ptau, upow(p, t))));
      const Complex rhs = static_cast<double>(ptau) * reduced_sum_W(k, upow(p, t - tau), a);
      const double gap = relative_gap(lhs, rhs);
      if (gap > 1e-9) ++bad;
      if (gap >= worst) {
        worst = gap;
        where = "p=" + std::to_string(p) + " t=" + std::to_string(t) + " tau=" + std::to_string(tau) +
                " a=" + std::to_string(a);
      }
    }
    add_check(report, "W(iii) prime-power shift, relative gap", bad == 0, worst, 1e-9,
              std::to_string(spec.identity_instances) + " cases, " + std::to_string(bad) + " violations, worst " + where);
    report.rows.push_back({{{"clause", "iii"}, {"cases", spec.identity_instances}}, worst, 1e-9, worst / 1e-9});
  }

  // (iv) quasi-multiplicativity
  {
    double worst = 0.0;
    std::size_t bad = 0;
    std::string where;
    const u64 side = static_cast<u64>(std::sqrt(static_cast<double>(spec.identity_max_modulus)));
    std::uniform_int_distribution<u64> pick_r(1, std::max<u64>(side, 2));
    for (std::size_t n = 0; n < spec.identity_instances;) {
      const u64 r1 = pick_r(rng), r2 = pick_r(rng);
      if (std::gcd(r1, r2) != 1 || r1 * r2 > spec.identity_max_modulus) continue;
      ++n;
      const std::int64_t c = pick_c(rng);
      const Complex lhs = reduced_sum_W(k, r1 * r2, c);
      const u64 c1 = mul_mod(reduce_mod(c, r1), pow_mod(r2 % r1, k - 1, r1), r1);
      const u64 c2 = mul_mod(reduce_mod(c, r2), pow_mod(r1 % r2, k - 1, r2), r2);
      const Complex rhs = reduced_sum_W(k, r1, static_cast<std::int64_t>(c1)) * reduced_sum_W(k, r2, static_cast<std::int64_t>(c2));
      const double gap = relative_gap(lhs, rhs);
      if (gap > 1e-9) ++bad;
      if (gap >= worst) {
        worst = gap;
        where = "r1=" + std::to_string(r1) + " r2=" + std::to_string(r2) + " c=" + std::to_string(c);
      }
    }
    add_check(report, "W(iv) quasi-multiplicativity, relative gap", bad == 0, worst, 1e-9,
              std::to_string(spec.identity_instances) + " cases, " + std::to_string(bad) + " violations, worst " + where);
    report.rows.push_back({{{"clause", "iv"}, {"cases", spec.identity_instances}}, worst, 1e-9, worst / 1e-9});
  }
  return report;
}

}  // namespace swl
