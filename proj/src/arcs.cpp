#include "smoothweyl/arcs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "smoothweyl/arithmetic.hpp"

namespace swl {
namespace {

mpq_class qpow(const mpq_class& base, unsigned e) {
  mpq_class r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

std::int64_t floor_to_int(const mpq_class& x) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return f.get_si();
}

void require_dissection_range(unsigned k, const mpq_class& P, const mpq_class& Q) {
  if (k < 2) throw std::domain_error("major arcs: k must be at least 2");
  if (Q < 1 || Q * Q > qpow(P, k)) throw std::domain_error("major arcs: need 1 <= Q <= P^(k/2)");
}

}  // namespace

ReducedFraction::ReducedFraction(std::int64_t a_, std::int64_t q_) : a(a_), q(q_) {
  if (q < 1 || a < 0 || a > q || std::gcd(a, q) != 1) {
    throw std::invalid_argument("ReducedFraction: need q >= 1, 0 <= a <= q, gcd(a,q) = 1");
  }
}

mpq_class exact(double x) {
  if (!std::isfinite(x)) throw std::domain_error("exact: non-finite value");
  return mpq_class(x);
}

IntervalSet::IntervalSet(std::vector<Interval> intervals) {
  for (auto& iv : intervals) {
    iv.lo.canonicalize();
    iv.hi.canonicalize();
    if (iv.lo < 0) iv.lo = 0;
    if (iv.hi > 1) iv.hi = 1;
  }
  std::erase_if(intervals, [](const Interval& iv) { return iv.lo > iv.hi; });
  std::sort(intervals.begin(), intervals.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  for (auto& iv : intervals) {
    if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
      if (iv.hi > intervals_.back().hi) intervals_.back().hi = iv.hi;
    } else {
      intervals_.push_back(std::move(iv));
    }
  }
}

IntervalSet IntervalSet::unit() { return IntervalSet({Interval{0, 1}}); }

mpq_class IntervalSet::measure() const {
  mpq_class m = 0;
  for (const auto& iv : intervals_) m += iv.hi - iv.lo;
  return m;
}

bool IntervalSet::contains(double alpha) const {
  if (!std::isfinite(alpha)) return false;
  const mpq_class x(alpha);
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](const mpq_class& v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return false;
  --it;
  return x <= it->hi;
}

bool IntervalSet::contains(const IntervalSet& other) const {
  std::size_t j = 0;
  for (const auto& iv : other.intervals_) {
    while (j < intervals_.size() && intervals_[j].hi < iv.lo) ++j;
    if (j == intervals_.size() || intervals_[j].lo > iv.lo || intervals_[j].hi < iv.hi) return false;
  }
  return true;
}

IntervalSet IntervalSet::difference(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t j = 0;
  for (const auto& iv : intervals_) {
    mpq_class cur = iv.lo;
    while (j < other.intervals_.size() && other.intervals_[j].hi < cur) ++j;
    std::size_t jj = j;
    bool covered = false;
    while (jj < other.intervals_.size() && other.intervals_[jj].lo <= iv.hi) {
      const Interval& b = other.intervals_[jj];
      if (b.lo > cur) out.push_back({cur, b.lo});
      if (b.hi >= iv.hi) {
        covered = true;
        break;
      }
      if (b.hi > cur) cur = b.hi;
      ++jj;
    }
    if (!covered && cur < iv.hi) out.push_back({cur, iv.hi});
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::complement() const { return unit().difference(*this); }

std::vector<std::pair<double, double>> IntervalSet::to_doubles() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(intervals_.size());
  for (const auto& iv : intervals_) out.emplace_back(to_double(iv.lo), to_double(iv.hi));
  return out;
}

std::vector<Arc> enumerate_arcs(const mpq_class& max_q, const mpq_class& width) {
  std::vector<Arc> arcs;
  if (max_q < 1) return arcs;
  const std::int64_t qmax = floor_to_int(max_q);
  for (std::int64_t q = 1; q <= qmax; ++q) {
    for (std::int64_t a = 0; a <= q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      mpq_class lo = (mpq_class(a) - width) / q;
      mpq_class hi = (mpq_class(a) + width) / q;
      lo.canonicalize();
      hi.canonicalize();
      if (lo < 0) lo = 0;
      if (hi > 1) hi = 1;
      if (lo > hi) continue;
      arcs.push_back({ReducedFraction(a, q), {lo, hi}});
    }
  }
  return arcs;
}

namespace {

IntervalSet union_of(std::vector<Arc> arcs) {
  std::vector<Interval> spans;
  spans.reserve(arcs.size());
  for (auto& arc : arcs) spans.push_back(std::move(arc.span));
  return IntervalSet(std::move(spans));
}

}  // namespace

IntervalSet major_arcs(unsigned k, const mpq_class& P, const mpq_class& Q) {
  require_dissection_range(k, P, Q);
  return union_of(enumerate_arcs(Q, Q / qpow(P, k)));
}

IntervalSet major_arcs(unsigned k, double P, double Q) { return major_arcs(k, exact(P), exact(Q)); }

IntervalSet narrow_arcs(unsigned k, const mpq_class& P, const mpq_class& Q) {
  require_dissection_range(k, P, Q);
  const mpq_class half = Q / 2;
  const mpq_class Pk = qpow(P, k);
  return union_of(enumerate_arcs(Q, Q / Pk)).difference(union_of(enumerate_arcs(half, half / Pk)));
}

IntervalSet narrow_arcs(unsigned k, double P, double Q) { return narrow_arcs(k, exact(P), exact(Q)); }

IntervalSet minor_arcs(unsigned k, double P, double Q) { return major_arcs(k, P, Q).complement(); }

mpq_class major_arc_measure_formula(unsigned k, const mpq_class& P, const mpq_class& Q) {
  require_dissection_range(k, P, Q);
  const std::int64_t qmax = floor_to_int(Q);
  mpq_class sum = 0;
  for (std::int64_t q = 1; q <= qmax; ++q) {
    sum += mpq_class(mpz_class(static_cast<unsigned long>(euler_phi(factorize(static_cast<std::uint64_t>(q))))),
                     mpz_class(static_cast<unsigned long>(q)));
  }
  mpq_class m = 2 * Q / qpow(P, k) * sum;
  m.canonicalize();
  return m;
}

ArcClassification classify(double alpha, unsigned k, double P, double Q) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::domain_error("classify: alpha must lie in [0,1)");
  if (k < 2 || !(P > 0.0)) throw std::domain_error("classify: need k >= 2 and P > 0");
  if (!(Q >= 1.0) || Q > std::pow(P, 0.5 * k)) throw std::domain_error("classify: need 1 <= Q <= P^(k/2)");
  const double width = Q / std::pow(P, static_cast<double>(k));

  // alpha = num / den exactly, den a power of two
  int exponent = 0;
  const double mantissa = std::frexp(alpha, &exponent);
  mpz_class num(std::ldexp(mantissa, 53));
  mpz_class den = 1;
  den <<= static_cast<mp_bitcnt_t>(53 - exponent);

  mpz_class q_prev2 = 1, q_prev1 = 0;
  while (true) {
    if (den == 0) break;
    mpz_class partial, rem;
    mpz_fdiv_qr(partial.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpz_class qn = partial * q_prev1 + q_prev2;
    if (qn > mpz_class(Q)) break;
    const std::int64_t q = qn.get_si();
    const double target = static_cast<double>(q) * alpha;
    const auto lower = static_cast<std::int64_t>(std::floor(target));
    // nearer candidate first, ties to the smaller numerator
    std::int64_t first = lower, second = lower + 1;
    if (target - static_cast<double>(lower) > static_cast<double>(lower + 1) - target) std::swap(first, second);
    for (std::int64_t a : {first, second}) {
      if (a < 0 || a > q || std::gcd(a, q) != 1) continue;
      if (within_arc(alpha, q, a, width)) return ReducedFraction(a, q);
    }
    q_prev2 = q_prev1;
    q_prev1 = qn;
    num = den;
    den = rem;
  }
  return std::nullopt;
}

void EnvelopeParams::validate() const {
  if (k < 2) throw std::domain_error("EnvelopeParams: k must be at least 2");
  if (!(R >= 2.0 && R <= P)) throw std::domain_error("EnvelopeParams: need 2 <= R <= P");
  if (!(epsilon > 0.0)) throw std::domain_error("EnvelopeParams: epsilon must be positive");
  if (!(c > 0.0)) throw std::domain_error("EnvelopeParams: c must be positive");
}

double EnvelopeParams::L() const { return std::log(P); }
double EnvelopeParams::L2() const { return std::log(std::log(3.0 * R)); }

namespace {

struct ArcGeometry {
  double q;
  double scaled_offset;  // P^k |alpha - a/q|
};

ArcGeometry geometry(double alpha, const ReducedFraction& frac, const EnvelopeParams& p) {
  const double beta = std::abs(alpha - frac.value());
  return {static_cast<double>(frac.q), std::pow(p.P, static_cast<double>(p.k)) * beta};
}

}  // namespace

double envelope_thm11(double alpha, const ReducedFraction& frac, const EnvelopeParams& params, SumKind kind) {
  params.validate();
  const auto [q, off] = geometry(alpha, frac, params);
  const double kap = kappa(params.k, factorize(static_cast<std::uint64_t>(frac.q)));
  const double qeps = std::pow(q, params.epsilon);
  const double L = params.L(), L2 = params.L2();
  const double Lcal = std::log(2.0 + off);
  const double denom = 1.0 + off;
  double first = 0.0;
  if (kind == SumKind::Truncated) {
    first = qeps * std::sqrt(kap) * params.P * L * std::sqrt(L2 * Lcal) / std::sqrt(denom);
  } else if (params.k >= 3) {
    first = qeps * std::sqrt(kap) * params.P * L * std::sqrt(L2) / std::pow(denom, 1.0 / params.k);
  } else {
    first = qeps * std::sqrt(kap) * params.P * L * std::sqrt(L2) * std::pow(Lcal, 1.5) / std::sqrt(denom);
  }
  const double second =
      qeps * std::pow(params.P, 0.75) * std::sqrt(params.R) * std::pow(L * L2, 0.25) * std::pow(q + q * off, 0.125);
  return first + second;
}

double envelope_thm12(double alpha, const ReducedFraction& frac, const EnvelopeParams& params, SumKind kind) {
  params.validate();
  const auto [q, off] = geometry(alpha, frac, params);
  const Factorization f = factorize(static_cast<std::uint64_t>(frac.q));
  const double denom = 1.0 + off;
  const double decay = kind == SumKind::Truncated ? denom : std::pow(denom, 1.0 / params.k);
  const double first = kappa(params.k, f) * psi_value(f) * params.P / decay;
  const double second = params.P * std::exp(-params.c * std::sqrt(params.L())) * denom;
  return first + second;
}

double upsilon(double alpha, const ReducedFraction& frac, unsigned k, double delta, double X) {
  if (!(delta > 1.0) || !(X >= 1.0)) throw std::domain_error("upsilon: need delta > 1 and X >= 1");
  const double beta = std::abs(alpha - frac.value());
  const double ksq = kappa_sq(k, factorize(static_cast<std::uint64_t>(frac.q)));
  return ksq * std::pow(1.0 + std::pow(X, static_cast<double>(k)) * beta, -delta);
}

}  // namespace swl
