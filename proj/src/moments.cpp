#include "smoothweyl/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "smoothweyl/arithmetic.hpp"
#include "smoothweyl/numeric.hpp"

namespace swl {
namespace {

constexpr std::size_t kBlock = 4096;

// Sums values pushed one at a time: fixed-size blocks are reduced pairwise,
// then the block totals are reduced pairwise, so the tree depends only on
// the count.
class BlockedSum {
 public:
  void add(double x) {
    buffer_.push_back(x);
    if (buffer_.size() == kBlock) flush();
  }
  double value() {
    flush();
    return pairwise_sum(blocks_);
  }

 private:
  void flush() {
    if (buffer_.empty()) return;
    blocks_.push_back(pairwise_sum(buffer_));
    buffer_.clear();
  }
  std::vector<double> buffer_;
  std::vector<double> blocks_;
};

std::uint64_t checked_power(std::uint64_t x, unsigned k) {
  unsigned __int128 r = 1;
  for (unsigned i = 0; i < k; ++i) {
    r *= x;
    if (r > std::numeric_limits<std::uint64_t>::max()) throw ResourceError("x^k does not fit in 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

double default_spacing(const QuadratureOptions& opts, double degree) {
  if (opts.spacing > 0.0) return opts.spacing;
  return 1.0 / (8.0 * std::max(degree, 1.0));
}

}  // namespace

std::uint64_t trapezoid_panels(double lo, double hi, double spacing, std::uint64_t min_samples) {
  if (!(hi > lo)) return 0;
  if (!(spacing > 0.0)) throw std::invalid_argument("trapezoid: spacing must be positive");
  const double needed = std::ceil((hi - lo) / spacing);
  if (needed > 1e18) throw ResourceError("trapezoid: panel count overflows");
  std::uint64_t n = std::max<std::uint64_t>(static_cast<std::uint64_t>(needed), std::max<std::uint64_t>(min_samples, 2));
  if (n % 2 != 0) ++n;
  return n;
}

TrapezoidResult trapezoid(const std::function<double(double)>& f, double lo, double hi, double spacing,
                          std::uint64_t min_samples) {
  TrapezoidResult out;
  const std::uint64_t n = trapezoid_panels(lo, hi, spacing, min_samples);
  if (n == 0) return out;
  const double h = (hi - lo) / static_cast<double>(n);
  const double ends = f(lo) + f(hi);
  BlockedSum even, odd;
  for (std::uint64_t i = 1; i < n; ++i) {
    const double x = lo + static_cast<double>(i) * h;
    const double v = f(x);
    if (i % 2 == 0) {
      even.add(v);
    } else {
      odd.add(v);
    }
  }
  const double e = even.value();
  const double o = odd.value();
  const double fine = h * (0.5 * ends + e + o);
  const double coarse = 2.0 * h * (0.5 * ends + e);
  out.value = fine;
  out.error = std::abs(fine - coarse) / 3.0;
  out.samples = n + 1;
  return out;
}

std::uint64_t quad_moment_samples(unsigned k, const SmoothSet& s, const IntervalSet& arcs,
                                  const QuadratureOptions& opts) {
  const double degree = std::max(std::pow(s.P(), static_cast<double>(k)), 1.0);
  const double spacing = default_spacing(opts, degree);
  std::uint64_t total = 0;
  for (const auto& [lo, hi] : arcs.to_doubles()) {
    const std::uint64_t n = trapezoid_panels(lo, hi, spacing, opts.min_samples_per_interval);
    if (n > 0) total += n + 1;
  }
  return total;
}

MomentResult quad_moment(unsigned k, const SmoothSet& s, const IntervalSet& arcs, double u,
                         const QuadratureOptions& opts, std::string descriptor) {
  if (!(u >= 1.0)) throw std::domain_error("quad_moment: u must be at least 1");
  MomentResult out;
  out.u = u;
  out.arcs = std::move(descriptor);
  out.intervals = arcs.size();
  out.measure = to_double(arcs.measure());

  const std::uint64_t planned = quad_moment_samples(k, s, arcs, opts);
  if (planned > opts.max_samples) {
    std::ostringstream msg;
    msg << "quad_moment: needs " << planned << " samples, budget " << opts.max_samples;
    throw ResourceError(msg.str());
  }

  const WeylSumEvaluator g(k, s);
  const double spacing = default_spacing(opts, std::max(std::pow(s.P(), static_cast<double>(k)), 1.0));
  const double half_u = 0.5 * u;
  auto integrand = [&](double alpha) { return std::pow(std::norm(g(alpha)), half_u); };

  std::vector<double> values, errors;
  for (const auto& [lo, hi] : arcs.to_doubles()) {
    if (!(hi > lo)) continue;
    const TrapezoidResult r = trapezoid(integrand, lo, hi, spacing, opts.min_samples_per_interval);
    values.push_back(r.value);
    errors.push_back(r.error);
    out.samples += r.samples;
  }
  out.value = pairwise_sum(values);
  out.estimated_quadrature_error = pairwise_sum(errors);
  return out;
}

std::uint64_t exact_even_moment(unsigned k, const SmoothSet& s, unsigned t, std::uint64_t max_tuples) {
  if (t == 0) throw std::domain_error("exact_even_moment: t must be positive");
  const std::size_t card = s.size();
  if (card == 0) return 0;
  double tuples = std::pow(static_cast<double>(card), static_cast<double>(t));
  if (tuples > static_cast<double>(max_tuples)) {
    std::ostringstream msg;
    msg << "exact_even_moment: " << card << "^" << t << " t-fold sums exceed budget " << max_tuples;
    throw ResourceError(msg.str());
  }
  std::vector<std::uint64_t> powers;
  powers.reserve(card);
  for (std::uint64_t x : s.elements()) powers.push_back(checked_power(x, k));
  const unsigned __int128 top = static_cast<unsigned __int128>(powers.back()) * t;
  if (top > std::numeric_limits<std::uint64_t>::max()) throw ResourceError("exact_even_moment: t-fold sums overflow");

  std::vector<std::uint64_t> sums{0};
  for (unsigned i = 0; i < t; ++i) {
    std::vector<std::uint64_t> next;
    next.reserve(sums.size() * card);
    for (std::uint64_t v : sums) {
      for (std::uint64_t p : powers) next.push_back(v + p);
    }
    sums = std::move(next);
  }
  std::sort(sums.begin(), sums.end());
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < sums.size();) {
    std::size_t j = i;
    while (j < sums.size() && sums[j] == sums[i]) ++j;
    const std::uint64_t c = j - i;
    total += c * c;
    i = j;
  }
  return total;
}

Lemma41Result lemma41_mean_value(unsigned k, unsigned t, double X, double Q, double Y, double delta,
                                 std::span<const std::uint64_t> Z, const QuadratureOptions& opts) {
  if (k < 2) throw std::domain_error("weighted mean value: k >= 2 required");
  if (t < 1) throw std::domain_error("weighted mean value: t >= 1 required");
  if (!(delta > 1.0)) throw std::domain_error("weighted mean value: delta > 1 required");
  if (!(Q >= 1.0)) throw std::domain_error("weighted mean value: Q >= 1 required");
  if (!(X >= 1.0)) throw std::domain_error("weighted mean value: X >= 1 required");
  if (!(Y > 0.0)) throw std::domain_error("weighted mean value: Y > 0 required");
  const double Xk = std::pow(X, static_cast<double>(k));
  if (!(Q * Y <= 0.25 * Xk)) throw std::domain_error("weighted mean value: QY <= X^k/4 required");
  for (std::uint64_t z : Z) {
    if (z < 1 || static_cast<double>(z) > X) throw std::domain_error("weighted mean value: Z must lie in [1, X]");
  }

  Lemma41Result out;
  out.main_term = std::pow(X, 2.0 * t - static_cast<double>(k));
  out.secondary_term = std::pow(Q, t + 1.0) / Xk;

  const double spacing = default_spacing(opts, Xk);
  const auto qmax = static_cast<std::int64_t>(std::floor(Q));

  struct Piece {
    double lo, hi, centre, weight;
  };
  std::vector<Piece> pieces;
  for (std::int64_t q = 1; q <= qmax; ++q) {
    const double ksq = kappa_sq(k, factorize(static_cast<std::uint64_t>(q)));
    const double w = Y / (static_cast<double>(q) * Xk);
    for (std::int64_t a = 0; a <= q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      ++out.arcs;
      const double c = static_cast<double>(a) / static_cast<double>(q);
      const double lo = std::max(0.0, c - w);
      const double hi = std::min(1.0, c + w);
      if (lo < c) pieces.push_back({lo, c, c, ksq});
      if (c < hi) pieces.push_back({c, hi, c, ksq});
    }
  }
  if (Z.empty()) return out;

  std::uint64_t planned = 0;
  for (const auto& p : pieces) planned += trapezoid_panels(p.lo, p.hi, spacing, opts.min_samples_per_interval) + 1;
  if (planned > opts.max_samples) {
    std::ostringstream msg;
    msg << "weighted mean value: needs " << planned << " samples, budget " << opts.max_samples;
    throw ResourceError(msg.str());
  }

  const WeylSumEvaluator g(k, Z);
  std::vector<double> values, errors;
  for (const auto& p : pieces) {
    auto f = [&](double alpha) {
      const double ups = p.weight * std::pow(1.0 + Xk * std::abs(alpha - p.centre), -delta);
      return ups * std::pow(std::norm(g(alpha)), static_cast<double>(t));
    };
    const TrapezoidResult r = trapezoid(f, p.lo, p.hi, spacing, opts.min_samples_per_interval);
    values.push_back(r.value);
    errors.push_back(r.error);
    out.samples += r.samples;
  }
  out.lhs = pairwise_sum(values);
  out.estimated_quadrature_error = pairwise_sum(errors);
  out.ratio = out.lhs / (out.main_term + out.secondary_term);
  return out;
}

MonotoneShape MonotoneShape::constant(double c) {
  MonotoneShape s;
  s.kind = Kind::Constant;
  s.scale = c;
  return s;
}

MonotoneShape MonotoneShape::power(double sigma) {
  MonotoneShape s;
  s.kind = Kind::Power;
  s.sigma = sigma;
  return s;
}

MonotoneShape MonotoneShape::log_scaled(double scale) {
  MonotoneShape s;
  s.kind = Kind::Log;
  s.scale = scale;
  return s;
}

MonotoneShape MonotoneShape::tabulated(std::vector<double> nodes, std::vector<double> values) {
  if (nodes.size() < 2 || nodes.size() != values.size()) {
    throw std::invalid_argument("tabulated shape: need matching node/value lists of length >= 2");
  }
  bool up = true, down = true;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) throw std::invalid_argument("tabulated shape: nodes must increase strictly");
    if (values[i] < values[i - 1]) up = false;
    if (values[i] > values[i - 1]) down = false;
  }
  if (!up && !down) throw std::invalid_argument("tabulated shape: values are not monotone");
  MonotoneShape s;
  s.kind = Kind::Tabulated;
  s.nodes = std::move(nodes);
  s.values = std::move(values);
  return s;
}

double MonotoneShape::operator()(double w) const {
  switch (kind) {
    case Kind::Constant:
      return scale;
    case Kind::Power:
      return std::pow(w, sigma);
    case Kind::Log:
      return scale * std::log1p(w);
    case Kind::Tabulated: {
      if (w <= nodes.front()) return values.front();
      if (w >= nodes.back()) return values.back();
      const auto it = std::upper_bound(nodes.begin(), nodes.end(), w);
      const std::size_t i = static_cast<std::size_t>(it - nodes.begin());
      const double f = (w - nodes[i - 1]) / (nodes[i] - nodes[i - 1]);
      return values[i - 1] + f * (values[i] - values[i - 1]);
    }
  }
  return 0.0;
}

std::string MonotoneShape::name() const {
  switch (kind) {
    case Kind::Constant:
      return "constant";
    case Kind::Power:
      return "power";
    case Kind::Log:
      return "log";
    case Kind::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

OscillatoryResult oscillatory_integral(const MonotoneShape& f, unsigned k, double gamma, double Y, double X) {
  if (k < 1) throw std::domain_error("oscillatory_integral: k >= 1 required");
  if (!(Y > 0.0 && Y < X)) throw std::domain_error("oscillatory_integral: need 0 < Y < X");
  if (f.kind == MonotoneShape::Kind::Tabulated && (f.nodes.front() > Y || f.nodes.back() < X)) {
    throw std::domain_error("oscillatory_integral: tabulated shape does not cover [Y, X]");
  }
  const double kd = static_cast<double>(k);
  const double Yk = std::pow(Y, kd), Xk = std::pow(X, kd);
  const double phase_span = std::abs(gamma) * (Xk - Yk);
  const double count = std::max(1.0, std::ceil(2.0 * phase_span));
  if (count > 1e7) throw ResourceError("oscillatory_integral: more than 1e7 oscillation pieces");
  const auto n = static_cast<std::size_t>(count);

  auto phase = [&](double w) {
    const double x = gamma * std::pow(w, kd);
    return unit_phase(x - std::floor(x));
  };
  auto integrand = [&](double w) { return f(w) * phase(w); };

  // Complex-valued pieces: the relative tolerance is taken against |estimate|,
  // which stays away from zero on a half oscillation. Rounding in the phase
  // (about 1e-13 relative for gamma w^k near 10^3) rules out much tighter targets.
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  ComplexCompensatedSum total;
  double prev = Y;
  for (std::size_t i = 1; i <= n; ++i) {
    const double next = i == n ? X : std::pow(Yk + (Xk - Yk) * static_cast<double>(i) / static_cast<double>(n), 1.0 / kd);
    total.add(GK::integrate(integrand, prev, next, 8, 1e-9));
    prev = next;
  }
  OscillatoryResult out;
  out.pieces = n;
  out.value = std::abs(total.value());
  out.bound = (std::abs(f(X)) + std::abs(f(Y))) * 2.0 * X / (1.0 + Yk * std::abs(gamma));
  out.holds = out.value <= out.bound + 1e-6;
  return out;
}

namespace {

std::vector<std::uint64_t> kth_powers_up_to(unsigned k, std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = 1;; ++x) {
    unsigned __int128 r = 1;
    for (unsigned i = 0; i < k && r <= n; ++i) r *= x;
    if (r > n) break;
    out.push_back(static_cast<std::uint64_t>(r));
  }
  return out;
}

// r_j(m) for m = 0..n: ordered j-tuples of positive k-th powers summing to m.
std::vector<std::uint64_t> layered_counts(const std::vector<std::uint64_t>& powers, unsigned j, std::uint64_t n) {
  std::vector<std::uint64_t> cur(n + 1, 0);
  cur[0] = 1;
  for (unsigned step = 0; step < j; ++step) {
    std::vector<std::uint64_t> next(n + 1, 0);
    for (std::uint64_t m = 0; m <= n; ++m) {
      if (cur[m] == 0) continue;
      for (std::uint64_t p : powers) {
        if (m + p > n) break;
        next[m + p] += cur[m];
      }
    }
    cur = std::move(next);
  }
  return cur;
}

void check_representation_args(unsigned k, unsigned s, std::uint64_t n, std::uint64_t max_n) {
  if (k < 1 || s < 1) throw std::domain_error("representation count: k, s >= 1 required");
  if (n > max_n) {
    std::ostringstream msg;
    msg << "representation count: n = " << n << " exceeds budget " << max_n;
    throw ResourceError(msg.str());
  }
}

}  // namespace

std::uint64_t representation_count(unsigned k, unsigned s, std::uint64_t n, std::uint64_t max_n) {
  check_representation_args(k, s, n, max_n);
  const auto powers = kth_powers_up_to(k, n);
  const unsigned a = s / 2, b = s - a;
  const auto ra = layered_counts(powers, a, n);
  const auto rb = a == b ? ra : layered_counts(powers, b, n);
  std::uint64_t total = 0;
  for (std::uint64_t m = 0; m <= n; ++m) {
    if (ra[m] != 0) total += ra[m] * rb[n - m];
  }
  return total;
}

std::vector<std::uint64_t> representation_counts(unsigned k, unsigned s, std::uint64_t N, std::uint64_t max_n) {
  check_representation_args(k, s, N, max_n);
  const auto powers = kth_powers_up_to(k, N);
  const unsigned a = s / 2, b = s - a;
  const auto ra = layered_counts(powers, a, N);
  const auto rb = a == b ? ra : layered_counts(powers, b, N);
  std::vector<std::uint64_t> out(N + 1, 0);
  for (std::uint64_t m = 0; m <= N; ++m) {
    if (ra[m] == 0) continue;
    for (std::uint64_t r = 0; m + r <= N; ++r) out[m + r] += ra[m] * rb[r];
  }
  return out;
}

CheckResult verify_lemma_2_2(double X, double J) {
  if (!(X > 0.0) || !(J > 0.0)) throw std::domain_error("harmonic sum bound: X and J must be positive");
  CompensatedSum lhs;
  const auto n = static_cast<std::uint64_t>(std::floor(J));
  for (std::uint64_t j = 1; j <= n; ++j) lhs.add(1.0 / (1.0 + static_cast<double>(j) * X));
  const double rhs = 2.0 * J / (1.0 + X * J) * (1.0 + std::log1p(J * X));
  CheckResult r;
  r.name = "harmonic_sum_bound";
  r.lhs = lhs.value();
  r.rhs = rhs;
  r.margin = rhs - r.lhs;
  r.holds = r.lhs <= rhs;
  std::ostringstream d;
  d << "X=" << X << " J=" << J;
  r.detail = d.str();
  return r;
}

CheckResult verify_lemma_2_3(unsigned k, unsigned J, double lambda, double beta, double P) {
  if (k < 1) throw std::domain_error("dyadic sum bound: k >= 1 required");
  if (!(lambda > 1.0 / k && lambda <= 1.0)) throw std::domain_error("dyadic sum bound: need 1/k < lambda <= 1");
  if (!(std::ldexp(1.0, static_cast<int>(J)) <= P)) throw std::domain_error("dyadic sum bound: need 2^J <= P");
  const double kd = static_cast<double>(k);
  const double b = std::abs(beta);
  CompensatedSum lhs;
  for (unsigned j = 0; j <= J; ++j) {
    const double Xj = std::ldexp(P, -static_cast<int>(j));
    lhs.add(Xj * std::pow(1.0 + std::pow(Xj, kd) * b, -lambda));
  }
  CheckResult r;
  r.name = "dyadic_sum_ratio";
  r.lhs = lhs.value();
  r.rhs = P * std::pow(1.0 + std::pow(P, kd) * b, -1.0 / kd);
  r.margin = r.rhs - r.lhs;
  r.holds = std::isfinite(r.lhs / r.rhs);
  std::ostringstream d;
  d << "ratio=" << r.lhs / r.rhs << " beta=" << beta;
  r.detail = d.str();
  return r;
}

CheckResult dyadic_sum_grid_stability(unsigned k, unsigned J, double lambda, double P, std::size_t points) {
  if (points < 2) throw std::domain_error("dyadic sum grid: need at least two points");
  const double kd = static_cast<double>(k);
  const double lo = -kd * std::log(P), hi = kd * std::log(P);
  std::vector<double> ratios;
  ratios.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double beta = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    const CheckResult c = verify_lemma_2_3(k, J, lambda, beta, P);
    ratios.push_back(c.lhs / c.rhs);
  }
  const double sup = *std::max_element(ratios.begin(), ratios.end());
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  const double median = points % 2 == 1 ? sorted[points / 2] : 0.5 * (sorted[points / 2 - 1] + sorted[points / 2]);
  CheckResult r;
  r.name = "dyadic_sum_grid_stability";
  r.lhs = sup;
  r.rhs = 10.0 * median;
  r.margin = r.rhs - r.lhs;
  r.holds = std::isfinite(sup) && sup <= r.rhs;
  std::ostringstream d;
  d << "k=" << k << " J=" << J << " lambda=" << lambda << " P=" << P;
  r.detail = d.str();
  return r;
}

}  // namespace swl
