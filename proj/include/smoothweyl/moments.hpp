#pragma once

// Moments of Weyl sums over arc sets, by quadrature and, for even exponents
// over the whole circle, by counting solutions of the underlying diagonal
// equation. Also the weighted mean value over arcs, the first-derivative
// bound for oscillatory integrals, Waring representation counts and the two
// elementary summation inequalities.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "smoothweyl/arcs.hpp"
#include "smoothweyl/check.hpp"
#include "smoothweyl/expsums.hpp"
#include "smoothweyl/smooth.hpp"

namespace swl {

struct QuadratureOptions {
  /// Total sample budget across all intervals; exceeding it is a ResourceError.
  std::uint64_t max_samples = 200'000'000;
  std::uint64_t min_samples_per_interval = 64;
  /// Sample spacing; 0 selects 1/(8 D) for trigonometric degree D.
  double spacing = 0.0;
};

/// Composite trapezoid rule on [lo, hi] with an even number n of panels,
/// n >= min_samples and (hi - lo)/n <= spacing. The error estimate is
/// |T_n - T_{n/2}| / 3.
struct TrapezoidResult {
  double value = 0.0;
  double error = 0.0;
  std::uint64_t samples = 0;
};

/// Number of panels trapezoid() will use for these arguments.
std::uint64_t trapezoid_panels(double lo, double hi, double spacing, std::uint64_t min_samples);

TrapezoidResult trapezoid(const std::function<double(double)>& f, double lo, double hi, double spacing,
                          std::uint64_t min_samples);

struct MomentResult {
  double value = 0.0;
  double u = 0.0;
  std::string arcs;
  std::size_t intervals = 0;
  double measure = 0.0;
  std::uint64_t samples = 0;
  double estimated_quadrature_error = 0.0;
};

/// Integral of |g(alpha)|^u over `arcs`, g the Weyl sum over `s`.
/// Requires u >= 1. An empty arc set gives 0.
MomentResult quad_moment(unsigned k, const SmoothSet& s, const IntervalSet& arcs, double u,
                         const QuadratureOptions& opts = {}, std::string descriptor = "custom");

/// Samples quad_moment would take, computed without evaluating anything.
std::uint64_t quad_moment_samples(unsigned k, const SmoothSet& s, const IntervalSet& arcs,
                                  const QuadratureOptions& opts = {});

/// Number of ordered 2t-tuples from s with x_1^k + ... + x_t^k = x_{t+1}^k + ... + x_{2t}^k,
/// by sorting the card(s)^t ordered t-fold sums. Throws ResourceError when
/// card(s)^t exceeds `max_tuples`.
std::uint64_t exact_even_moment(unsigned k, const SmoothSet& s, unsigned t,
                                std::uint64_t max_tuples = 50'000'000);

struct Lemma41Result {
  double lhs = 0.0;
  double main_term = 0.0;       // X^(2t-k)
  double secondary_term = 0.0;  // X^-k Q^(t+1)
  double ratio = 0.0;
  std::size_t arcs = 0;
  std::uint64_t samples = 0;
  double estimated_quadrature_error = 0.0;
};

/// Integral over the arcs |q alpha - a| <= Y X^-k (q <= Q) of
/// Upsilon(alpha) |sum_{z in Z} e(alpha z^k)|^(2t), with Upsilon the weight
/// kappa(q)^2 (1 + X^k |alpha - a/q|)^-delta. Each arc is split at its centre.
/// Requires k >= 2, t >= 1, delta > 1, Q >= 1, X >= 1, Y > 0, QY <= X^k/4 and
/// Z inside [1, X]; throws std::domain_error naming the failed condition.
Lemma41Result lemma41_mean_value(unsigned k, unsigned t, double X, double Q, double Y, double delta,
                                 std::span<const std::uint64_t> Z, const QuadratureOptions& opts = {});

/// Monotone weights for the oscillatory integral.
struct MonotoneShape {
  enum class Kind { Constant, Power, Log, Tabulated };
  Kind kind = Kind::Constant;
  /// Constant value, or the multiplier of log(1 + w).
  double scale = 1.0;
  /// Exponent for Kind::Power.
  double sigma = -1.0;
  /// Nodes and values for Kind::Tabulated (linear interpolation).
  std::vector<double> nodes;
  std::vector<double> values;

  static MonotoneShape constant(double c);
  static MonotoneShape power(double sigma);
  static MonotoneShape log_scaled(double scale);
  /// Throws std::invalid_argument unless nodes increase strictly and values
  /// are monotone.
  static MonotoneShape tabulated(std::vector<double> nodes, std::vector<double> values);

  double operator()(double w) const;
  std::string name() const;
};

struct OscillatoryResult {
  double value = 0.0;
  double bound = 0.0;
  bool holds = true;
  std::size_t pieces = 0;
};

/// |int_Y^X f(w) e(gamma w^k) dw| against (|f(X)| + |f(Y)|) 2X / (1 + Y^k |gamma|).
/// Adaptive Gauss-Kronrod on pieces of equal phase increment (at most 1/2).
/// Requires 0 < Y < X and a tabulated f covering [Y, X].
OscillatoryResult oscillatory_integral(const MonotoneShape& f, unsigned k, double gamma, double Y, double X);

/// R_{s,k}(n): ordered s-tuples of positive integers with x_1^k + ... + x_s^k = n.
/// Splits s into two halves and joins their representation counts.
/// Throws ResourceError for n above `max_n`.
std::uint64_t representation_count(unsigned k, unsigned s, std::uint64_t n, std::uint64_t max_n = 10'000'000);

/// R_{s,k}(n) for n = 0..N.
std::vector<std::uint64_t> representation_counts(unsigned k, unsigned s, std::uint64_t N,
                                                 std::uint64_t max_n = 10'000'000);

/// sum_{1 <= j <= J} (1 + jX)^-1 <= 2J (1 + XJ)^-1 (1 + log(1 + JX)).
CheckResult verify_lemma_2_2(double X, double J);

/// lhs = sum_{0 <= j <= J} X_j (1 + X_j^k |beta|)^-lambda with X_j = 2^-j P,
/// rhs = P (1 + P^k |beta|)^(-1/k). holds iff the ratio is finite.
/// Requires 1/k < lambda <= 1 and 2^J <= P.
CheckResult verify_lemma_2_3(unsigned k, unsigned J, double lambda, double beta, double P);

/// Ratio of verify_lemma_2_3 on `points` log-spaced beta in [P^-k, P^k]:
/// lhs = sup of the ratio, rhs = 10 * median, holds iff lhs <= rhs.
CheckResult dyadic_sum_grid_stability(unsigned k, unsigned J, double lambda, double P, std::size_t points = 200);

}  // namespace swl
