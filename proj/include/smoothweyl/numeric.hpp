#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace swl {

using Complex = std::complex<double>;

/// Neumaier (improved Kahan-Babuska) summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Componentwise compensated summation of complex values.
class ComplexCompensatedSum {
 public:
  void add(Complex z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  void add(Complex z, double weight) {
    re_.add(weight * z.real());
    im_.add(weight * z.imag());
  }
  Complex value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

/// Recursive pairwise summation. The reduction tree depends only on the
/// length of the input, never on how the values were produced.
double pairwise_sum(std::span<const double> xs);

/// e(x) = exp(2 pi i x) for a phase already reduced to [0, 1).
inline Complex unit_phase(double frac) {
  // fold to [-1/2, 1/2) so the argument to sin/cos stays small
  if (frac >= 0.5) frac -= 1.0;
  const double angle = 2.0 * std::numbers::pi * frac;
  return {std::cos(angle), std::sin(angle)};
}

/// e(num / den) with the numerator reduced modulo den in integer arithmetic.
inline Complex root_of_unity(std::int64_t num, std::int64_t den) {
  std::int64_t r = num % den;
  if (r < 0) r += den;
  return unit_phase(static_cast<double>(r) / static_cast<double>(den));
}

/// Table of e(j/q) for j = 0..q-1.
std::vector<Complex> roots_of_unity(std::uint64_t q);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least two points;
/// the standard error is zero when exactly two are given.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace swl
