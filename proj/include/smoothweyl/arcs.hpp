#pragma once

// Hardy-Littlewood dissection of [0,1). Arc endpoints are exact rationals;
// doubles appear only when an interval set is handed to quadrature.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace swl {

/// Coprime pair locating an arc centre a/q, with 0 <= a <= q.
struct ReducedFraction {
  std::int64_t a = 0;
  std::int64_t q = 1;

  ReducedFraction() = default;
  /// Throws std::invalid_argument unless q >= 1, 0 <= a <= q and gcd(a,q) = 1.
  ReducedFraction(std::int64_t a_, std::int64_t q_);

  double value() const { return static_cast<double>(a) / static_cast<double>(q); }
  friend bool operator==(const ReducedFraction&, const ReducedFraction&) = default;
};

/// Closed interval with exact endpoints.
struct Interval {
  mpq_class lo;
  mpq_class hi;
};

/// Finite union of disjoint closed intervals inside [0,1], sorted. Touching
/// intervals are merged; endpoint openness is not tracked.
class IntervalSet {
 public:
  IntervalSet() = default;
  /// Clips each interval to [0,1], drops empty ones, sorts and merges.
  explicit IntervalSet(std::vector<Interval> intervals);

  static IntervalSet unit();

  const std::vector<Interval>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }

  mpq_class measure() const;
  bool contains(double alpha) const;
  /// Every interval of `other` lies inside some interval of *this.
  bool contains(const IntervalSet& other) const;

  IntervalSet difference(const IntervalSet& other) const;
  IntervalSet complement() const;

  std::vector<std::pair<double, double>> to_doubles() const;

 private:
  std::vector<Interval> intervals_;
};

/// A single arc {alpha in [0,1) : |q alpha - a| <= width}, clipped.
struct Arc {
  ReducedFraction centre;
  Interval span;
};

/// All arcs with q <= max_q, 0 <= a <= q, gcd(a,q) = 1 and |q alpha - a| <= width,
/// ordered by (q, a). Empty arcs (outside [0,1)) are skipped.
std::vector<Arc> enumerate_arcs(const mpq_class& max_q, const mpq_class& width);

/// Exact rational conversion of a finite double.
mpq_class exact(double x);

/// Major arcs M(Q): width Q P^-k. Requires 1 <= Q <= P^(k/2).
IntervalSet major_arcs(unsigned k, const mpq_class& P, const mpq_class& Q);
IntervalSet major_arcs(unsigned k, double P, double Q);
/// N(Q) = M(Q) \ M(Q/2).
IntervalSet narrow_arcs(unsigned k, const mpq_class& P, const mpq_class& Q);
IntervalSet narrow_arcs(unsigned k, double P, double Q);
/// m(Q) = [0,1) \ M(Q).
IntervalSet minor_arcs(unsigned k, double P, double Q);

/// (2Q / P^k) sum_{q <= Q} phi(q)/q: the measure of M(Q) when its arcs are
/// pairwise disjoint (guaranteed when 2 Q^2 < P^k).
mpq_class major_arc_measure_formula(unsigned k, const mpq_class& P, const mpq_class& Q);

/// Major(fraction) or Minor (nullopt).
using ArcClassification = std::optional<ReducedFraction>;

/// Finds the admissible (q,a) of least q with q <= Q and |q alpha - a| <= Q P^-k,
/// by walking the continued-fraction convergents of alpha (computed exactly
/// from its binary expansion). Requires alpha in [0,1) and 1 <= Q <= P^(k/2).
ArcClassification classify(double alpha, unsigned k, double P, double Q);

/// The admissibility test shared by classify and its callers.
inline bool within_arc(double alpha, std::int64_t q, std::int64_t a, double width) {
  const double off = static_cast<double>(q) * alpha - static_cast<double>(a);
  return (off < 0 ? -off : off) <= width;
}

struct EnvelopeParams {
  unsigned k = 3;
  double P = 0.0;
  double R = 2.0;
  double epsilon = 0.01;
  /// The unspecified positive constant in the second term of the small-q bound.
  double c = 1.0;

  /// Throws std::domain_error unless k >= 2, 2 <= R <= P, epsilon > 0, c > 0.
  void validate() const;
  double L() const;
  double L2() const;
};

enum class SumKind { Truncated, Full };

/// Bound for |g_nu| (Truncated) or |g| (Full) valid for every coprime (a,q),
/// evaluated with implicit constant 1.
double envelope_thm11(double alpha, const ReducedFraction& frac, const EnvelopeParams& params, SumKind kind);

/// Small-q bound kappa psi P / (1 + P^k|beta|)^e + P exp(-c sqrt(log P)) (1 + P^k|beta|),
/// with e = 1 (Truncated) or 1/k (Full), implicit constant 1.
double envelope_thm12(double alpha, const ReducedFraction& frac, const EnvelopeParams& params, SumKind kind);

/// kappa(q)^2 (1 + X^k |alpha - a/q|)^-delta. Not clamped to [0,1].
double upsilon(double alpha, const ReducedFraction& frac, unsigned k, double delta, double X);

}  // namespace swl
