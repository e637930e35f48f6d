#pragma once

// Experiment orchestration: verification suites built from the per-module
// checks, and parameter sweeps that set a measured quantity against the
// matching bound expression (implicit constant 1).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smoothweyl/report.hpp"

namespace swl {

struct ExperimentConfig {
  std::string experiment;
  unsigned k = 3;
  unsigned t = 1;
  double u = 7.0;
  double omega = 0.5;
  std::optional<double> omega_prime;
  /// Single arc parameter; 0 means "experiment default".
  double Q = 0.0;
  std::vector<double> P_list;
  std::vector<double> Q_list;
  /// Fixed smoothness bound, used unless eta is set (then R = P^eta).
  double R = 4.0;
  std::optional<double> eta;
  double epsilon = 0.01;
  double c = 1.0;
  double delta = 1.5;
  /// Minimum quadrature samples per interval, or samples per arc stratum in
  /// envelope scans; 0 keeps the defaults.
  std::uint64_t grid_per_arc = 0;
  /// Minimum number of sampled points per P in envelope scans.
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::uint64_t max_samples = 200'000'000;

  /// Fills unset lists and parameters with the experiment's defaults.
  static ExperimentConfig defaults(const std::string& experiment);

  /// Throws std::domain_error naming the first violated constraint.
  void validate() const;
  double R_for(double P) const;
  Json to_json() const;
};

/// Names accepted by run_sweep.
std::vector<std::string> sweep_experiments();
/// Names accepted by run_verify.
std::vector<std::string> verify_suites();

/// Runs arithmetic | expsums | arcs | inequalities | moments | all.
/// Resource errors from sub-suites propagate.
ExperimentReport run_verify(const std::string& suite, std::uint64_t seed = 1);

/// Runs major_moment | narrow_decay | weighted_mean | envelope. The sample budget is
/// checked before any evaluation.
ExperimentReport run_sweep(const ExperimentConfig& config);

// Individual suites; run_verify concatenates them.

/// scriptS(q,a) <= 6k kappa psi for all q <= all_q_max and every coprime a,
/// plus `random_draws` seeded pairs with q <= random_q_max.
ExperimentReport verify_script_S_suite(std::span<const unsigned> ks, std::uint64_t all_q_max = 300,
                                       std::size_t random_draws = 1000, std::uint64_t random_q_max = 5000,
                                       std::uint64_t seed = 1);
ExperimentReport verify_W_suite(std::span<const unsigned> ks, std::uint64_t seed = 1);
/// The kappa(q/d) inequality for q <= q_max and the two-exponent
/// submultiplicativity for primes p <= p_max, 0 <= a, b <= 3k.
ExperimentReport verify_kappa_divisor_suite(std::span<const unsigned> ks, std::uint64_t q_max = 200,
                                            std::uint64_t p_max = 100);
/// kappa^2 >= 1/q (k = 2..6), kappa_2^2 <= 4^omega / q, and the k = 3,
/// s = 4 series closed form with its 83/p bound.
ExperimentReport verify_kappa_bounds_suite(std::uint64_t q_max = 100'000, std::uint64_t p_max = 1000);
/// classify against brute force, arc-union measure against the analytic
/// formula, nesting, and point membership.
ExperimentReport verify_dissection_suite(std::size_t samples = 10'000, std::uint64_t seed = 1);
ExperimentReport verify_inequalities_suite(std::size_t draws_2_2 = 10'000, std::size_t draws_3_1 = 1000,
                                           std::uint64_t seed = 1);
/// Quadrature of |g|^(2t) over [0,1) against solution counts.
ExperimentReport verify_orthogonality_suite();
/// sum_{n <= N} R_{s,k}(n) against a direct lattice-point count.
ExperimentReport verify_waring_suite(unsigned k = 3, unsigned s = 4, std::uint64_t N = 10'000);

/// Number of x in N^s with x_1^k + ... + x_s^k <= N, by nested enumeration.
std::uint64_t lattice_count(unsigned k, unsigned s, std::uint64_t N);

}  // namespace swl
