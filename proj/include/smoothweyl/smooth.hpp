#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace swl {

inline constexpr std::uint64_t kDefaultSieveLimit = 10'000'000;

/// The set A(P,R) of R-smooth integers in [1,P], or its truncation
/// A_nu(P,R) = A(P,R) cap (P/nu, P]. Immutable once built.
class SmoothSet {
 public:
  SmoothSet(double P, double R, std::optional<double> nu, std::vector<std::uint64_t> elements);

  double P() const { return P_; }
  double R() const { return R_; }
  std::optional<double> nu() const { return nu_; }
  const std::vector<std::uint64_t>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  bool contains(std::uint64_t n) const;

 private:
  double P_;
  double R_;
  std::optional<double> nu_;
  std::vector<std::uint64_t> elements_;
};

/// Largest-prime-factor table for 1..N built by a linear sieve; lpf(1) = 1.
class LargestPrimeFactorTable {
 public:
  explicit LargestPrimeFactorTable(std::uint64_t N);

  std::uint64_t limit() const { return lpf_.size() - 1; }
  std::uint32_t lpf(std::uint64_t n) const { return lpf_.at(n); }
  /// A(P,R) for P <= limit().
  SmoothSet smooth_set(double P, double R) const;

 private:
  std::vector<std::uint32_t> lpf_;
};

/// A(P,R). Requires 2 <= R <= P <= limit; throws std::domain_error otherwise.
SmoothSet sieve_smooth(double P, double R, std::uint64_t limit = kDefaultSieveLimit);

/// A_nu(P,R) from A(P,R). Requires nu > 1 and an untruncated input.
SmoothSet truncate(const SmoothSet& s, double nu);

}  // namespace swl
