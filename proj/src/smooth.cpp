#include "smoothweyl/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace swl {

SmoothSet::SmoothSet(double P, double R, std::optional<double> nu, std::vector<std::uint64_t> elements)
    : P_(P), R_(R), nu_(nu), elements_(std::move(elements)) {
  if (!(R_ >= 2.0 && R_ <= P_)) throw std::domain_error("SmoothSet: need 2 <= R <= P");
  if (nu_ && !(*nu_ > 1.0)) throw std::domain_error("SmoothSet: nu must exceed 1");
  if (!std::is_sorted(elements_.begin(), elements_.end()) ||
      std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end()) {
    throw std::invalid_argument("SmoothSet: elements must be strictly increasing");
  }
}

bool SmoothSet::contains(std::uint64_t n) const {
  return std::binary_search(elements_.begin(), elements_.end(), n);
}

LargestPrimeFactorTable::LargestPrimeFactorTable(std::uint64_t N) {
  if (N > kDefaultSieveLimit * 10) throw std::domain_error("LargestPrimeFactorTable: limit too large");
  lpf_.assign(N + 1, 0);
  if (N >= 1) lpf_[1] = 1;
  // increasing primes overwrite earlier entries, leaving the largest one
  for (std::uint64_t p = 2; p <= N; ++p) {
    if (lpf_[p] != 0) continue;
    for (std::uint64_t m = p; m <= N; m += p) lpf_[m] = static_cast<std::uint32_t>(p);
  }
}

SmoothSet LargestPrimeFactorTable::smooth_set(double P, double R) const {
  if (!(R >= 2.0 && R <= P)) throw std::domain_error("sieve_smooth: need 2 <= R <= P");
  const auto top = static_cast<std::uint64_t>(std::floor(P));
  if (top > limit()) throw std::domain_error("sieve_smooth: P exceeds the table limit");
  std::vector<std::uint64_t> elems;
  for (std::uint64_t n = 1; n <= top; ++n) {
    if (static_cast<double>(lpf_[n]) <= R) elems.push_back(n);
  }
  return SmoothSet(P, R, std::nullopt, std::move(elems));
}

SmoothSet sieve_smooth(double P, double R, std::uint64_t limit) {
  if (!(R >= 2.0 && R <= P)) throw std::domain_error("sieve_smooth: need 2 <= R <= P");
  if (P > static_cast<double>(limit)) {
    throw std::domain_error("sieve_smooth: P exceeds the sieve limit " + std::to_string(limit));
  }
  return LargestPrimeFactorTable(static_cast<std::uint64_t>(std::floor(P))).smooth_set(P, R);
}

SmoothSet truncate(const SmoothSet& s, double nu) {
  if (!(nu > 1.0)) throw std::domain_error("truncate: nu must exceed 1");
  if (s.nu()) throw std::invalid_argument("truncate: set is already truncated");
  const double threshold = s.P() / nu;
  std::vector<std::uint64_t> elems;
  for (std::uint64_t n : s.elements()) {
    if (static_cast<double>(n) > threshold) elems.push_back(n);
  }
  return SmoothSet(s.P(), s.R(), nu, std::move(elems));
}

}  // namespace swl
