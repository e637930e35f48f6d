#pragma once

#include <stdexcept>
#include <string>

namespace swl {

/// Outcome of a single inequality check. Both sides are always recorded;
/// `margin` is rhs - lhs for an upper-bound check (non-negative iff it holds).
struct CheckResult {
  std::string name;
  bool holds = true;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  std::string detail;
};

/// Raised when a computation would exceed its sample, memory or tuple budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when two independent evaluation routes disagree.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace swl
