#pragma once

#include <stdexcept>
#include <string>

namespace mofilter {

/// An evaluator returned NaN or infinity; the trial point left the
/// function's domain.
struct NonFiniteValue : std::runtime_error {
  explicit NonFiniteValue(const std::string& what) : std::runtime_error(what) {}
};

/// RBF interpolation system is numerically singular after pivoting.
struct SingularInterpolation : std::runtime_error {
  explicit SingularInterpolation(const std::string& what)
      : std::runtime_error(what) {}
};

/// A subproblem solver exceeded its iteration cap or lost feasibility.
struct NumericalFailure : std::runtime_error {
  explicit NumericalFailure(const std::string& what)
      : std::runtime_error(what) {}
};

/// Step-length computation was handed a zero direction.
struct ZeroDirection : std::runtime_error {
  explicit ZeroDirection(const std::string& what) : std::runtime_error(what) {}
};

/// A feasible pair (theta == 0) was pushed into the filter; driver bug.
struct FeasiblePointRejected : std::logic_error {
  explicit FeasiblePointRejected(const std::string& what)
      : std::logic_error(what) {}
};

}  // namespace mofilter
