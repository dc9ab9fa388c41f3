#pragma once

#include <Eigen/Core>

namespace mofilter::lp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

/// Solution of  min c'v  s.t.  A_ub v <= b_ub,  A_eq v = b_eq,  v free.
/// Row duals are Lagrange multipliers: mult_ub >= 0, mult_eq free, with
/// c + A_ub' mult_ub + A_eq' mult_eq = 0 at the optimum.
struct Solution {
  Status status = Status::Infeasible;
  Vector v;
  Vector mult_ub;
  Vector mult_eq;
  double objective = 0.0;
  /// -b_ub' mult_ub - b_eq' mult_eq; equals objective at the optimum.
  double dual_objective = 0.0;
};

/// Dense two-phase primal simplex with Bland's rule.  Free variables are
/// split internally; inequality rows get slacks.  iter_cap bounds the total
/// number of pivots per phase.
Solution solve(const Vector& c, const Matrix& A_ub, const Vector& b_ub,
               const Matrix& A_eq, const Vector& b_eq, int iter_cap = 10000);

}  // namespace mofilter::lp
