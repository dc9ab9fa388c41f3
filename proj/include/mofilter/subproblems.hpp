#pragma once

#include <optional>

#include "mofilter/lp.hpp"
#include "mofilter/problem.hpp"

namespace mofilter {

/// Linearized feasible set, centered at the model center:
///   { s : h0 + H s = 0,  g0 + G s <= 0 }.
struct LinearizedSet {
  Matrix H;  // M x n
  Vector h0;
  Matrix G;  // P x n
  Vector g0;

  /// Same polyhedron re-centered at (center + n): residuals shift, the
  /// Jacobians stay.
  LinearizedSet shifted(const Vector& n) const;
};

struct CompatibilityParams {
  double c_delta = 0.7;
  double c_mu = 100.0;
  double mu = 0.01;
};

/// ||n|| <= c_delta * delta_bar * min{1, c_mu * delta_bar^mu} in the 2-norm.
bool compatible(const Vector& n, double delta_bar,
                const CompatibilityParams& p);

/// Minimum-2-norm point of the linearized set, via phase-1 LP plus a primal
/// active-set QP.  nullopt when the polyhedron is empty.
std::optional<Vector> qp_least_norm(const LinearizedSet& lin);

struct TangentialSolution {
  Vector d;
  double omega = 0.0;  // >= 0
  double chi = 0.0;    // min{1, omega}
  Vector y_obj;        // K multipliers, sum >= 1
  Vector y_eq;         // M
  Vector y_ineq;       // P, >= 0
  double duality_gap = 0.0;
};

/// Tangential LP:  min beta  s.t.  F d <= beta 1, d in lin_shifted,
/// ||d||_inf <= 1.  lin_shifted must be re-centered at x_n (its residuals
/// satisfied by s = 0).  Throws NumericalFailure past the pivot cap.
TangentialSolution lp_tangential(const Matrix& F,
                                 const LinearizedSet& lin_shifted);

/// KKT residual from tangential duals: normalizes w = y_obj / sum(y_obj),
/// returns (||F'w + H'y4' + G'y5'||_2, |g_values' y5'|).
std::pair<double, double> kkt_residual(const Matrix& F, const Matrix& H,
                                       const Matrix& G, const Vector& g_values,
                                       const TangentialSolution& sol);

/// Largest sigma with (sigma/||d||) d in lin_shifted and
/// ||n + (sigma/||d||) d||_2 <= delta.  Throws ZeroDirection for d = 0.
double initial_steplength(const Vector& n, const Vector& d, double delta,
                          const LinearizedSet& lin_shifted);

/// omega under the 2-norm ball (certified by box sandwiching) divided by
/// omega under the inf-norm ball; 1 when both vanish.  Test harness probe.
double omega_norm_ratio_probe(const Matrix& F,
                              const LinearizedSet& lin_shifted);

}  // namespace mofilter
