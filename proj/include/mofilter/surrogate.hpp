#pragma once

#include <string>
#include <vector>

#include "mofilter/problem.hpp"
#include "mofilter/subproblems.hpp"

namespace mofilter {

enum class ModelKind { RbfCubic, Taylor1, Taylor2 };

ModelKind model_kind_from_string(const std::string& s);
std::string to_string(ModelKind kind);

/// One interpolating scalar surrogate.  Taylor kinds store the FD expansion
/// at the center; the RBF kind stores cubic-kernel weights over a shared
/// point set plus a linear tail.
class ScalarModel {
 public:
  double value(const Vector& xi) const;
  Vector gradient(const Vector& xi) const;
  Matrix hessian(const Vector& xi) const;

  ModelKind kind = ModelKind::Taylor1;
  Vector center;
  double radius = 0.0;

  // Taylor block (constant term is the true value at the center).
  double t_const = 0.0;
  Vector t_grad;
  Matrix t_hess;  // zero matrix for taylor1

  // RBF block: m(xi) = sum_i w_i ||xi - p_i||^3 + c0 + c' (xi - center).
  Matrix rbf_points;  // n x m, column-wise
  Vector rbf_weights;
  double rbf_c0 = 0.0;
  Vector rbf_lin;
};

/// Interpolating surrogates for f, h and g sharing one center, radius and
/// (for RBF) one interpolation point set.
struct SurrogateSet {
  ModelKind kind = ModelKind::Taylor1;
  Vector center;
  double radius = 0.0;
  bool fully_linear = false;
  std::vector<ScalarModel> mf;
  std::vector<ScalarModel> mh;
  std::vector<ScalarModel> mg;

  Vector f_values(const Vector& xi) const;
  Vector h_values(const Vector& xi) const;
  Vector g_values(const Vector& xi) const;
  Matrix f_jacobian(const Vector& xi) const;
  Matrix h_jacobian(const Vector& xi) const;
  Matrix g_jacobian(const Vector& xi) const;

  /// max_l mf_l(xi), the model scalarization.
  double phi_model(const Vector& xi) const;

  /// Linearization at the center: h0/g0 are the model (== true) values,
  /// H/G the model Jacobians at the center.
  LinearizedSet linearize() const;
};

/// Finite-difference Taylor models of degree 1 or 2, centered at x.
SurrogateSet build_taylor(const Problem& problem, EvalDatabase& db,
                          const Vector& x, double delta, int degree);

/// Cubic RBF models on database points near x (reuse radius 2*delta),
/// topped up with axis samples until n+1 affinely independent points exist.
SurrogateSet build_rbf(const Problem& problem, EvalDatabase& db,
                       const Vector& x, double delta);

SurrogateSet build_models(const Problem& problem, EvalDatabase& db,
                          const Vector& x, double delta, ModelKind kind);

/// Returns a set that is fully linear at (x, delta); reuses `set` when it
/// already qualifies (same center, radius <= delta).
SurrogateSet make_fully_linear(const SurrogateSet& set, const Problem& problem,
                               EvalDatabase& db, const Vector& x, double delta);

/// Least-squares slope of log(max value error) vs log(delta) over the given
/// strictly decreasing radii; errors sampled at 32 uniform points per ball.
/// f_index selects the objective component to probe.
double error_slope_probe(const Problem& problem, ModelKind kind,
                         const Vector& x, const std::vector<double>& radii,
                         int f_index = 0, unsigned seed = 0);

}  // namespace mofilter
