#pragma once

#include <Eigen/Core>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace mofilter {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Black-box problem: K objectives, M equality and P inequality constraints
/// on R^n.  Evaluators must be pure (bit-identical results per point).
struct Problem {
  int n = 0;
  int num_obj = 0;   // K >= 1
  int num_eq = 0;    // M >= 0
  int num_ineq = 0;  // P >= 0
  std::function<Vector(const Vector&)> eval_f;
  std::function<Vector(const Vector&)> eval_h;  // may be empty when M == 0
  std::function<Vector(const Vector&)> eval_g;  // may be empty when P == 0
  std::string name;
};

/// theta(x) = max{0, max_l |h_l|, max_l g_l}.  Clamped at zero so filter
/// entries stay nonnegative.
double infeasibility(const Vector& h, const Vector& g);

/// Phi(x) = max_l f_l(x).
double max_scalarization(const Vector& f);

struct EvalRecord {
  Vector x;
  Vector f;
  Vector h;
  Vector g;
  double theta = 0.0;
  double phi = 0.0;
};

/// Append-only store of evaluations with an exact-bit point index.  A lookup
/// hit short-circuits the evaluators, keeping call counts deterministic.
class EvalDatabase {
 public:
  const EvalRecord& evaluate(const Problem& problem, const Vector& x);

  const EvalRecord* find(const Vector& x) const;

  const std::vector<EvalRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  long evaluator_calls() const { return evaluator_calls_; }

 private:
  std::vector<EvalRecord> records_;
  std::map<std::vector<double>, std::size_t> index_;
  long evaluator_calls_ = 0;
};

/// Constrained two-parabolas problem: n=2, K=2, one inequality keeping
/// iterates outside the open unit disk.
Problem two_parabolas();

/// Problem "MW3" with n=3, K=2: two nonlinear inequality constraints plus
/// the box 0 <= x_i <= 1 encoded as six extra inequality components.
Problem mw3();

/// Lookup of the built-in benchmark problems by name ("two_parabolas",
/// "mw3").  Throws std::invalid_argument for unknown names.
Problem problem_by_name(const std::string& name);

}  // namespace mofilter
