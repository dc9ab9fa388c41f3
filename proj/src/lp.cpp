#include "mofilter/lp.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

namespace mofilter::lp {

namespace {

constexpr double kTol = 1e-9;

struct Tableau {
  Matrix A;  // m x N, standard form
  Vector b;  // >= 0
  std::vector<int> basis;
};

enum class PivotResult { Optimal, Unbounded, IterationLimit };

// Primal simplex with Bland's rule on  min c'x, Ax = b, x >= 0.
// Columns with index >= col_limit never enter the basis.
PivotResult run_simplex(Tableau& t, const Vector& c, int col_limit,
                        int iter_cap) {
  const int m = static_cast<int>(t.A.rows());
  for (int iter = 0; iter < iter_cap; ++iter) {
    Eigen::PartialPivLU<Matrix> lu;
    {
      Matrix B(m, m);
      for (int i = 0; i < m; ++i) B.col(i) = t.A.col(t.basis[i]);
      lu.compute(B);
    }
    const Vector xB = lu.solve(t.b);
    Vector cB(m);
    for (int i = 0; i < m; ++i) cB[i] = c[t.basis[i]];
    const Vector y = lu.transpose().solve(cB);

    std::vector<char> in_basis(t.A.cols(), 0);
    for (int i = 0; i < m; ++i) in_basis[t.basis[i]] = 1;

    int entering = -1;
    for (int j = 0; j < col_limit; ++j) {
      if (in_basis[j]) continue;
      const double reduced = c[j] - y.dot(t.A.col(j));
      if (reduced < -kTol) {
        entering = j;  // Bland: lowest eligible index
        break;
      }
    }
    if (entering < 0) return PivotResult::Optimal;

    const Vector dir = lu.solve(t.A.col(entering));
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
      if (dir[i] > kTol)
        best_ratio = std::min(best_ratio, std::max(xB[i], 0.0) / dir[i]);
    if (!std::isfinite(best_ratio)) return PivotResult::Unbounded;
    // Among min-ratio ties prefer the largest pivot element (degenerate
    // vertices otherwise admit near-singular bases); fall back to Bland's
    // index rule late in the budget to break potential cycles.
    const bool bland = iter > iter_cap / 2;
    int leaving = -1;
    for (int i = 0; i < m; ++i) {
      if (dir[i] <= kTol || std::max(xB[i], 0.0) / dir[i] > best_ratio + kTol)
        continue;
      if (leaving < 0 ||
          (bland ? t.basis[i] < t.basis[leaving] : dir[i] > dir[leaving]))
        leaving = i;
    }
    t.basis[leaving] = entering;
  }
  return PivotResult::IterationLimit;
}

}  // namespace

Solution solve(const Vector& c, const Matrix& A_ub, const Vector& b_ub,
               const Matrix& A_eq, const Vector& b_eq, int iter_cap) {
  const int nv = static_cast<int>(c.size());
  const int mu = static_cast<int>(A_ub.rows());
  const int me = static_cast<int>(A_eq.rows());
  const int m = mu + me;
  const int n_real = 2 * nv + mu;  // v = p - q, one slack per <= row

  Solution sol;
  if (m == 0) {
    // Unconstrained LP: bounded only for c == 0.
    sol.v = Vector::Zero(nv);
    sol.mult_ub = Vector(0);
    sol.mult_eq = Vector(0);
    sol.status =
        c.lpNorm<Eigen::Infinity>() <= kTol ? Status::Optimal : Status::Unbounded;
    return sol;
  }

  Tableau t;
  t.A = Matrix::Zero(m, n_real + m);
  t.b = Vector(m);
  Vector cost = Vector::Zero(n_real + m);
  for (int i = 0; i < mu; ++i) {
    t.A.row(i).segment(0, nv) = A_ub.row(i);
    t.A.row(i).segment(nv, nv) = -A_ub.row(i);
    t.A(i, 2 * nv + i) = 1.0;  // slack
    t.b[i] = b_ub[i];
  }
  for (int i = 0; i < me; ++i) {
    t.A.row(mu + i).segment(0, nv) = A_eq.row(i);
    t.A.row(mu + i).segment(nv, nv) = -A_eq.row(i);
    t.b[mu + i] = b_eq[i];
  }
  for (int i = 0; i < m; ++i) {
    if (t.b[i] < 0.0) {
      t.A.row(i) = -t.A.row(i);
      t.b[i] = -t.b[i];
    }
    t.A(i, n_real + i) = 1.0;  // artificial
  }
  cost.segment(0, nv) = c;
  cost.segment(nv, nv) = -c;

  // Phase 1: minimize the sum of artificials.
  Vector phase1_cost = Vector::Zero(n_real + m);
  phase1_cost.segment(n_real, m).setOnes();
  t.basis.resize(m);
  for (int i = 0; i < m; ++i) t.basis[i] = n_real + i;

  PivotResult r = run_simplex(t, phase1_cost, n_real + m, iter_cap);
  if (r == PivotResult::IterationLimit) {
    sol.status = Status::IterationLimit;
    return sol;
  }
  {
    Matrix B(m, m);
    for (int i = 0; i < m; ++i) B.col(i) = t.A.col(t.basis[i]);
    const Vector xB = Eigen::PartialPivLU<Matrix>(B).solve(t.b);
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= n_real) infeas += std::max(xB[i], 0.0);
    if (infeas > 1e-8) {
      sol.status = Status::Infeasible;
      return sol;
    }
  }

  // Pivot basic artificials (at zero level) out where possible; columns
  // >= n_real are barred from entering in phase 2 regardless.
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < n_real) continue;
    Matrix B(m, m);
    for (int k = 0; k < m; ++k) B.col(k) = t.A.col(t.basis[k]);
    Eigen::PartialPivLU<Matrix> lu(B);
    for (int j = 0; j < n_real; ++j) {
      bool basic = false;
      for (int k = 0; k < m; ++k) basic |= (t.basis[k] == j);
      if (basic) continue;
      const Vector dir = lu.solve(t.A.col(j));
      if (std::abs(dir[i]) > 1e-7) {
        t.basis[i] = j;
        break;
      }
    }
  }

  r = run_simplex(t, cost, n_real, iter_cap);
  if (r == PivotResult::Unbounded) {
    sol.status = Status::Unbounded;
    return sol;
  }
  if (r == PivotResult::IterationLimit) {
    sol.status = Status::IterationLimit;
    return sol;
  }

  Matrix B(m, m);
  for (int i = 0; i < m; ++i) B.col(i) = t.A.col(t.basis[i]);
  Eigen::PartialPivLU<Matrix> lu(B);
  const Vector xB = lu.solve(t.b);
  Vector cB(m);
  for (int i = 0; i < m; ++i) cB[i] = cost[t.basis[i]];
  Vector y = lu.transpose().solve(cB);

  // Undo the phase-1 row sign flips in the duals: the stored row i is
  // s_i * (original row i) with s_i recoverable from the slack/artificial
  // column orientation.  Equality rows flipped for b >= 0 negate y.
  Vector x_full = Vector::Zero(n_real + m);
  for (int i = 0; i < m; ++i) x_full[t.basis[i]] = xB[i];

  sol.v = x_full.segment(0, nv) - x_full.segment(nv, nv);
  sol.objective = c.dot(sol.v);
  sol.mult_ub = Vector(mu);
  sol.mult_eq = Vector(me);
  for (int i = 0; i < mu; ++i) {
    const double sign = t.A(i, 2 * nv + i);  // +1 or -1 after flip
    sol.mult_ub[i] = -sign * y[i];
  }
  for (int i = 0; i < me; ++i) {
    // Equality row sign: compare stored row against original.
    double sign = 1.0;
    const double bn = A_eq.row(i).norm();
    if (bn > 0.0) {
      const double dot =
          A_eq.row(i).dot(t.A.row(mu + i).segment(0, nv)) / (bn * bn);
      sign = dot < 0.0 ? -1.0 : 1.0;
    } else {
      sign = b_eq[i] < 0.0 ? -1.0 : 1.0;
    }
    sol.mult_eq[i] = -sign * y[mu + i];
  }
  sol.dual_objective = -b_ub.dot(sol.mult_ub) - b_eq.dot(sol.mult_eq);
  sol.status = Status::Optimal;
  return sol;
}

}  // namespace mofilter::lp
