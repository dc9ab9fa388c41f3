#include "mofilter/subproblems.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "mofilter/errors.hpp"

namespace mofilter {

LinearizedSet LinearizedSet::shifted(const Vector& n) const {
  LinearizedSet out;
  out.H = H;
  out.G = G;
  out.h0 = h0.size() > 0 ? Vector(h0 + H * n) : h0;
  out.g0 = g0.size() > 0 ? Vector(g0 + G * n) : g0;
  return out;
}

bool compatible(const Vector& n, double delta_bar,
                const CompatibilityParams& p) {
  const double bound = p.c_delta * delta_bar *
                       std::min(1.0, p.c_mu * std::pow(delta_bar, p.mu));
  return n.norm() <= bound;
}

std::optional<Vector> qp_least_norm(const LinearizedSet& lin) {
  const int n = static_cast<int>(std::max(lin.H.cols(), lin.G.cols()));
  const int me = static_cast<int>(lin.H.rows());
  const int mi = static_cast<int>(lin.G.rows());

  const bool origin_ok =
      (me == 0 || lin.h0.lpNorm<Eigen::Infinity>() == 0.0) &&
      (mi == 0 || lin.g0.maxCoeff() <= 0.0);
  if (origin_ok) return Vector::Zero(n);

  // Phase 1: any feasible point of the polyhedron.
  lp::Solution start = lp::solve(Vector::Zero(n), lin.G, -lin.g0, lin.H,
                                 -lin.h0, 2000);
  if (start.status == lp::Status::Infeasible) return std::nullopt;
  if (start.status != lp::Status::Optimal)
    throw NumericalFailure("qp_least_norm: phase-1 LP failed");

  Vector s = start.v;
  std::vector<char> active(mi, 0);
  for (int i = 0; i < mi; ++i)
    active[i] = std::abs(lin.g0[i] + lin.G.row(i).dot(s)) <= 1e-9;

  const int cap = 200 + 20 * (me + mi);
  for (int iter = 0; iter < cap; ++iter) {
    int nw = me;
    for (int i = 0; i < mi; ++i) nw += active[i];
    Matrix Aw(nw, n);
    std::vector<int> w_rows;  // G-row index per working inequality
    int r = 0;
    for (int i = 0; i < me; ++i) Aw.row(r++) = lin.H.row(i);
    for (int i = 0; i < mi; ++i)
      if (active[i]) {
        Aw.row(r++) = lin.G.row(i);
        w_rows.push_back(i);
      }

    Vector p;
    if (nw == 0) {
      p = -s;
    } else {
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Aw);
      // Minimizer of ||s + p||^2 over null(Aw) is p = Aw^+ (Aw s) - s.
      p = cod.solve(Vector(Aw * s)) - s;
    }

    if (p.lpNorm<Eigen::Infinity>() <= 1e-11) {
      if (nw == 0) return s;
      Eigen::CompleteOrthogonalDecomposition<Matrix> codT(Matrix(Aw.transpose()));
      const Vector z = codT.solve(Vector(-s));
      int drop = -1;
      for (std::size_t k = 0; k < w_rows.size(); ++k) {
        if (z[me + static_cast<int>(k)] < -1e-9) {
          drop = w_rows[k];
          break;  // lowest row index
        }
      }
      if (drop < 0) return s;
      active[drop] = 0;
      continue;
    }

    double alpha = 1.0;
    int blocking = -1;
    for (int i = 0; i < mi; ++i) {
      if (active[i]) continue;
      const double dir = lin.G.row(i).dot(p);
      if (dir > 1e-12) {
        const double val = lin.g0[i] + lin.G.row(i).dot(s);
        const double ai = std::max(0.0, -val / dir);
        if (ai < alpha) {
          alpha = ai;
          blocking = i;
        }
      }
    }
    s += alpha * p;
    if (blocking >= 0)
      active[blocking] = 1;
  }
  throw NumericalFailure("qp_least_norm: active-set iteration cap exceeded");
}

namespace {

TangentialSolution tangential_impl(const Matrix& F, const LinearizedSet& lin,
                                   double box_radius) {
  const int n = static_cast<int>(F.cols());
  const int K = static_cast<int>(F.rows());
  const int M = static_cast<int>(lin.H.rows());
  const int P = static_cast<int>(lin.G.rows());

  // Variables (d, beta); minimize beta.
  Vector c = Vector::Zero(n + 1);
  c[n] = 1.0;
  const int m_ub = K + P + 2 * n;
  Matrix A_ub = Matrix::Zero(m_ub, n + 1);
  Vector b_ub = Vector::Zero(m_ub);
  A_ub.block(0, 0, K, n) = F;
  A_ub.col(n).head(K).setConstant(-1.0);
  if (P > 0) {
    A_ub.block(K, 0, P, n) = lin.G;
    b_ub.segment(K, P) = -lin.g0;
  }
  A_ub.block(K + P, 0, n, n).setIdentity();
  A_ub.block(K + P + n, 0, n, n) = -Matrix::Identity(n, n);
  b_ub.segment(K + P, 2 * n).setConstant(box_radius);
  Matrix A_eq = Matrix::Zero(M, n + 1);
  Vector b_eq = Vector::Zero(M);
  if (M > 0) {
    A_eq.block(0, 0, M, n) = lin.H;
    b_eq = -lin.h0;
  }

  const int cap = 50 * (n + K + M + P);
  lp::Solution sol = lp::solve(c, A_ub, b_ub, A_eq, b_eq, cap);
  if (sol.status == lp::Status::IterationLimit)
    throw NumericalFailure("lp_tangential: simplex pivot cap exceeded");
  if (sol.status != lp::Status::Optimal)
    throw NumericalFailure("lp_tangential: LP not solvable (normal step lost?)");

  TangentialSolution out;
  out.d = sol.v.head(n);
  out.omega = std::max(0.0, -sol.objective);
  out.chi = std::min(1.0, out.omega);
  out.y_obj = sol.mult_ub.head(K);
  out.y_ineq = P > 0 ? Vector(sol.mult_ub.segment(K, P)) : Vector(0);
  out.y_eq = sol.mult_eq;
  out.duality_gap = std::abs(sol.objective - sol.dual_objective);
  return out;
}

}  // namespace

TangentialSolution lp_tangential(const Matrix& F,
                                 const LinearizedSet& lin_shifted) {
  return tangential_impl(F, lin_shifted, 1.0);
}

std::pair<double, double> kkt_residual(const Matrix& F, const Matrix& H,
                                       const Matrix& G, const Vector& g_values,
                                       const TangentialSolution& sol) {
  const double total = sol.y_obj.sum();
  const Vector w = sol.y_obj / total;
  Vector stat = F.transpose() * w;
  if (H.rows() > 0) stat += H.transpose() * Vector(sol.y_eq / total);
  Vector y5s = sol.y_ineq.size() > 0 ? Vector(sol.y_ineq / total) : Vector(0);
  if (G.rows() > 0) stat += G.transpose() * y5s;
  const double compl_res =
      g_values.size() > 0 ? std::abs(g_values.dot(y5s)) : 0.0;
  return {stat.norm(), compl_res};
}

double initial_steplength(const Vector& n, const Vector& d, double delta,
                          const LinearizedSet& lin_shifted) {
  const double dn = d.norm();
  if (dn == 0.0) throw ZeroDirection("initial_steplength: d = 0");
  const Vector u = d / dn;

  // Trust-region cap: ||n + sigma u||_2 = delta.
  const double nu = n.dot(u);
  const double disc = nu * nu + delta * delta - n.squaredNorm();
  double sigma = disc <= 0.0 ? 0.0 : -nu + std::sqrt(disc);
  sigma = std::max(sigma, 0.0);

  // Polyhedral cap: row-wise ratio test on g0 + sigma G u <= 0.
  for (Eigen::Index i = 0; i < lin_shifted.G.rows(); ++i) {
    const double dir = lin_shifted.G.row(i).dot(u);
    if (dir > 1e-14) {
      const double cap = std::max(0.0, -lin_shifted.g0[i]) / dir;
      sigma = std::min(sigma, cap);
    }
  }
  return sigma;
}

double omega_norm_ratio_probe(const Matrix& F, const LinearizedSet& lin_shifted) {
  const int n = static_cast<int>(F.cols());
  const double omega_inf = tangential_impl(F, lin_shifted, 1.0).omega;
  if (omega_inf <= 1e-14) return 1.0;
  const double omega_low =
      tangential_impl(F, lin_shifted, 1.0 / std::sqrt(double(n))).omega;
  return omega_low / omega_inf;
}

}  // namespace mofilter
