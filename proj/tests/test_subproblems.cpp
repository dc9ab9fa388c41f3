#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <doctest.h>

#include "mofilter/errors.hpp"
#include "mofilter/subproblems.hpp"

using namespace mofilter;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c =
      r > 0 ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
  Matrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

LinearizedSet ineq_only(const Matrix& G, const Vector& g0, int n) {
  LinearizedSet lin;
  lin.H = Matrix(0, n);
  lin.h0 = Vector(0);
  lin.G = G;
  lin.g0 = g0;
  return lin;
}

}  // namespace

TEST_CASE("qp_least_norm hand examples") {
  // Linearization of 1 - x1^2 - x2^2 <= 0 at x = [0.5, 0]: 0.75 - n1 <= 0.
  auto n = qp_least_norm(ineq_only(mat({{-1, 0}}), vec({0.75}), 2));
  REQUIRE(n.has_value());
  CHECK((*n)[0] == doctest::Approx(0.75));
  CHECK((*n)[1] == doctest::Approx(0.0).epsilon(1e-9));

  // Degenerate linearization at the origin: 1 + 0*n <= 0 is empty.
  CHECK_FALSE(qp_least_norm(ineq_only(mat({{0, 0}}), vec({1.0}), 2)));

  // Inactive constraints: the origin is the least-norm point.
  auto z = qp_least_norm(ineq_only(mat({{1, 1}}), vec({-0.5}), 2));
  REQUIRE(z.has_value());
  CHECK(z->norm() == doctest::Approx(0.0));
}

TEST_CASE("qp_least_norm optimality on random polyhedra") {
  std::mt19937 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int t = 0; t < 100; ++t) {
    const int n = dim(rng);
    const int p = std::uniform_int_distribution<int>(1, 4)(rng);
    const int m = std::uniform_int_distribution<int>(0, std::max(0, n - 1))(rng);
    LinearizedSet lin;
    lin.G = Matrix(p, n);
    lin.g0 = Vector(p);
    Vector z(n);
    for (int i = 0; i < n; ++i) z[i] = normal(rng);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < n; ++j) lin.G(i, j) = normal(rng);
      lin.g0[i] = -lin.G.row(i).dot(z) - std::abs(normal(rng));
    }
    lin.H = Matrix(m, n);
    lin.h0 = Vector(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) lin.H(i, j) = normal(rng);
      lin.h0[i] = -lin.H.row(i).dot(z);
    }
    const auto sol = qp_least_norm(lin);
    REQUIRE(sol.has_value());
    // feasibility
    if (m > 0) CHECK((lin.h0 + lin.H * *sol).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((lin.g0 + lin.G * *sol).maxCoeff() <= 1e-8);
    // optimality: no better point in 200 random feasible probes
    for (int probe = 0; probe < 200; ++probe) {
      Vector q(n);
      for (int i = 0; i < n; ++i) q[i] = normal(rng);
      Vector cand = *sol + 0.5 * q;
      // project onto the equality subspace
      if (m > 0) {
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(lin.H);
        cand -= cod.solve(lin.h0 + lin.H * cand);
      }
      const bool feas = (lin.g0 + lin.G * cand).maxCoeff() <= 0.0 &&
                        (m == 0 ||
                         (lin.h0 + lin.H * cand).cwiseAbs().maxCoeff() <= 1e-9);
      if (feas) CHECK(cand.norm() >= sol->norm() - 1e-7);
    }
  }
}

TEST_CASE("compatible") {
  CompatibilityParams p;  // c_delta = 0.7, c_mu = 100, mu = 0.01
  CHECK(compatible(Vector::Zero(2), 0.5, p));
  CHECK_FALSE(compatible(vec({0.75, 0.0}), 0.5, p));
  CHECK(compatible(vec({0.3, 0.0}), 0.5, p));
}

TEST_CASE("lp_tangential hand examples") {
  // Ex. 1 at x_n = [2, 1] with exact gradients; constraint inactive.
  {
    const Matrix F = mat({{0, 0}, {0, 4}});
    const auto sol = lp_tangential(F, ineq_only(mat({{-4, -2}}), vec({-4}), 2));
    CHECK(sol.omega == doctest::Approx(0.0));
    CHECK(sol.chi == doctest::Approx(0.0));
  }
  // Single objective with gradient [1, 0] and no constraints.
  {
    const auto sol =
        lp_tangential(mat({{1, 0}}), ineq_only(Matrix(0, 2), Vector(0), 2));
    CHECK(sol.omega == doctest::Approx(1.0));
    CHECK(sol.chi == doctest::Approx(1.0));
    CHECK(sol.d[0] == doctest::Approx(-1.0));
  }
  // Zero gradient.
  {
    const auto sol =
        lp_tangential(mat({{0, 0}}), ineq_only(Matrix(0, 2), Vector(0), 2));
    CHECK(sol.omega == doctest::Approx(0.0));
    CHECK(sol.chi == doctest::Approx(0.0));
  }
}

TEST_CASE("lp_tangential duals on random instances") {
  std::mt19937 rng(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    const int K = std::uniform_int_distribution<int>(1, 4)(rng);
    const int p = std::uniform_int_distribution<int>(0, 5)(rng);
    Matrix F(K, n);
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < n; ++j) F(i, j) = normal(rng);
    LinearizedSet lin;
    lin.H = Matrix(0, n);
    lin.h0 = Vector(0);
    lin.G = Matrix(p, n);
    lin.g0 = Vector(p);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < n; ++j) lin.G(i, j) = normal(rng);
      lin.g0[i] = -0.05 - std::abs(normal(rng));
    }
    const auto sol = lp_tangential(F, lin);
    CHECK(sol.omega >= 0.0);
    CHECK(sol.chi == doctest::Approx(std::min(1.0, sol.omega)));
    CHECK(std::abs(sol.duality_gap) <= 1e-8);
    CHECK(sol.y_obj.sum() >= 1.0 - 1e-9);
    CHECK(sol.y_obj.minCoeff() >= -1e-12);
    if (p > 0) CHECK(sol.y_ineq.minCoeff() >= -1e-12);
    CHECK(sol.d.cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
    if (p > 0) CHECK((lin.g0 + lin.G * sol.d).maxCoeff() <= 1e-9);
  }
}

TEST_CASE("kkt_residual certificates") {
  // Opposed gradients, no constraints: stationary with w = [0.5, 0.5].
  {
    const Matrix F = mat({{1, 0}, {-1, 0}});
    const LinearizedSet lin = ineq_only(Matrix(0, 2), Vector(0), 2);
    const auto sol = lp_tangential(F, lin);
    const auto [stat, compl_res] =
        kkt_residual(F, lin.H, lin.G, Vector(0), sol);
    CHECK(stat <= 1e-8);
    CHECK(compl_res <= 1e-12);
  }
  // Ex. 1 at [2, 0]: segment interior, constraint inactive.
  {
    const Matrix F = mat({{0, -2}, {0, 2}});
    const LinearizedSet lin = ineq_only(mat({{-4, 0}}), vec({-3}), 2);
    const auto sol = lp_tangential(F, lin);
    CHECK(sol.omega == doctest::Approx(0.0));
    const auto [stat, compl_res] =
        kkt_residual(F, lin.H, lin.G, vec({-3}), sol);
    CHECK(stat <= 1e-8);
    CHECK(compl_res <= 1e-8);
  }
  // Ex. 1 at [0, 2]: omega bounded away from zero, residual stays positive.
  {
    // grad f1 = [-4, 2], grad f2 = [-4, 6]; g inactive (g0 = -3).
    const Matrix F = mat({{-4, 2}, {-4, 6}});
    const LinearizedSet lin = ineq_only(mat({{0, -4}}), vec({-3}), 2);
    const auto sol = lp_tangential(F, lin);
    CHECK(sol.omega > 0.5);
    const auto [stat, compl_res] =
        kkt_residual(F, lin.H, lin.G, vec({-3}), sol);
    (void)compl_res;
    CHECK(stat > 1e-3);
  }
}

TEST_CASE("initial_steplength") {
  const Vector n0 = Vector::Zero(2);
  // Ball cap only.
  CHECK(initial_steplength(n0, vec({1, 0}), 1.0,
                           ineq_only(Matrix(0, 2), Vector(0), 2)) ==
        doctest::Approx(1.0));
  // Single-row ratio test: -0.5 + d1 <= 0 caps at 0.5.
  CHECK(initial_steplength(n0, vec({1, 0}), 1.0,
                           ineq_only(mat({{1, 0}}), vec({-0.5}), 2)) ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS(initial_steplength(n0, Vector::Zero(2), 1.0,
                                     ineq_only(Matrix(0, 2), Vector(0), 2)),
                  ZeroDirection);
}

TEST_CASE("initial_steplength caps hold after the step") {
  std::mt19937 rng(29);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const int n = std::uniform_int_distribution<int>(1, 5)(rng);
    const int p = std::uniform_int_distribution<int>(0, 4)(rng);
    Vector nstep(n), d(n);
    for (int i = 0; i < n; ++i) {
      nstep[i] = 0.2 * normal(rng);
      d[i] = normal(rng);
    }
    if (d.norm() < 1e-12) continue;
    const double delta = nstep.norm() + 0.1 + std::abs(normal(rng));
    LinearizedSet lin;
    lin.H = Matrix(0, n);
    lin.h0 = Vector(0);
    lin.G = Matrix(p, n);
    lin.g0 = Vector(p);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < n; ++j) lin.G(i, j) = normal(rng);
      lin.g0[i] = -std::abs(normal(rng)) - 1e-3;
    }
    const double sigma = initial_steplength(nstep, d, delta, lin);
    // the textbook lower bound presumes the full step d stays in the set
    const bool d_feasible = p == 0 || (lin.g0 + lin.G * d).maxCoeff() <= 0.0;
    if (d_feasible)
      CHECK(sigma >= std::min(delta - nstep.norm(), d.norm()) - 1e-10);
    const Vector s = (sigma / d.norm()) * d;
    CHECK((nstep + s).norm() <= delta + 1e-10);
    if (p > 0) CHECK((lin.g0 + lin.G * s).maxCoeff() <= 1e-10);
  }
}

TEST_CASE("omega_norm_ratio_probe") {
  // K=1, grad = [1, 1]: omega_inf = 2, omega_2 = sqrt(2).
  const double r = omega_norm_ratio_probe(
      mat({{1, 1}}), ineq_only(Matrix(0, 2), Vector(0), 2));
  CHECK(r == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));

  CHECK(omega_norm_ratio_probe(mat({{0, 0}}),
                               ineq_only(Matrix(0, 2), Vector(0), 2)) ==
        doctest::Approx(1.0));
}
