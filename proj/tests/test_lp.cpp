#include <random>

#include <doctest.h>

#include "mofilter/lp.hpp"

using namespace mofilter;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

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

}  // namespace

TEST_CASE("box LP with known solution") {
  // min -x - y  s.t.  x <= 1, y <= 1, -x <= 0, -y <= 0
  const Matrix A = mat({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  const Vector b = vec({1, 1, 0, 0});
  const Vector c = vec({-1, -1});
  const lp::Solution sol = lp::solve(c, A, b, Matrix(0, 2), Vector(0));
  REQUIRE(sol.status == lp::Status::Optimal);
  CHECK(sol.v[0] == doctest::Approx(1.0));
  CHECK(sol.v[1] == doctest::Approx(1.0));
  CHECK(sol.objective == doctest::Approx(-2.0));
  CHECK(std::abs(sol.objective - sol.dual_objective) <= 1e-8);
  CHECK(sol.mult_ub.minCoeff() >= -1e-12);
  // Lagrangian stationarity: c + A' lambda = 0
  CHECK((c + A.transpose() * sol.mult_ub).norm() <= 1e-8);
}

TEST_CASE("LP with an equality row") {
  // min x  s.t.  x + y = 1,  y <= 0.8
  const Matrix A = mat({{0, 1}});
  const Vector b = vec({0.8});
  const Matrix E = mat({{1, 1}});
  const Vector e = vec({1});
  const lp::Solution sol = lp::solve(vec({1, 0}), A, b, E, e);
  REQUIRE(sol.status == lp::Status::Optimal);
  CHECK(sol.v[0] == doctest::Approx(0.2));
  CHECK(sol.v[1] == doctest::Approx(0.8));
  CHECK(std::abs(sol.objective - sol.dual_objective) <= 1e-8);
  CHECK((vec({1, 0}) + A.transpose() * sol.mult_ub +
         E.transpose() * sol.mult_eq)
            .norm() <= 1e-8);
}

TEST_CASE("infeasible LP detected") {
  // x <= -1 and -x <= 0 cannot both hold.
  const lp::Solution sol = lp::solve(vec({1}), mat({{1}, {-1}}),
                                     vec({-1, 0}), Matrix(0, 1), Vector(0));
  CHECK(sol.status == lp::Status::Infeasible);
}

TEST_CASE("unbounded LP detected") {
  const lp::Solution sol =
      lp::solve(vec({-1}), mat({{-1}}), vec({0}), Matrix(0, 1), Vector(0));
  CHECK(sol.status == lp::Status::Unbounded);
}

TEST_CASE("strong duality and stationarity on random bounded LPs") {
  std::mt19937 rng(41);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_int_distribution<int> extra_rows(0, 4);
  for (int t = 0; t < 100; ++t) {
    const int n = dim(rng);
    const int m = extra_rows(rng);
    // Always include the box |v_i| <= 1 so the LP is bounded, plus random
    // rows passing through a known interior point z.
    Vector z(n);
    for (int i = 0; i < n; ++i) z[i] = 0.5 * normal(rng);
    z = z.cwiseMax(-0.9).cwiseMin(0.9);
    Matrix A(2 * n + m, n);
    Vector b(2 * n + m);
    A.topRows(n) = Matrix::Identity(n, n);
    A.middleRows(n, n) = -Matrix::Identity(n, n);
    b.head(2 * n).setOnes();
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) A(2 * n + i, j) = normal(rng);
      b[2 * n + i] = A.row(2 * n + i).dot(z) + 0.1 + std::abs(normal(rng));
    }
    Vector c(n);
    for (int i = 0; i < n; ++i) c[i] = normal(rng);

    const lp::Solution sol = lp::solve(c, A, b, Matrix(0, n), Vector(0));
    REQUIRE(sol.status == lp::Status::Optimal);
    CHECK(std::abs(sol.objective - sol.dual_objective) <= 1e-8);
    CHECK(sol.mult_ub.minCoeff() >= -1e-12);
    CHECK((c + A.transpose() * sol.mult_ub).norm() <= 1e-8);
    CHECK((A * sol.v - b).maxCoeff() <= 1e-9);
    // complementary slackness
    CHECK(std::abs(sol.mult_ub.dot(A * sol.v - b)) <= 1e-8);
  }
}
