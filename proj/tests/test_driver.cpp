#include <cmath>

#include <doctest.h>

#include "mofilter/driver.hpp"
#include "mofilter/problem.hpp"

using namespace mofilter;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

Problem scalar_problem(int n, std::function<double(const Vector&)> f,
                       const std::string& name) {
  Problem p;
  p.n = n;
  p.num_obj = 1;
  p.num_eq = 0;
  p.num_ineq = 0;
  p.name = name;
  p.eval_f = [f](const Vector& x) {
    Vector out(1);
    out[0] = f(x);
    return out;
  };
  p.eval_h = [](const Vector&) { return Vector(0); };
  p.eval_g = [](const Vector&) { return Vector(0); };
  return p;
}

}  // namespace

TEST_CASE("config validation names the violated invariant") {
  Config cfg;
  cfg.validate();  // defaults pass
  cfg.gamma0 = 0.8;
  cfg.gamma1 = 0.5;
  try {
    cfg.validate();
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("gamma") != std::string::npos);
  }
}

TEST_CASE("ratio_rho") {
  CHECK(ratio_rho(1.0, 0.5, 1.0, 0.0) == doctest::Approx(0.5));
  CHECK(ratio_rho(1.0, 1.1, 1.0, 0.0) == doctest::Approx(-0.1));
  CHECK(std::isnan(ratio_rho(1.0, 0.5, 1.0, 1.0)));
}

TEST_CASE("model_decrease_test") {
  Config cfg;  // kappa_theta = 1e-4, psi = 2
  CHECK(model_decrease_test(1.0, 1.0, 0.0, cfg));  // RHS = 0
  CHECK(model_decrease_test(1.0, 1.0 - 1e-5, 0.1, cfg));
  CHECK_FALSE(model_decrease_test(1.0, 1.0 - 1e-7, 0.1, cfg));
}

TEST_CASE("radius_update") {
  Config cfg;  // nu0 = 0.9, gamma1 = 0.5, gamma2 = 2, delta_max = 16
  CHECK(radius_update(0.5, 0.95, 0.5, cfg) == doctest::Approx(1.0));
  CHECK(radius_update(16.0, 0.95, 16.0, cfg) == doctest::Approx(16.0));
  CHECK(radius_update(0.5, 0.95, 0.1, cfg) == doctest::Approx(0.5));
  CHECK(radius_update(0.5, 0.1, 0.5, cfg) == doctest::Approx(0.25));
  CHECK(radius_update(0.5, std::numeric_limits<double>::quiet_NaN(), 0.5,
                      cfg) == doctest::Approx(0.25));
}

TEST_CASE("backtracking on the model scalarization") {
  const Problem p =
      scalar_problem(1, [](const Vector& x) { return x[0] * x[0]; }, "sq");
  EvalDatabase db;
  const SurrogateSet models = build_models(p, db, vec({1.0}), 0.5,
                                           ModelKind::Taylor2);
  Config cfg;  // a = 1e-4, b = 0.5

  // decrease m(1) - m(0) = 1 >= 1e-4 * 1 * 2 at j = 0
  const double sigma =
      backtracking_stepsize(models, vec({1.0}), vec({-1.0}), 1.0, 2.0, cfg);
  CHECK(sigma == doctest::Approx(1.0));

  // tiny omega: j = 0 still accepted for a genuine descent direction
  CHECK(backtracking_stepsize(models, vec({1.0}), vec({-1.0}), 1.0, 1e-12,
                              cfg) == doctest::Approx(1.0));

  CHECK(backtracking_stepsize(models, vec({1.0}), vec({-1.0}), 0.0, 2.0,
                              cfg) == 0.0);
}

TEST_CASE("criticality routine at a Pareto-critical point hits the cap") {
  const Problem p = two_parabolas();
  EvalDatabase db;
  const Vector x = vec({2.0, 0.0});
  Config cfg;
  cfg.model_kind = ModelKind::Taylor2;
  const SurrogateSet models = build_models(p, db, x, cfg.delta0, cfg.model_kind);
  const std::optional<Vector> n = qp_least_norm(models.linearize());
  REQUIRE(n.has_value());
  const TangentialSolution tsol =
      lp_tangential(models.f_jacobian(x + *n), models.linearize().shifted(*n));
  CHECK(tsol.chi == doctest::Approx(0.0));

  const CriticalityResult res =
      criticality_routine(p, db, x, cfg.delta0, models, n, tsol.chi, cfg);
  CHECK(res.hit_cap);
  CHECK(res.sub_iterations == cfg.crit_loop_cap);
  CHECK(res.delta <= 1e-15);
}

TEST_CASE("criticality routine exits by the guard away from criticality") {
  // Entry requires delta_bar > M * chi; give it a point with significant chi
  // but a huge delta_bar so a few shrinks satisfy the guard.
  const Problem p = two_parabolas();
  EvalDatabase db;
  const Vector x = vec({1.9, 0.5});
  Config cfg;
  cfg.model_kind = ModelKind::Taylor2;
  const SurrogateSet models = build_models(p, db, x, cfg.delta0, cfg.model_kind);
  const std::optional<Vector> n = qp_least_norm(models.linearize());
  REQUIRE(n.has_value());
  const TangentialSolution tsol =
      lp_tangential(models.f_jacobian(x + *n), models.linearize().shifted(*n));
  REQUIRE(tsol.chi > 0.0);
  const CriticalityResult res =
      criticality_routine(p, db, x, cfg.delta0, models, n, tsol.chi, cfg);
  CHECK_FALSE(res.hit_cap);
  CHECK(res.delta <= cfg.delta0);
  CHECK(res.delta > 0.0);
}

TEST_CASE("restoration escapes the degenerate origin of Ex. 1") {
  const Problem p = two_parabolas();
  EvalDatabase db;
  const Vector x = vec({0.0, 0.0});
  const EvalRecord rec = db.evaluate(p, x);
  FilterSet filter(1e-4);
  filter.add(rec.theta, rec.phi);
  Config cfg;
  cfg.model_kind = ModelKind::Taylor1;
  const auto out = restoration(p, db, x, filter, cfg.delta0, cfg);
  REQUIRE(out.has_value());
  const EvalRecord& moved = db.evaluate(p, x + out->r);
  CHECK(moved.theta < rec.theta);
  CHECK(out->n_step.has_value());
  CHECK(compatible(*out->n_step, out->delta_bar_next, cfg.compat()));
}

TEST_CASE("restoration with zero budget fails") {
  const Problem p = two_parabolas();
  EvalDatabase db;
  const Vector x = vec({0.0, 0.0});
  const EvalRecord rec = db.evaluate(p, x);
  FilterSet filter(1e-4);
  filter.add(rec.theta, rec.phi);
  Config cfg;
  cfg.restoration_budget = 0;
  CHECK_FALSE(restoration(p, db, x, filter, cfg.delta0, cfg).has_value());
}

TEST_CASE("restoration is a no-op on caller misuse") {
  const Problem p = two_parabolas();
  EvalDatabase db;
  const Vector x = vec({2.0, 0.0});  // feasible, normal step 0 compatible
  const EvalRecord rec = db.evaluate(p, x);
  FilterSet filter(1e-4);
  CHECK(rec.theta == 0.0);
  Config cfg;
  cfg.model_kind = ModelKind::Taylor1;
  const auto out = restoration(p, db, x, filter, cfg.delta0, cfg);
  REQUIRE(out.has_value());
  CHECK(out->r.norm() == doctest::Approx(0.0));
}

TEST_CASE("solve on a single-objective convex quadratic") {
  const Problem p = scalar_problem(
      2,
      [](const Vector& x) {
        const double a = x[0] - 0.7;
        const double b = x[1] + 0.3;
        return 2.0 * a * a + b * b;
      },
      "quad2");
  Config cfg;
  cfg.model_kind = ModelKind::Taylor2;
  cfg.tol_rel_x = 1e-6;
  cfg.tol_rel_f = 1e-6;
  const RunResult res = solve(p, vec({3.0, -2.0}), cfg);
  CHECK((res.status == RunStatus::Converged ||
         res.status == RunStatus::CritLoopStop));
  CHECK(res.iterations <= 30);
  CHECK((res.x_final - vec({0.7, -0.3})).norm() <= 1e-6);
}

TEST_CASE("solve stops at the iteration cap") {
  const Problem p = two_parabolas();
  Config cfg;
  cfg.model_kind = ModelKind::Taylor1;
  cfg.max_iter = 2;
  cfg.tol_rel_x = 0.0;
  cfg.tol_rel_f = 0.0;
  const RunResult res = solve(p, vec({-2.0, 0.5}), cfg);
  CHECK(res.status == RunStatus::MaxIter);
  CHECK(res.iterations == 2);
}

TEST_CASE("solve run invariants on an Ex. 1 trajectory") {
  const Problem p = two_parabolas();
  Config cfg;
  cfg.model_kind = ModelKind::Taylor2;
  const RunResult res = solve(p, vec({-2.0, 0.5}), cfg);

  long last_evals = 0;
  for (const IterationLog& row : res.log) {
    CHECK(row.delta > 0.0);
    CHECK(row.delta <= row.delta_bar + 1e-15);
    CHECK(row.delta_bar <= cfg.delta_max + 1e-12);
    CHECK(row.evals_cumulative >= last_evals);
    last_evals = row.evals_cumulative;
    if (row.kind == IterKind::Successful) {
      // trial containment: the accepted composite step fits the region
      CHECK(row.n_norm <= row.delta + 1e-9);
    }
  }
  for (const auto& [theta, phi] : res.filter_entries) CHECK(theta > 0.0);

  // Phi never increases across consecutive successful iterations.
  for (size_t i = 1; i < res.log.size(); ++i)
    if (res.log[i].kind == IterKind::Successful &&
        res.log[i - 1].kind == IterKind::Successful)
      CHECK(res.log[i].phi <= res.log[i - 1].phi + 1e-9);
}

TEST_CASE("weighted_sum_baseline") {
  const Problem p = two_parabolas();
  Config cfg;
  cfg.model_kind = ModelKind::Taylor2;

  CHECK_THROWS_AS(
      weighted_sum_baseline(p, vec({1.5, -0.5}), vec({-2.0, 0.5}), cfg),
      std::invalid_argument);

  // w = [1, 0] minimizes f1 subject to g: optimum [2, 1].
  const RunResult res =
      weighted_sum_baseline(p, vec({1.0, 0.0}), vec({-2.0, 0.5}), cfg);
  CHECK((res.x_final - vec({2.0, 1.0})).norm() <= 0.1);
  CHECK(res.record_final.theta <= 1e-8);
}
