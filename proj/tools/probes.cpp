#include "probes.hpp"

#include <cmath>
#include <random>

#include "mofilter/errors.hpp"
#include "mofilter/filter.hpp"
#include "mofilter/problem.hpp"
#include "mofilter/subproblems.hpp"
#include "mofilter/surrogate.hpp"

namespace mofilter::probes {

namespace {

Matrix random_matrix(std::mt19937& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

/// Random tangential-LP instance whose shifted polyhedron contains the
/// origin: equalities tight, inequalities strictly slack.
std::pair<Matrix, LinearizedSet> random_instance(std::mt19937& rng,
                                                 bool with_equalities) {
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_int_distribution<int> objs(1, 4);
  std::uniform_real_distribution<double> slack(0.05, 1.0);
  const int n = dim(rng);
  const int K = objs(rng);
  const int M =
      with_equalities ? std::uniform_int_distribution<int>(0, 2)(rng) : 0;
  const int P = std::uniform_int_distribution<int>(0, 6 - M)(rng);
  LinearizedSet lin;
  lin.H = random_matrix(rng, M, n);
  lin.h0 = Vector::Zero(M);
  lin.G = random_matrix(rng, P, n);
  lin.g0 = Vector(P);
  for (int i = 0; i < P; ++i) lin.g0[i] = -slack(rng);
  return {random_matrix(rng, K, n), lin};
}

}  // namespace

ProbeReport duality(unsigned seed, int count) {
  std::mt19937 rng(seed);
  bool solved = true;
  bool gap_ok = true;
  bool sum_ok = true;
  bool sign_ok = true;
  bool stat_ok = true;
  for (int t = 0; t < count; ++t) {
    const auto [F, lin] = random_instance(rng, true);
    TangentialSolution sol;
    try {
      sol = lp_tangential(F, lin);
    } catch (const NumericalFailure&) {
      solved = false;
      continue;
    }
    gap_ok = gap_ok && std::abs(sol.duality_gap) <= 1e-8;
    sum_ok = sum_ok && sol.y_obj.sum() >= 1.0 - 1e-9;
    sign_ok = sign_ok &&
              (sol.y_ineq.size() == 0 || sol.y_ineq.minCoeff() >= -1e-12) &&
              sol.y_obj.minCoeff() >= -1e-12;
    if (sol.omega <= 1e-10) {
      const auto [stat, compl_res] =
          kkt_residual(F, lin.H, lin.G, lin.g0, sol);
      (void)compl_res;
      stat_ok = stat_ok && stat <= 1e-8;
    }
  }
  ProbeReport rep;
  rep.checks = {{"all random LPs solved", solved},
                {"strong-duality gap <= 1e-8", gap_ok},
                {"sum(y_obj) >= 1", sum_ok},
                {"multiplier signs", sign_ok},
                {"stationarity <= 1e-8 when omega <= 1e-10", stat_ok}};
  return rep;
}

ProbeReport slopes(unsigned seed) {
  // f1 and g of the two-parabolas problem, packaged as a 2-objective
  // unconstrained problem so the probe can address both by index.
  const Problem ex1 = two_parabolas();
  Problem probe;
  probe.n = 2;
  probe.num_obj = 2;
  probe.num_eq = 0;
  probe.num_ineq = 0;
  probe.name = "two_parabolas_f1_g";
  probe.eval_f = [ex1](const Vector& x) {
    Vector out(2);
    out[0] = ex1.eval_f(x)[0];
    out[1] = ex1.eval_g(x)[0];
    return out;
  };
  probe.eval_h = [](const Vector&) { return Vector(0); };
  probe.eval_g = [](const Vector&) { return Vector(0); };

  const Vector x = (Vector(2) << -2.0, 0.5).finished();
  const std::vector<double> radii = {0.5, 0.25, 0.125, 0.0625};
  ProbeReport rep;
  for (const ModelKind kind : {ModelKind::RbfCubic, ModelKind::Taylor1}) {
    for (int idx = 0; idx < 2; ++idx) {
      const double slope = error_slope_probe(probe, kind, x, radii, idx, seed);
      const std::string label = to_string(kind) + " slope(" +
                                (idx == 0 ? "f1" : "g") + ") >= 1.8";
      rep.checks.emplace_back(label, slope >= 1.8);
    }
  }
  return rep;
}

ProbeReport filter_suite(unsigned seed, int adds) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> log_theta(-8.0, 2.0);
  std::uniform_real_distribution<double> phi_dist(-5.0, 5.0);
  const double gamma = 1e-4;
  FilterSet filter(gamma);
  bool no_dominated = true;
  bool self_rejected = true;
  for (int t = 0; t < adds; ++t) {
    const double theta = std::exp(log_theta(rng));
    const double phi = phi_dist(rng);
    filter.add(theta, phi);
    const auto& e = filter.entries();
    for (size_t i = 0; i < e.size() && no_dominated; ++i)
      for (size_t j = 0; j < e.size(); ++j) {
        if (i == j) continue;
        const bool dominates =
            e[j].first >= e[i].first &&
            e[j].second - gamma * e[j].first >=
                e[i].second - gamma * e[i].first;
        if (dominates) {
          no_dominated = false;
          break;
        }
      }
    self_rejected = self_rejected && !filter.acceptable(theta, phi);
  }
  ProbeReport rep;
  rep.checks = {{"no envelope-dominated pair survives an add", no_dominated},
                {"acceptable(self) is false after add", self_rejected}};
  return rep;
}

ProbeReport norms(unsigned seed, int count) {
  std::mt19937 rng(seed);
  bool in_band = true;
  for (int t = 0; t < count; ++t) {
    const auto [F, lin] = random_instance(rng, false);
    double ratio;
    try {
      ratio = omega_norm_ratio_probe(F, lin);
    } catch (const NumericalFailure&) {
      in_band = false;
      continue;
    }
    const double lo = 1.0 / std::sqrt(static_cast<double>(F.cols()));
    in_band = in_band && ratio >= lo - 1e-9 && ratio <= 1.0 + 1e-9;
  }
  ProbeReport rep;
  rep.checks = {{"omega_2 / omega_inf in [1/sqrt(n), 1]", in_band}};
  return rep;
}

}  // namespace mofilter::probes
