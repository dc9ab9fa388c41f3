#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mofilter/filter.hpp"
#include "mofilter/problem.hpp"
#include "mofilter/subproblems.hpp"
#include "mofilter/surrogate.hpp"

namespace mofilter {

struct Config {
  double delta0 = 0.5;
  double delta_max = 16.0;
  double gamma0 = 0.1;
  double gamma1 = 0.5;
  double gamma2 = 2.0;
  double nu0 = 0.9;
  double nu1 = 0.01;
  double eps_chi = 0.1;
  double eps_theta = 0.1;
  double kappa_theta = 1e-4;
  double psi = 2.0;
  double b_crit = 1000.0;
  double m_crit = 3000.0;
  double alpha_crit = 0.5;
  double c_delta = 0.7;
  double c_mu = 100.0;
  double mu = 0.01;
  double gamma_theta = 1e-4;
  double a_armijo = 1e-4;
  double b_armijo = 0.5;
  int max_backtracks = 50;
  int max_iter = 100;
  int crit_loop_cap = 60;
  double tol_rel_x = 1e-8;
  double tol_rel_f = 1e-8;
  bool stop_on_crit_loop = false;
  ModelKind model_kind = ModelKind::RbfCubic;
  long restoration_budget = 2000;

  CompatibilityParams compat() const { return {c_delta, c_mu, mu}; }

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;
};

enum class IterKind {
  Successful,
  ThetaIteration,
  Inacceptable,
  Restoration,
  CritLoop
};
std::string to_string(IterKind kind);

struct IterationLog {
  int k = 0;
  IterKind kind = IterKind::Successful;
  Vector x;
  double theta = 0.0;
  double phi = 0.0;
  double chi = std::numeric_limits<double>::quiet_NaN();
  double delta_bar = 0.0;
  double delta = 0.0;
  double rho = std::numeric_limits<double>::quiet_NaN();
  double n_norm = 0.0;
  double sigma = 0.0;
  long evals_cumulative = 0;
};

enum class RunStatus { Converged, MaxIter, RestorationFailed, CritLoopStop };
std::string to_string(RunStatus status);

struct RunResult {
  RunStatus status = RunStatus::MaxIter;
  Vector x_final;
  EvalRecord record_final;
  double kkt_stationarity = std::numeric_limits<double>::quiet_NaN();
  double kkt_complementarity = std::numeric_limits<double>::quiet_NaN();
  double chi_final = std::numeric_limits<double>::quiet_NaN();
  long evaluator_calls = 0;
  int iterations = 0;
  int restoration_count = 0;
  std::vector<IterationLog> log;
  std::vector<std::pair<double, double>> filter_entries;
};

/// Ratio of true to model scalarized decrease.  NaN flags a (near) zero
/// model decrease; the caller treats the iteration as unsuccessful.
double ratio_rho(double phi_k, double phi_trial, double phi_model_k,
                 double phi_model_trial);

/// Model decrease test: Phi_m(x_k) - Phi_m(x+) >= kappa_theta * theta_k^psi.
bool model_decrease_test(double phi_model_k, double phi_model_trial,
                         double theta_k, const Config& cfg);

/// Next preliminary radius from the acceptance ratio.
double radius_update(double delta, double rho, double step_norm,
                     const Config& cfg);

/// Armijo backtracking on the model scalarization along d from x_n.
/// Returns sigma (the factor multiplying d itself); 0 when the backtracking
/// budget is exhausted.
double backtracking_stepsize(const SurrogateSet& models, const Vector& x_n,
                             const Vector& d, double sigma_bar, double omega,
                             const Config& cfg);

struct CriticalityResult {
  double delta = 0.0;
  double chi = 0.0;
  std::optional<Vector> n_step;
  SurrogateSet models;
  TangentialSolution tangential;
  int sub_iterations = 0;
  bool hit_cap = false;
};

/// Radius-shrinking loop of the criticality test.  Entered only when the
/// step-4 guard held; updates models, normal step, chi and the final radius.
CriticalityResult criticality_routine(const Problem& problem, EvalDatabase& db,
                                      const Vector& x, double delta_bar,
                                      const SurrogateSet& models,
                                      const std::optional<Vector>& n_step,
                                      double chi_bar, const Config& cfg);

struct RestorationOutcome {
  Vector r;
  double delta_bar_next = 0.0;
  SurrogateSet models;
  std::optional<Vector> n_step;
};

/// Compass search on the true infeasibility theta.  The caller must have
/// added (theta_k, phi_k) to the filter already.  nullopt = budget exhausted.
std::optional<RestorationOutcome> restoration(const Problem& problem,
                                              EvalDatabase& db, const Vector& x,
                                              const FilterSet& filter,
                                              double delta_bar,
                                              const Config& cfg);

/// The main filter trust-region loop.
RunResult solve(const Problem& problem, const Vector& x0, const Config& cfg);

/// Runs solve on the K=1 problem with objective w'f and the original
/// constraints.  Weights must be nonnegative and sum to 1.
RunResult weighted_sum_baseline(const Problem& problem, const Vector& weights,
                                const Vector& x0, const Config& cfg);

}  // namespace mofilter
