#include "mofilter/driver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mofilter/errors.hpp"

namespace mofilter {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("config invariant: ") + what);
}

}  // namespace

void Config::validate() const {
  require(delta0 > 0.0 && delta0 <= delta_max, "0 < delta0 <= delta_max");
  require(std::isfinite(delta_max), "delta_max < inf");
  require(gamma0 > 0.0 && gamma0 <= gamma1 && gamma1 < 1.0 && gamma2 >= 1.0,
          "0 < gamma0 <= gamma1 < 1 <= gamma2");
  require(nu1 > 0.0 && nu1 <= nu0 && nu0 < 1.0, "0 < nu1 <= nu0 < 1");
  require(eps_chi > 0.0 && eps_chi < 1.0, "0 < eps_chi < 1");
  require(eps_theta >= 0.0, "eps_theta >= 0");
  require(kappa_theta > 0.0 && kappa_theta < 1.0, "kappa_theta in (0,1)");
  require(psi > 1.0 / (1.0 + mu), "psi > 1/(1+mu)");
  require(b_crit > 0.0 && b_crit < m_crit, "0 < B_crit < M_crit");
  require(alpha_crit > 0.0 && alpha_crit < 1.0, "alpha_crit in (0,1)");
  require(c_delta > 0.0 && c_delta <= 1.0, "c_delta in (0,1]");
  require(c_mu > 0.0, "c_mu > 0");
  require(mu > 0.0 && mu < 1.0, "mu in (0,1)");
  require(gamma_theta > 0.0 && gamma_theta < 1.0, "gamma_theta in (0,1)");
  require(a_armijo > 0.0 && a_armijo < 1.0, "a_armijo in (0,1)");
  require(b_armijo > 0.0 && b_armijo < 1.0, "b_armijo in (0,1)");
  require(max_iter >= 1, "max_iter >= 1");
  require(tol_rel_x >= 0.0 && tol_rel_f >= 0.0, "tolerances >= 0");
  require(restoration_budget >= 0, "restoration_budget >= 0");
}

std::string to_string(IterKind kind) {
  switch (kind) {
    case IterKind::Successful: return "successful";
    case IterKind::ThetaIteration: return "theta-iteration";
    case IterKind::Inacceptable: return "inacceptable";
    case IterKind::Restoration: return "restoration";
    case IterKind::CritLoop: return "critloop";
  }
  return "?";
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::MaxIter: return "MaxIter";
    case RunStatus::RestorationFailed: return "RestorationFailed";
    case RunStatus::CritLoopStop: return "CritLoopStop";
  }
  return "?";
}

double ratio_rho(double phi_k, double phi_trial, double phi_model_k,
                 double phi_model_trial) {
  const double denom = phi_model_k - phi_model_trial;
  if (std::abs(denom) < 1e-14)
    return std::numeric_limits<double>::quiet_NaN();
  return (phi_k - phi_trial) / denom;
}

bool model_decrease_test(double phi_model_k, double phi_model_trial,
                         double theta_k, const Config& cfg) {
  return phi_model_k - phi_model_trial >=
         cfg.kappa_theta * std::pow(theta_k, cfg.psi);
}

double radius_update(double delta, double rho, double step_norm,
                     const Config& cfg) {
  if (!(rho >= cfg.nu0)) return cfg.gamma1 * delta;  // NaN counts as shrink
  // Grow only when the step pressed against the trust region; enlarging the
  // region after an interior step degrades the rebuilt models for nothing.
  if (step_norm < 0.8 * delta) return std::min(delta, cfg.delta_max);
  return std::min(cfg.gamma2 * delta, cfg.delta_max);
}

double backtracking_stepsize(const SurrogateSet& models, const Vector& x_n,
                             const Vector& d, double sigma_bar, double omega,
                             const Config& cfg) {
  const double dn = d.norm();
  if (sigma_bar <= 0.0 || dn == 0.0) return 0.0;
  const double phi_n = models.phi_model(x_n);
  double scale = 1.0;
  for (int j = 0; j <= cfg.max_backtracks; ++j, scale *= cfg.b_armijo) {
    const double sigma = scale * sigma_bar / dn;
    const double decrease = phi_n - models.phi_model(x_n + sigma * d);
    if (decrease >= cfg.a_armijo * (sigma_bar * scale / dn) * omega)
      return sigma;
  }
  return 0.0;
}

CriticalityResult criticality_routine(const Problem& problem, EvalDatabase& db,
                                      const Vector& x, double delta_bar,
                                      const SurrogateSet& models,
                                      const std::optional<Vector>& n_step,
                                      double chi_bar, const Config& cfg) {
  CriticalityResult res;
  res.models = models;
  res.n_step = n_step;
  res.chi = chi_bar;
  double delta_j = delta_bar;

  while (delta_j > cfg.m_crit * res.chi) {
    if (res.sub_iterations >= cfg.crit_loop_cap) {
      res.hit_cap = true;
      break;
    }
    const double delta_plus = cfg.alpha_crit * delta_j;
    SurrogateSet trial =
        make_fully_linear(res.models, problem, db, x, delta_plus);
    const LinearizedSet lin = trial.linearize();
    const std::optional<Vector> n_plus = qp_least_norm(lin);
    if (!n_plus || !compatible(*n_plus, delta_plus, cfg.compat())) break;
    ++res.sub_iterations;
    delta_j = delta_plus;
    res.models = std::move(trial);
    res.n_step = n_plus;
    const LinearizedSet lin_shifted = lin.shifted(*n_plus);
    const Vector x_n = x + *n_plus;
    res.tangential = lp_tangential(res.models.f_jacobian(x_n), lin_shifted);
    res.chi = res.tangential.chi;
  }

  // Tangential solution for the state actually kept (covers j = 0 and the
  // BREAK path, where the last LP belonged to a discarded model build).
  {
    const LinearizedSet lin = res.models.linearize();
    if (res.n_step) {
      const LinearizedSet lin_shifted = lin.shifted(*res.n_step);
      const Vector x_n = x + *res.n_step;
      res.tangential = lp_tangential(res.models.f_jacobian(x_n), lin_shifted);
      res.chi = res.tangential.chi;
    }
  }

  res.delta = std::min(std::max(delta_j, cfg.b_crit * res.chi), delta_bar);
  return res;
}

namespace {

// Exit test of the restoration step: a compatible normal step must exist at
// (y, delta_bar_next) and y must be acceptable for the filter.
std::optional<RestorationOutcome> restoration_exit(
    const Problem& problem, EvalDatabase& db, const Vector& x, const Vector& y,
    const FilterSet& filter, double theta_y, double phi_y, double delta_bar,
    const Config& cfg) {
  if (!filter.acceptable(theta_y, phi_y)) return std::nullopt;
  for (const double dbn : {delta_bar, cfg.gamma2 * delta_bar}) {
    try {
      SurrogateSet models = build_models(problem, db, y, dbn, cfg.model_kind);
      const std::optional<Vector> n = qp_least_norm(models.linearize());
      if (n && compatible(*n, dbn, cfg.compat())) {
        RestorationOutcome out;
        out.r = y - x;
        out.delta_bar_next = dbn;
        out.models = std::move(models);
        out.n_step = n;
        return out;
      }
    } catch (const SingularInterpolation&) {
      // degenerate geometry at this candidate; try the other radius
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<RestorationOutcome> restoration(const Problem& problem,
                                              EvalDatabase& db, const Vector& x,
                                              const FilterSet& filter,
                                              double delta_bar,
                                              const Config& cfg) {
  const long start_calls = db.evaluator_calls();
  const auto budget_left = [&] {
    return db.evaluator_calls() - start_calls < cfg.restoration_budget;
  };
  if (cfg.restoration_budget == 0) return std::nullopt;

  const EvalRecord rec0 = db.evaluate(problem, x);

  // Caller-misuse guard: if x itself already passes the exit test against
  // the filter without its own freshly added pair, return r = 0.
  {
    FilterSet minus_self(filter.gamma_theta());
    for (const auto& [t, p] : filter.entries())
      if (!(t == rec0.theta && p == rec0.phi)) minus_self.add(t, p);
    if (auto out = restoration_exit(problem, db, x, x, minus_self, rec0.theta,
                                    rec0.phi, delta_bar, cfg))
      return out;
  }

  Vector y = x;
  double theta_best = rec0.theta;
  double step = delta_bar;
  const int n = problem.n;

  while (budget_left() && step > 1e-14 * std::max(1.0, delta_bar)) {
    Vector best_point = y;
    double best_theta = theta_best;
    for (int i = 0; i < 2 * n; ++i) {
      if (!budget_left()) return std::nullopt;
      Vector cand = y;
      cand[i / 2] += (i % 2 == 0 ? step : -step);
      const EvalRecord& rec = db.evaluate(problem, cand);
      if (rec.theta < best_theta) {
        best_theta = rec.theta;
        best_point = cand;
      }
    }
    if (best_theta < theta_best) {
      y = best_point;
      theta_best = best_theta;
      step *= 2.0;
      const EvalRecord& rec = db.evaluate(problem, y);
      if (auto out = restoration_exit(problem, db, x, y, filter, rec.theta,
                                      rec.phi, delta_bar, cfg))
        return out;
    } else {
      step *= 0.5;
    }
  }
  return std::nullopt;
}

namespace {

struct TrState {
  int k = 0;
  Vector x;
  double delta_bar = 0.0;
  double delta = 0.0;
  std::optional<Vector> n_step;
  double chi_bar = std::numeric_limits<double>::quiet_NaN();
  double chi = std::numeric_limits<double>::quiet_NaN();
  SurrogateSet models;
  FilterSet filter;
  EvalRecord record;
};

}  // namespace

RunResult solve(const Problem& problem, const Vector& x0, const Config& cfg) {
  cfg.validate();
  if (x0.size() != problem.n || !x0.allFinite())
    throw std::invalid_argument("solve: bad starting point");

  EvalDatabase db;
  RunResult result;
  TrState st;
  st.filter = FilterSet(cfg.gamma_theta);
  st.x = x0;
  st.delta_bar = cfg.delta0;
  st.record = db.evaluate(problem, x0);
  st.models = build_models(problem, db, st.x, st.delta_bar, cfg.model_kind);
  st.n_step = std::nullopt;

  TangentialSolution last_tangential;
  bool have_tangential = false;
  result.status = RunStatus::MaxIter;

  for (st.k = 0; st.k < cfg.max_iter; ++st.k) {
    IterationLog row;
    row.k = st.k;
    row.x = st.x;
    row.theta = st.record.theta;
    row.phi = st.record.phi;
    row.delta_bar = st.delta_bar;

    // Step 1: compatibility test.
    LinearizedSet lin = st.models.linearize();
    if (!st.n_step) st.n_step = qp_least_norm(lin);
    const bool compat =
        st.n_step && compatible(*st.n_step, st.delta_bar, cfg.compat());

    if (!compat) {
      // Step 2: restoration.
      st.filter.add(st.record.theta, st.record.phi);
      ++result.restoration_count;
      st.delta = st.delta_bar;
      row.kind = IterKind::Restoration;
      row.delta = st.delta;
      row.n_norm = st.n_step ? st.n_step->norm() : 0.0;
      auto out = restoration(problem, db, st.x, st.filter, st.delta_bar, cfg);
      if (!out) {
        row.evals_cumulative = db.evaluator_calls();
        result.log.push_back(std::move(row));
        result.status = RunStatus::RestorationFailed;
        break;
      }
      st.x = st.x + out->r;
      st.record = db.evaluate(problem, st.x);
      st.delta_bar = out->delta_bar_next;
      st.models = std::move(out->models);
      st.n_step = out->n_step;
      row.evals_cumulative = db.evaluator_calls();
      result.log.push_back(std::move(row));
      continue;
    }

    // Step 3: descent step.
    const Vector x_n = st.x + *st.n_step;
    LinearizedSet lin_shifted = lin.shifted(*st.n_step);
    TangentialSolution tsol =
        lp_tangential(st.models.f_jacobian(x_n), lin_shifted);
    st.chi_bar = tsol.chi;

    // Step 4: criticality test.
    bool crit_hit_cap = false;
    bool crit_entered = false;
    if (st.record.theta < cfg.eps_theta && st.chi_bar < cfg.eps_chi &&
        st.delta_bar > cfg.m_crit * st.chi_bar) {
      crit_entered = true;
      CriticalityResult cres =
          criticality_routine(problem, db, st.x, st.delta_bar, st.models,
                              st.n_step, st.chi_bar, cfg);
      st.delta = cres.delta;
      st.chi = cres.chi;
      st.models = std::move(cres.models);
      st.n_step = cres.n_step;
      tsol = cres.tangential;
      crit_hit_cap = cres.hit_cap;
      lin = st.models.linearize();
      lin_shifted = lin.shifted(*st.n_step);
    } else {
      st.delta = st.delta_bar;
      st.chi = st.chi_bar;
    }
    last_tangential = tsol;
    have_tangential = true;
    row.chi = st.chi;
    row.delta = st.delta;
    row.n_norm = st.n_step->norm();

    if (crit_hit_cap) {
      row.kind = IterKind::CritLoop;
      row.evals_cumulative = db.evaluator_calls();
      result.log.push_back(std::move(row));
      result.status = RunStatus::CritLoopStop;
      break;
    }

    // Step 5: acceptance test.
    const Vector x_n2 = st.x + *st.n_step;
    double sigma = 0.0;
    if (tsol.omega > 0.0 && tsol.d.norm() > 0.0) {
      const double sigma_bar =
          initial_steplength(*st.n_step, tsol.d, st.delta, lin_shifted);
      sigma = backtracking_stepsize(st.models, x_n2, tsol.d, sigma_bar,
                                    tsol.omega, cfg);
    }
    row.sigma = sigma;
    const Vector trial = x_n2 + sigma * tsol.d;
    const EvalRecord& rec_trial = db.evaluate(problem, trial);

    const double phi_model_k = st.models.phi_model(st.x);
    const double phi_model_trial = st.models.phi_model(trial);
    const double model_dec = phi_model_k - phi_model_trial;
    const bool model_ok =
        model_decrease_test(phi_model_k, phi_model_trial, st.record.theta, cfg);
    const double rho =
        ratio_rho(st.record.phi, rec_trial.phi, phi_model_k, phi_model_trial);
    row.rho = rho;
    const bool acceptable = st.filter.augmented_acceptable(
        st.record.theta, st.record.phi, rec_trial.theta, rec_trial.phi);

    // rho is only meaningful on f-type steps; theta-iterations may raise the
    // model objective and are vetted by the filter alone.
    const bool reject =
        !acceptable ||
        (model_ok && (model_dec < 1e-14 || !(rho >= cfg.nu1)));

    bool converged = false;
    if (reject) {
      row.kind = IterKind::Inacceptable;
      st.delta_bar = cfg.gamma1 * st.delta;
    } else {
      // Step 6: filter test.
      if (!model_ok) {
        st.filter.add(st.record.theta, st.record.phi);
        row.kind = IterKind::ThetaIteration;
      } else {
        row.kind = IterKind::Successful;
      }
      // Step 7: iterate update.
      const double dx = (trial - st.x).norm();
      const double df = (rec_trial.f - st.record.f).norm();
      converged = dx <= cfg.tol_rel_x * st.x.norm() ||
                  df <= cfg.tol_rel_f * st.record.f.norm();
      st.x = trial;
      st.record = rec_trial;
      st.delta_bar = radius_update(st.delta, rho, dx, cfg);
    }
    row.evals_cumulative = db.evaluator_calls();
    result.log.push_back(std::move(row));

    if (converged) {
      result.status = RunStatus::Converged;
      break;
    }
    if (crit_entered && cfg.stop_on_crit_loop) {
      result.status = RunStatus::CritLoopStop;
      break;
    }

    // Step 8: model updates.
    st.models = build_models(problem, db, st.x, st.delta_bar, cfg.model_kind);
    st.n_step = std::nullopt;  // our model kinds are radius-dependent
  }

  result.x_final = st.x;
  result.record_final = st.record;
  result.iterations = static_cast<int>(result.log.size());
  result.filter_entries = st.filter.entries();

  // KKT certificate at the final point from a fresh tangential solve on
  // tight models.
  try {
    const double cert_radius = std::min(st.delta_bar, 1e-3);
    SurrogateSet certm = make_fully_linear(st.models, problem, db, st.x,
                                           cert_radius);
    const LinearizedSet lin = certm.linearize();
    if (const std::optional<Vector> n = qp_least_norm(lin)) {
      const Vector x_n = st.x + *n;
      const Matrix F = certm.f_jacobian(x_n);
      const TangentialSolution tsol = lp_tangential(F, lin.shifted(*n));
      last_tangential = tsol;
      have_tangential = true;
      result.chi_final = tsol.chi;
      const auto [stat, compl_res] =
          kkt_residual(F, lin.H, lin.G, st.record.g, tsol);
      result.kkt_stationarity = stat;
      result.kkt_complementarity = compl_res;
    }
  } catch (const std::exception&) {
    if (have_tangential) result.chi_final = last_tangential.chi;
  }

  result.evaluator_calls = db.evaluator_calls();
  return result;
}

RunResult weighted_sum_baseline(const Problem& problem, const Vector& weights,
                                const Vector& x0, const Config& cfg) {
  if (weights.size() != problem.num_obj)
    throw std::invalid_argument("weighted_sum_baseline: weight size");
  if (weights.minCoeff() < 0.0 ||
      std::abs(weights.sum() - 1.0) > 1e-12)
    throw std::invalid_argument(
        "weighted_sum_baseline: weights must be >= 0 and sum to 1");
  Problem scalar = problem;
  scalar.num_obj = 1;
  scalar.name = problem.name + "+weighted_sum";
  const Problem base = problem;
  const Vector w = weights;
  scalar.eval_f = [base, w](const Vector& x) {
    Vector out(1);
    out[0] = w.dot(base.eval_f(x));
    return out;
  };
  return solve(scalar, x0, cfg);
}

}  // namespace mofilter
