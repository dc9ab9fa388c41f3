#include "mofilter/surrogate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mofilter/errors.hpp"

namespace mofilter {

namespace {

constexpr double kQrPivotThreshold = 1e-3;
constexpr double kSearchRadiusFactor = 2.0;

// Stacks [f; h; g] so one point-set factorization serves every output.
Vector stacked_outputs(const EvalRecord& rec) {
  Vector out(rec.f.size() + rec.h.size() + rec.g.size());
  out << rec.f, rec.h, rec.g;
  return out;
}

}  // namespace

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "rbf-cubic") return ModelKind::RbfCubic;
  if (s == "taylor1") return ModelKind::Taylor1;
  if (s == "taylor2") return ModelKind::Taylor2;
  throw std::invalid_argument("unknown model kind: " + s);
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::RbfCubic: return "rbf-cubic";
    case ModelKind::Taylor1: return "taylor1";
    case ModelKind::Taylor2: return "taylor2";
  }
  return "?";
}

double ScalarModel::value(const Vector& xi) const {
  if (kind != ModelKind::RbfCubic) {
    const Vector s = xi - center;
    double v = t_const + t_grad.dot(s);
    if (kind == ModelKind::Taylor2) v += 0.5 * s.dot(t_hess * s);
    return v;
  }
  double v = rbf_c0 + rbf_lin.dot(xi - center);
  for (Eigen::Index i = 0; i < rbf_points.cols(); ++i) {
    const double r = (xi - rbf_points.col(i)).norm();
    v += rbf_weights[i] * r * r * r;
  }
  return v;
}

Vector ScalarModel::gradient(const Vector& xi) const {
  if (kind != ModelKind::RbfCubic) {
    Vector g = t_grad;
    if (kind == ModelKind::Taylor2) g += t_hess * (xi - center);
    return g;
  }
  Vector g = rbf_lin;
  for (Eigen::Index i = 0; i < rbf_points.cols(); ++i) {
    const Vector diff = xi - rbf_points.col(i);
    g += rbf_weights[i] * 3.0 * diff.norm() * diff;
  }
  return g;
}

Matrix ScalarModel::hessian(const Vector& xi) const {
  const Eigen::Index n = center.size();
  if (kind == ModelKind::Taylor1) return Matrix::Zero(n, n);
  if (kind == ModelKind::Taylor2) return t_hess;
  Matrix H = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < rbf_points.cols(); ++i) {
    const Vector diff = xi - rbf_points.col(i);
    const double r = diff.norm();
    if (r > 0.0)
      H += rbf_weights[i] * 3.0 *
           (r * Matrix::Identity(n, n) + diff * diff.transpose() / r);
  }
  return H;
}

namespace {

Vector values_of(const std::vector<ScalarModel>& models, const Vector& xi) {
  Vector out(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) out[i] = models[i].value(xi);
  return out;
}

Matrix jacobian_of(const std::vector<ScalarModel>& models, const Vector& xi,
                   Eigen::Index n) {
  Matrix out(models.size(), n);
  for (std::size_t i = 0; i < models.size(); ++i)
    out.row(i) = models[i].gradient(xi).transpose();
  return out;
}

}  // namespace

Vector SurrogateSet::f_values(const Vector& xi) const { return values_of(mf, xi); }
Vector SurrogateSet::h_values(const Vector& xi) const { return values_of(mh, xi); }
Vector SurrogateSet::g_values(const Vector& xi) const { return values_of(mg, xi); }
Matrix SurrogateSet::f_jacobian(const Vector& xi) const {
  return jacobian_of(mf, xi, center.size());
}
Matrix SurrogateSet::h_jacobian(const Vector& xi) const {
  return jacobian_of(mh, xi, center.size());
}
Matrix SurrogateSet::g_jacobian(const Vector& xi) const {
  return jacobian_of(mg, xi, center.size());
}

double SurrogateSet::phi_model(const Vector& xi) const {
  return max_scalarization(f_values(xi));
}

LinearizedSet SurrogateSet::linearize() const {
  LinearizedSet lin;
  lin.H = h_jacobian(center);
  lin.h0 = h_values(center);
  lin.G = g_jacobian(center);
  lin.g0 = g_values(center);
  return lin;
}

SurrogateSet build_taylor(const Problem& problem, EvalDatabase& db,
                          const Vector& x, double delta, int degree) {
  if (delta <= 0.0) throw std::invalid_argument("build_taylor: delta <= 0");
  const int n = problem.n;
  const int n_out = problem.num_obj + problem.num_eq + problem.num_ineq;

  const Vector center_vals = stacked_outputs(db.evaluate(problem, x));

  Matrix grads = Matrix::Zero(n_out, n);
  for (int i = 0; i < n; ++i) {
    const double h = std::min(delta, 1e-6 * std::max(1.0, std::abs(x[i])));
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const Vector vp = stacked_outputs(db.evaluate(problem, xp));
    const Vector vm = stacked_outputs(db.evaluate(problem, xm));
    grads.col(i) = (vp - vm) / (2.0 * h);
  }

  std::vector<Matrix> hessians;
  if (degree == 2) {
    hessians.assign(n_out, Matrix::Zero(n, n));
    // A larger step than the gradient's: second differences lose half the
    // significant digits to cancellation.
    Vector hs(n);
    for (int i = 0; i < n; ++i)
      hs[i] = std::min(delta, 1e-2 * std::max(1.0, std::abs(x[i])));
    for (int i = 0; i < n; ++i) {
      Vector xp = x, xm = x;
      xp[i] += hs[i];
      xm[i] -= hs[i];
      const Vector vp = stacked_outputs(db.evaluate(problem, xp));
      const Vector vm = stacked_outputs(db.evaluate(problem, xm));
      for (int o = 0; o < n_out; ++o)
        hessians[o](i, i) =
            (vp[o] - 2.0 * center_vals[o] + vm[o]) / (hs[i] * hs[i]);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        Vector xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += hs[i]; xpp[j] += hs[j];
        xpm[i] += hs[i]; xpm[j] -= hs[j];
        xmp[i] -= hs[i]; xmp[j] += hs[j];
        xmm[i] -= hs[i]; xmm[j] -= hs[j];
        const Vector vpp = stacked_outputs(db.evaluate(problem, xpp));
        const Vector vpm = stacked_outputs(db.evaluate(problem, xpm));
        const Vector vmp = stacked_outputs(db.evaluate(problem, xmp));
        const Vector vmm = stacked_outputs(db.evaluate(problem, xmm));
        for (int o = 0; o < n_out; ++o) {
          const double v =
              (vpp[o] - vpm[o] - vmp[o] + vmm[o]) / (4.0 * hs[i] * hs[j]);
          hessians[o](i, j) = v;
          hessians[o](j, i) = v;
        }
      }
    }
  }

  SurrogateSet set;
  set.kind = degree == 2 ? ModelKind::Taylor2 : ModelKind::Taylor1;
  set.center = x;
  set.radius = delta;
  set.fully_linear = true;
  for (int o = 0; o < n_out; ++o) {
    ScalarModel m;
    m.kind = set.kind;
    m.center = x;
    m.radius = delta;
    m.t_const = center_vals[o];
    m.t_grad = grads.row(o).transpose();
    m.t_hess = degree == 2 ? hessians[o] : Matrix::Zero(n, n);
    auto& dst = o < problem.num_obj ? set.mf
                : o < problem.num_obj + problem.num_eq ? set.mh
                                                       : set.mg;
    dst.push_back(std::move(m));
  }
  return set;
}

SurrogateSet build_rbf(const Problem& problem, EvalDatabase& db,
                       const Vector& x, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("build_rbf: delta <= 0");
  const int n = problem.n;
  db.evaluate(problem, x);

  // Candidate reuse points, nearest first.
  struct Cand {
    double dist;
    std::size_t idx;
  };
  std::vector<Cand> cands;
  for (std::size_t i = 0; i < db.records().size(); ++i) {
    const double dist = (db.records()[i].x - x).norm();
    if (dist > 0.0 && dist <= kSearchRadiusFactor * delta)
      cands.push_back({dist, i});
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Cand& a, const Cand& b) { return a.dist < b.dist; });

  // Greedy pivoted selection of n affinely independent directions.
  std::vector<Vector> points{x};
  Matrix Q(n, n);  // orthonormal accepted directions
  int rank = 0;
  std::vector<char> used(cands.size(), 0);
  for (std::size_t c = 0; c < cands.size() && rank < n; ++c) {
    const Vector& p = db.records()[cands[c].idx].x;
    Vector v = (p - x) / delta;
    Vector res = v - Q.leftCols(rank) * (Q.leftCols(rank).transpose() * v);
    if (res.norm() >= kQrPivotThreshold) {
      Q.col(rank++) = res / res.norm();
      points.push_back(p);
      used[c] = 1;
    }
  }
  for (int i = 0; i < n && rank < n; ++i) {
    Vector v = Vector::Unit(n, i);
    Vector res = v - Q.leftCols(rank) * (Q.leftCols(rank).transpose() * v);
    if (res.norm() < kQrPivotThreshold) continue;
    Vector p = x + delta * Vector::Unit(n, i);
    db.evaluate(problem, p);
    Q.col(rank++) = res / res.norm();
    points.push_back(std::move(p));
  }
  if (rank < n)
    throw SingularInterpolation("build_rbf: could not complete a poised set");

  const std::size_t p_max = static_cast<std::size_t>((n + 1) * (n + 2) / 2);
  for (std::size_t c = 0; c < cands.size() && points.size() < p_max; ++c) {
    if (used[c]) continue;
    const Vector& p = db.records()[cands[c].idx].x;
    const bool dup = std::any_of(points.begin(), points.end(), [&](const Vector& q) {
      return (q - p).norm() <= 1e-12 * std::max(1.0, delta);
    });
    if (!dup) points.push_back(p);
  }

  // Interpolation system in center-shifted, delta-scaled coordinates.
  const int m = static_cast<int>(points.size());
  Matrix scaled(n, m);
  for (int i = 0; i < m; ++i) scaled.col(i) = (points[i] - x) / delta;
  Matrix kkt = Matrix::Zero(m + n + 1, m + n + 1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double r = (scaled.col(i) - scaled.col(j)).norm();
      kkt(i, j) = r * r * r;
    }
    kkt(i, m) = 1.0;
    kkt(m, i) = 1.0;
    kkt.block(i, m + 1, 1, n) = scaled.col(i).transpose();
    kkt.block(m + 1, i, n, 1) = scaled.col(i);
  }
  Eigen::FullPivLU<Matrix> lu(kkt);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible())
    throw SingularInterpolation("build_rbf: singular interpolation system");

  const int n_out = problem.num_obj + problem.num_eq + problem.num_ineq;
  Matrix rhs = Matrix::Zero(m + n + 1, n_out);
  for (int i = 0; i < m; ++i)
    rhs.row(i) = stacked_outputs(db.evaluate(problem, points[i])).transpose();
  const Matrix coeff = lu.solve(rhs);

  Matrix point_mat(n, m);
  for (int i = 0; i < m; ++i) point_mat.col(i) = points[i];

  SurrogateSet set;
  set.kind = ModelKind::RbfCubic;
  set.center = x;
  set.radius = delta;
  set.fully_linear = true;
  const double d3 = delta * delta * delta;
  for (int o = 0; o < n_out; ++o) {
    ScalarModel mod;
    mod.kind = ModelKind::RbfCubic;
    mod.center = x;
    mod.radius = delta;
    mod.rbf_points = point_mat;
    mod.rbf_weights = coeff.col(o).head(m) / d3;
    mod.rbf_c0 = coeff(m, o);
    mod.rbf_lin = coeff.col(o).segment(m + 1, n) / delta;
    auto& dst = o < problem.num_obj ? set.mf
                : o < problem.num_obj + problem.num_eq ? set.mh
                                                       : set.mg;
    dst.push_back(std::move(mod));
  }
  return set;
}

SurrogateSet build_models(const Problem& problem, EvalDatabase& db,
                          const Vector& x, double delta, ModelKind kind) {
  switch (kind) {
    case ModelKind::RbfCubic: return build_rbf(problem, db, x, delta);
    case ModelKind::Taylor1: return build_taylor(problem, db, x, delta, 1);
    case ModelKind::Taylor2: return build_taylor(problem, db, x, delta, 2);
  }
  throw std::logic_error("build_models: bad kind");
}

SurrogateSet make_fully_linear(const SurrogateSet& set, const Problem& problem,
                               EvalDatabase& db, const Vector& x,
                               double delta) {
  if (set.fully_linear && set.center.size() == x.size() && set.center == x &&
      set.radius <= delta)
    return set;
  return build_models(problem, db, x, delta, set.kind);
}

double error_slope_probe(const Problem& problem, ModelKind kind,
                         const Vector& x, const std::vector<double>& radii,
                         int f_index, unsigned seed) {
  if (radii.size() < 4)
    throw std::invalid_argument("error_slope_probe: need >= 4 radii");
  const int n = problem.n;
  std::mt19937 rng(seed + 12345u);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<double> log_d, log_e;
  for (double delta : radii) {
    EvalDatabase db;
    const SurrogateSet set = build_models(problem, db, x, delta, kind);
    double err = 0.0;
    for (int s = 0; s < 32; ++s) {
      Vector dir(n);
      for (int i = 0; i < n; ++i) dir[i] = gauss(rng);
      dir.normalize();
      const double rad = delta * std::pow(unif(rng), 1.0 / n);
      const Vector xi = x + rad * dir;
      const double truth = problem.eval_f(xi)[f_index];
      err = std::max(err, std::abs(truth - set.mf[f_index].value(xi)));
    }
    log_d.push_back(std::log(delta));
    log_e.push_back(std::log(std::max(err, 1e-14)));
  }

  const double N = static_cast<double>(log_d.size());
  const double mx = std::accumulate(log_d.begin(), log_d.end(), 0.0) / N;
  const double my = std::accumulate(log_e.begin(), log_e.end(), 0.0) / N;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < log_d.size(); ++i) {
    sxx += (log_d[i] - mx) * (log_d[i] - mx);
    sxy += (log_d[i] - mx) * (log_e[i] - my);
  }
  return sxy / sxx;
}

}  // namespace mofilter
