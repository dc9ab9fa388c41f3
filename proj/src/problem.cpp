#include "mofilter/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "mofilter/errors.hpp"

namespace mofilter {

double infeasibility(const Vector& h, const Vector& g) {
  double theta = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i)
    theta = std::max(theta, std::abs(h[i]));
  for (Eigen::Index i = 0; i < g.size(); ++i) theta = std::max(theta, g[i]);
  return theta;
}

double max_scalarization(const Vector& f) {
  if (f.size() == 0)
    throw std::invalid_argument("max_scalarization: empty objective vector");
  return f.maxCoeff();
}

const EvalRecord& EvalDatabase::evaluate(const Problem& problem,
                                         const Vector& x) {
  if (x.size() != problem.n)
    throw std::invalid_argument("evaluate: point dimension mismatch");
  if (!x.allFinite()) throw NonFiniteValue("evaluate: non-finite point");

  std::vector<double> key(x.data(), x.data() + x.size());
  if (auto it = index_.find(key); it != index_.end())
    return records_[it->second];

  EvalRecord rec;
  rec.x = x;
  rec.f = problem.eval_f(x);
  rec.h = problem.num_eq > 0 ? problem.eval_h(x) : Vector(0);
  rec.g = problem.num_ineq > 0 ? problem.eval_g(x) : Vector(0);
  ++evaluator_calls_;
  if (!rec.f.allFinite() || !rec.h.allFinite() || !rec.g.allFinite())
    throw NonFiniteValue("evaluate: evaluator returned NaN/Inf at a point");
  rec.theta = infeasibility(rec.h, rec.g);
  rec.phi = max_scalarization(rec.f);

  index_.emplace(std::move(key), records_.size());
  records_.push_back(std::move(rec));
  return records_.back();
}

const EvalRecord* EvalDatabase::find(const Vector& x) const {
  std::vector<double> key(x.data(), x.data() + x.size());
  auto it = index_.find(key);
  return it == index_.end() ? nullptr : &records_[it->second];
}

Problem two_parabolas() {
  Problem p;
  p.n = 2;
  p.num_obj = 2;
  p.num_eq = 0;
  p.num_ineq = 1;
  p.name = "two_parabolas";
  p.eval_f = [](const Vector& x) {
    Vector f(2);
    const double a = (x[0] - 2.0) * (x[0] - 2.0);
    f[0] = a + (x[1] - 1.0) * (x[1] - 1.0);
    f[1] = a + (x[1] + 1.0) * (x[1] + 1.0);
    return f;
  };
  p.eval_g = [](const Vector& x) {
    Vector g(1);
    g[0] = 1.0 - x[0] * x[0] - x[1] * x[1];
    return g;
  };
  return p;
}

namespace {

double mw3_d(const Vector& x) {
  const double t1 = x[1] + (x[0] - 0.5) * (x[0] - 0.5) - 1.0;
  const double t2 = x[2] + (x[1] - 0.5) * (x[1] - 0.5) - 1.0;
  return 1.0 + 2.0 * t1 * t1 + 2.0 * t2 * t2;
}

Vector mw3_f(const Vector& x) {
  Vector f(2);
  f[0] = x[0];
  f[1] = mw3_d(x) - x[0];  // d * (1 - f1 / d)
  return f;
}

}  // namespace

Problem mw3() {
  Problem p;
  p.n = 3;
  p.num_obj = 2;
  p.num_eq = 0;
  p.num_ineq = 8;  // c1, c2 plus the box 0 <= x_i <= 1
  p.name = "mw3";
  p.eval_f = mw3_f;
  p.eval_g = [](const Vector& x) {
    const Vector f = mw3_f(x);
    const double l = std::sqrt(2.0) * (f[1] - f[0]);
    const double s = std::sin(0.75 * M_PI * l);
    Vector g(8);
    g[0] = f[0] + f[1] - 1.05 - 0.45 * std::pow(s, 6);
    g[1] = -f[0] - f[1] + 0.85 + 0.3 * s * s;
    for (int i = 0; i < 3; ++i) {
      g[2 + 2 * i] = x[i] - 1.0;
      g[3 + 2 * i] = -x[i];
    }
    return g;
  };
  return p;
}

Problem problem_by_name(const std::string& name) {
  if (name == "two_parabolas") return two_parabolas();
  if (name == "mw3") return mw3();
  throw std::invalid_argument("unknown problem name: " + name);
}

}  // namespace mofilter
