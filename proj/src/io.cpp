#include "mofilter/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mofilter::io {

std::string format_sig(double v) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

namespace {

void reject_unknown_keys(const nlohmann::json& obj,
                         const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!known.count(key))
      throw std::invalid_argument("unknown key '" + key + "' in " + where);
}

Vector to_vector(const nlohmann::json& arr, const std::string& where) {
  if (!arr.is_array())
    throw std::invalid_argument(where + " must be an array of numbers");
  Vector v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw std::invalid_argument(where + " must be an array of numbers");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

void apply_overrides(Config& cfg, const nlohmann::json& ov) {
  const std::set<std::string> known = {
      "delta0",      "delta_max",   "gamma0",       "gamma1",
      "gamma2",      "nu0",         "nu1",          "eps_chi",
      "eps_theta",   "kappa_theta", "psi",          "b_crit",
      "m_crit",      "alpha_crit",  "c_delta",      "c_mu",
      "mu",          "gamma_theta", "a_armijo",     "b_armijo",
      "max_backtracks", "max_iter", "crit_loop_cap", "tol_rel_x",
      "tol_rel_f",   "stop_on_crit_loop", "restoration_budget"};
  reject_unknown_keys(ov, known, "overrides");
  const auto num = [&](const char* key, double& dst) {
    if (ov.contains(key)) dst = ov.at(key).get<double>();
  };
  num("delta0", cfg.delta0);
  num("delta_max", cfg.delta_max);
  num("gamma0", cfg.gamma0);
  num("gamma1", cfg.gamma1);
  num("gamma2", cfg.gamma2);
  num("nu0", cfg.nu0);
  num("nu1", cfg.nu1);
  num("eps_chi", cfg.eps_chi);
  num("eps_theta", cfg.eps_theta);
  num("kappa_theta", cfg.kappa_theta);
  num("psi", cfg.psi);
  num("b_crit", cfg.b_crit);
  num("m_crit", cfg.m_crit);
  num("alpha_crit", cfg.alpha_crit);
  num("c_delta", cfg.c_delta);
  num("c_mu", cfg.c_mu);
  num("mu", cfg.mu);
  num("gamma_theta", cfg.gamma_theta);
  num("a_armijo", cfg.a_armijo);
  num("b_armijo", cfg.b_armijo);
  num("tol_rel_x", cfg.tol_rel_x);
  num("tol_rel_f", cfg.tol_rel_f);
  if (ov.contains("max_backtracks"))
    cfg.max_backtracks = ov.at("max_backtracks").get<int>();
  if (ov.contains("max_iter")) cfg.max_iter = ov.at("max_iter").get<int>();
  if (ov.contains("crit_loop_cap"))
    cfg.crit_loop_cap = ov.at("crit_loop_cap").get<int>();
  if (ov.contains("stop_on_crit_loop"))
    cfg.stop_on_crit_loop = ov.at("stop_on_crit_loop").get<bool>();
  if (ov.contains("restoration_budget"))
    cfg.restoration_budget = ov.at("restoration_budget").get<long>();
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& doc) {
  if (!doc.is_object())
    throw std::invalid_argument("config document must be a JSON object");
  reject_unknown_keys(
      doc, {"problem", "x0", "model_kind", "overrides", "output_dir", "seed"},
      "config");
  RunConfig rc;
  if (!doc.contains("problem") || !doc.at("problem").is_string())
    throw std::invalid_argument("missing required string field 'problem'");
  rc.problem = doc.at("problem").get<std::string>();
  if (!doc.contains("x0"))
    throw std::invalid_argument("missing required field 'x0'");
  rc.x0 = to_vector(doc.at("x0"), "x0");
  if (doc.contains("model_kind"))
    rc.cfg.model_kind =
        model_kind_from_string(doc.at("model_kind").get<std::string>());
  if (doc.contains("overrides")) apply_overrides(rc.cfg, doc.at("overrides"));
  if (doc.contains("output_dir"))
    rc.output_dir = doc.at("output_dir").get<std::string>();
  if (doc.contains("seed")) rc.seed = doc.at("seed").get<unsigned>();
  rc.cfg.validate();
  return rc;
}

nlohmann::json config_to_json(const Config& cfg) {
  return {{"delta0", cfg.delta0},
          {"delta_max", cfg.delta_max},
          {"gamma0", cfg.gamma0},
          {"gamma1", cfg.gamma1},
          {"gamma2", cfg.gamma2},
          {"nu0", cfg.nu0},
          {"nu1", cfg.nu1},
          {"eps_chi", cfg.eps_chi},
          {"eps_theta", cfg.eps_theta},
          {"kappa_theta", cfg.kappa_theta},
          {"psi", cfg.psi},
          {"b_crit", cfg.b_crit},
          {"m_crit", cfg.m_crit},
          {"alpha_crit", cfg.alpha_crit},
          {"c_delta", cfg.c_delta},
          {"c_mu", cfg.c_mu},
          {"mu", cfg.mu},
          {"gamma_theta", cfg.gamma_theta},
          {"a_armijo", cfg.a_armijo},
          {"b_armijo", cfg.b_armijo},
          {"max_backtracks", cfg.max_backtracks},
          {"max_iter", cfg.max_iter},
          {"crit_loop_cap", cfg.crit_loop_cap},
          {"tol_rel_x", cfg.tol_rel_x},
          {"tol_rel_f", cfg.tol_rel_f},
          {"stop_on_crit_loop", cfg.stop_on_crit_loop},
          {"model_kind", to_string(cfg.model_kind)},
          {"restoration_budget", cfg.restoration_budget}};
}

std::filesystem::path resolve_output_dir(
    const std::filesystem::path& configured) {
  if (const char* env = std::getenv("MOFILTER_OUTPUT_DIR"); env && *env)
    return env;
  return configured;
}

namespace {

nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

nlohmann::json result_to_json(const RunResult& res,
                              const nlohmann::json& meta) {
  nlohmann::json doc = {
      {"status", to_string(res.status)},
      {"x_final", vector_to_json(res.x_final)},
      {"f_final", vector_to_json(res.record_final.f)},
      {"theta_final", res.record_final.theta},
      {"phi_final", res.record_final.phi},
      {"chi_final", res.chi_final},
      {"kkt_stationarity", res.kkt_stationarity},
      {"kkt_complementarity", res.kkt_complementarity},
      {"evaluator_calls", res.evaluator_calls},
      {"iterations", res.iterations},
      {"restoration_count", res.restoration_count},
  };
  // NaN is not representable in JSON; nlohmann would emit literal `null`
  // only via explicit replacement.
  for (const char* key :
       {"chi_final", "kkt_stationarity", "kkt_complementarity"})
    if (doc.at(key).is_number() && std::isnan(doc.at(key).get<double>()))
      doc[key] = nullptr;
  if (!meta.is_null()) doc["meta"] = meta;
  return doc;
}

void write_trace_csv(const std::filesystem::path& path, const RunResult& res,
                     const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  for (const auto& line : comments) out << "# " << line << "\n";
  const Eigen::Index n = res.x_final.size();
  out << "k,kind";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i;
  out << ",theta,phi,chi,delta_bar,delta,rho,n_norm,sigma,evals_cumulative\n";
  for (const IterationLog& row : res.log) {
    out << row.k << ',' << to_string(row.kind);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_sig(row.x[i]);
    out << ',' << format_sig(row.theta) << ',' << format_sig(row.phi) << ','
        << format_sig(row.chi) << ',' << format_sig(row.delta_bar) << ','
        << format_sig(row.delta) << ',' << format_sig(row.rho) << ','
        << format_sig(row.n_norm) << ',' << format_sig(row.sigma) << ','
        << row.evals_cumulative << '\n';
  }
}

void write_filter_csv(const std::filesystem::path& path,
                      const RunResult& res) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "theta,phi\n";
  for (const auto& [theta, phi] : res.filter_entries)
    out << format_sig(theta) << ',' << format_sig(phi) << '\n';
}

void write_result_json(const std::filesystem::path& path, const RunResult& res,
                       const nlohmann::json& meta) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << result_to_json(res, meta).dump(2) << '\n';
}

}  // namespace mofilter::io
