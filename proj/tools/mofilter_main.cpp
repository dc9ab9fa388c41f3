#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mofilter/driver.hpp"
#include "mofilter/io.hpp"
#include "mofilter/problem.hpp"
#include "probes.hpp"

namespace {

using namespace mofilter;

int status_exit_code(RunStatus status) {
  switch (status) {
    case RunStatus::Converged:
    case RunStatus::CritLoopStop:
      return 0;
    case RunStatus::MaxIter:
      return 2;
    case RunStatus::RestorationFailed:
      return 3;
  }
  return 1;
}

void print_summary(const std::string& label, const RunResult& res) {
  std::cout << label << ": status=" << to_string(res.status) << "\n  x = [";
  for (Eigen::Index i = 0; i < res.x_final.size(); ++i)
    std::cout << (i ? ", " : "") << io::format_sig(res.x_final[i]);
  std::cout << "]\n  f = [";
  for (Eigen::Index i = 0; i < res.record_final.f.size(); ++i)
    std::cout << (i ? ", " : "") << io::format_sig(res.record_final.f[i]);
  std::cout << "]\n  theta = " << io::format_sig(res.record_final.theta)
            << "  chi = " << io::format_sig(res.chi_final)
            << "\n  kkt_stationarity = " << io::format_sig(res.kkt_stationarity)
            << "  kkt_complementarity = "
            << io::format_sig(res.kkt_complementarity)
            << "\n  iterations = " << res.iterations
            << "  restorations = " << res.restoration_count
            << "  evaluator_calls = " << res.evaluator_calls << "\n";
}

void write_outputs(const std::filesystem::path& dir, const std::string& prefix,
                   const RunResult& res, const nlohmann::json& meta,
                   const std::vector<std::string>& comments) {
  std::filesystem::create_directories(dir);
  io::write_result_json(dir / (prefix + "result.json"), res, meta);
  io::write_trace_csv(dir / (prefix + "trace.csv"), res, comments);
  io::write_filter_csv(dir / (prefix + "filter.csv"), res);
}

int cmd_run(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config file '" << config_path << "'\n";
    return 1;
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
    return 1;
  }
  io::RunConfig rc;
  Problem problem;
  try {
    rc = io::parse_run_config(doc);
    problem = problem_by_name(rc.problem);
    if (rc.x0.size() != problem.n) {
      std::cerr << "error: x0 has size " << rc.x0.size() << ", problem '"
                << rc.problem << "' has n = " << problem.n << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const RunResult res = solve(problem, rc.x0, rc.cfg);
  nlohmann::json meta = {{"problem", rc.problem},
                         {"config", io::config_to_json(rc.cfg)}};
  write_outputs(io::resolve_output_dir(rc.output_dir), "", res, meta, {});
  print_summary(rc.problem, res);
  return status_exit_code(res.status);
}

int cmd_ex1(const std::string& model, const std::string& variant) {
  Config cfg;
  cfg.model_kind = model_kind_from_string(model);
  Vector x0(2);
  if (variant == "a")
    x0 << -2.0, 0.5;
  else
    x0 << -2.0, 0.0;
  const Problem problem = two_parabolas();
  const RunResult res = solve(problem, x0, cfg);
  nlohmann::json meta = {{"problem", problem.name},
                         {"experiment", "ex1"},
                         {"variant", variant},
                         {"config", io::config_to_json(cfg)}};
  write_outputs(io::resolve_output_dir("."), "ex1_" + model + "_" + variant + "_",
                res, meta, {});
  print_summary("ex1 " + model + " variant " + variant, res);
  return status_exit_code(res.status);
}

int cmd_ex2(bool relaxed) {
  Config cfg;
  cfg.model_kind = ModelKind::RbfCubic;
  std::vector<std::string> comments = {
      "starting point x0 = [0.3, 0.7, 0.2]: chosen for this artifact, not "
      "taken from the original experiment"};
  if (relaxed) {
    cfg.c_delta = 0.99;
    cfg.c_mu = 1000.0;
    comments.push_back(
        "relaxed compatibility c_delta = 0.99, c_mu = 1000: values chosen "
        "for this artifact, not taken from the original experiment");
  }
  Vector x0(3);
  x0 << 0.3, 0.7, 0.2;
  const Problem problem = mw3();
  const std::string prefix = relaxed ? "ex2_relaxed_" : "ex2_";
  const std::filesystem::path dir = io::resolve_output_dir(".");

  const RunResult res = solve(problem, x0, cfg);
  nlohmann::json meta = {{"problem", problem.name},
                         {"experiment", relaxed ? "ex2-relaxed" : "ex2"},
                         {"config", io::config_to_json(cfg)}};
  write_outputs(dir, prefix + "filter_", res, meta, comments);
  print_summary("ex2 filter run", res);

  Vector w(2);
  w << 0.5, 0.5;
  const RunResult base = weighted_sum_baseline(problem, w, x0, cfg);
  nlohmann::json base_meta = {{"problem", problem.name},
                              {"experiment", "ex2-weighted-sum"},
                              {"weights", {0.5, 0.5}},
                              {"config", io::config_to_json(cfg)}};
  write_outputs(dir, prefix + "weighted_sum_", base, base_meta, comments);
  // The baseline is a K=1 solve; report the original objective pair.
  const Vector f_base = problem.eval_f(base.x_final);
  std::cout << "ex2 weighted-sum baseline: status=" << to_string(base.status)
            << "\n  f = [" << io::format_sig(f_base[0]) << ", "
            << io::format_sig(f_base[1])
            << "]\n  theta = " << io::format_sig(base.record_final.theta)
            << "  kkt_stationarity = " << io::format_sig(base.kkt_stationarity)
            << "\n";

  const int code = status_exit_code(res.status);
  const int base_code = status_exit_code(base.status);
  return code != 0 ? code : base_code;
}

int cmd_probe(const std::string& suite, unsigned seed) {
  probes::ProbeReport rep;
  if (suite == "duality")
    rep = probes::duality(seed);
  else if (suite == "slopes")
    rep = probes::slopes(seed);
  else if (suite == "filter")
    rep = probes::filter_suite(seed);
  else if (suite == "norms")
    rep = probes::norms(seed);
  else {
    std::cerr << "error: unknown probe suite '" << suite << "'\n";
    return 1;
  }
  for (const auto& [name, pass] : rep.checks)
    std::cout << (pass ? "[pass] " : "[FAIL] ") << name << "\n";
  return rep.ok() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mofilter: multi-objective filter trust-region solver"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "solve from a JSON config file");
  run->add_option("config", config_path, "path to config.json")->required();

  std::string model = "rbf-cubic";
  std::string variant = "a";
  CLI::App* ex1 = app.add_subcommand("ex1", "two-parabolas experiment");
  ex1->add_option("--model", model, "rbf-cubic | taylor1 | taylor2");
  ex1->add_option("--variant", variant, "a | b")
      ->check(CLI::IsMember({"a", "b"}));

  bool relaxed = false;
  CLI::App* ex2 = app.add_subcommand("ex2", "MW3 experiment plus baseline");
  ex2->add_flag("--relaxed", relaxed, "relax the compatibility parameters");

  std::string suite;
  unsigned seed = 0;
  CLI::App* probe = app.add_subcommand("probe", "property suites");
  probe->add_option("suite", suite, "duality | slopes | filter | norms")
      ->required();
  probe->add_option("--seed", seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints help/diagnostic
    return rc == 0 ? 0 : 1;     // usage errors exit 1
  }

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (ex1->parsed()) return cmd_ex1(model, variant);
    if (ex2->parsed()) return cmd_ex2(relaxed);
    if (probe->parsed()) return cmd_probe(suite, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
