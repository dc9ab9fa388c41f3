#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mofilter/driver.hpp"

namespace mofilter::io {

/// 17 significant digits, '.' decimal separator, locale-independent.
std::string format_sig(double v);

struct RunConfig {
  std::string problem;
  Vector x0;
  Config cfg;
  std::filesystem::path output_dir = ".";
  unsigned seed = 0;
};

/// Parses the run-config document.  Unknown keys (top level or inside
/// "overrides") and missing/invalid required fields throw
/// std::invalid_argument with a message naming the offender; the embedded
/// Config is validated before returning.
RunConfig parse_run_config(const nlohmann::json& doc);

nlohmann::json config_to_json(const Config& cfg);
nlohmann::json result_to_json(const RunResult& res, const nlohmann::json& meta);

/// output_dir after applying the MOFILTER_OUTPUT_DIR override.
std::filesystem::path resolve_output_dir(const std::filesystem::path& configured);

/// Columns: k, kind, x..., theta, phi, chi, delta_bar, delta, rho, n_norm,
/// sigma, evals_cumulative.  `comments` become leading '#' lines.
void write_trace_csv(const std::filesystem::path& path, const RunResult& res,
                     const std::vector<std::string>& comments = {});

void write_filter_csv(const std::filesystem::path& path, const RunResult& res);

void write_result_json(const std::filesystem::path& path, const RunResult& res,
                       const nlohmann::json& meta);

}  // namespace mofilter::io
