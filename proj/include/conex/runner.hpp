#pragma once

#include <string>

#include "json.hpp"

namespace conex {

/// Exit codes of the task driver.
inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_verify_failed = 2;

/// Load a JSON config; a run manifest (object with "task" and "config" keys)
/// is unwrapped to its embedded config, so re-running from a manifest
/// reproduces the run.
nlohmann::json load_config(const std::string& path);

/// Execute one task ("profile", "spectrum", "indices", "radial", "simulate",
/// "oracle", "verify") with the given config, writing deterministic CSV/JSON
/// outputs plus a run manifest into out_dir. Returns an exit code.
int run_task(const std::string& task, nlohmann::json config, const std::string& out_dir);

/// Write plain-text gnuplot scripts next to the CSVs found in run_dir.
int emit_plots(const std::string& run_dir);

/// Resolve the output root: explicit flag > CONEX_OUT > ./conex_out.
std::string resolve_out_dir(const std::string& flag_value);

} // namespace conex
