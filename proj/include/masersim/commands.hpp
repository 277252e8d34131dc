#pragma once

#include <filesystem>
#include <string>

#include "masersim/sweep.hpp"

namespace masersim {

/// Maps library error codes onto the CLI exit-code contract:
/// config/schema problems 2, integration/analysis failures 3, I/O 4.
int exit_code_for(ErrorCode code);

nlohmann::json error_json(const Error& e);

/// Runs one simulation and writes trajectory.csv, analysis.json and
/// manifest.json into out_dir. Everything is computed before the first write,
/// so a failing run leaves no partial outputs.
void cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Runs a preset or custom sweep and writes per-record run_NNN.csv files,
/// summary.csv, manifest.json and an SVG plot. Figure-specific extras:
/// growth_NNN.csv for fig1, overlay.csv for fig2..fig5.
void cmd_figure(const SweepSpec& spec, const std::string& preset_name,
                const std::filesystem::path& out_dir, int jobs);

/// Re-runs analyses on a stored trajectory and writes the analysis JSON to
/// out_path. Returns true when every analysis succeeded; analysis errors are
/// embedded in the JSON rather than thrown.
bool cmd_analyze(const std::filesystem::path& csv_path, const RunConfig& cfg,
                 const std::filesystem::path& out_path);

} // namespace masersim
