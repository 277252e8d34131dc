#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "masersim/analysis.hpp"
#include "masersim/config.hpp"

namespace masersim {

struct SweepAxis {
    std::string name; // parameter name; "variant" takes numeric variant codes
    std::vector<double> values;
};

/// Declarative multi-run experiment: a base run configuration plus a cartesian
/// grid of parameter overrides.
struct SweepSpec {
    RunConfig base;
    std::vector<SweepAxis> axes;
    std::size_t grid_cap = 10'000;
    std::string seed_label = "custom";
};

/// One grid point's result. Analysis failures are captured per record in
/// `status` / `analysis`, never aborting sibling runs.
struct RunRecord {
    std::size_t index = 0;
    RunConfig resolved;
    Trajectory trajectory;
    nlohmann::json analysis;
    std::string status = "ok";
    std::string error_message;
    std::string spec_hash;
    double wall_seconds = 0;
};

SweepSpec figure_preset(const std::string& name); // fig1..fig8

std::size_t sweep_grid_size(const SweepSpec& spec);

/// Executes the grid (optionally in parallel); records are ordered by grid
/// index and are a pure function of the spec regardless of job count.
std::vector<RunRecord> run_sweep(const SweepSpec& spec, int jobs = 1);

nlohmann::json sweep_spec_to_json(const SweepSpec& spec);
SweepSpec sweep_spec_from_json(const nlohmann::json& j);
std::string sweep_spec_hash(const SweepSpec& spec);

/// Per-record analysis used by run_sweep; exposed so stored trajectories can
/// be re-analyzed identically (cli analyze).
nlohmann::json analyze_trajectory(const Trajectory& traj, const RunConfig& cfg);

/// Aligned traditional-vs-separated columns for overlay plotting, plus the
/// max |M1 - M| divergence scalar.
struct OverlayDataset {
    std::vector<double> T;
    std::vector<double> M1, N1;       // traditional
    std::vector<double> M, N_inc, N_c; // separated
    double divergence_M = 0;
};
OverlayDataset compare_models(const RunRecord& traditional, const RunRecord& separated);

} // namespace masersim
