#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "masersim/ode.hpp"

#include "json.hpp"

namespace masersim {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);

/// Writes content to path via a temp file in the same directory + rename, so
/// interrupted runs never leave truncated files.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string trajectory_csv(const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

// SVG line charts -------------------------------------------------------------

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgOptions {
    std::string title;
    std::string x_label = "T";
    std::string y_label;
    bool log_y = false;
    int width = 900;
    int height = 560;
};

std::string render_svg(const std::vector<SvgSeries>& series, const SvgOptions& opt);

// JSON helpers ----------------------------------------------------------------

/// FNV-1a 64-bit hash of a string, hex-encoded; used as the sweep spec hash.
std::string fnv1a_hex(const std::string& data);

/// Throws SchemaError when `obj` contains a key outside `allowed`.
void reject_unknown_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                         const std::string& context);

} // namespace masersim
