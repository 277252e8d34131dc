#pragma once

#include <optional>
#include <string>
#include <vector>

#include "masersim/models.hpp"
#include "masersim/ode.hpp"

#include "json.hpp"

namespace masersim {

enum class AnalysisKind {
    PulseMetrics,
    GrowthCurve,
    PulseTrain,
    Outflow,
    Conservation,
};

const char* analysis_kind_name(AnalysisKind k);
AnalysisKind analysis_kind_from_name(const std::string& name);

/// Fully resolved description of one simulation run. The JSON form is the
/// strict config schema: unknown keys are rejected, and serializing a resolved
/// config echoes every default so outputs are self-describing.
struct RunConfig {
    Variant variant = Variant::SepNorm;
    PhysicalParams params;
    std::vector<double> initial_state; // empty -> default_initial_state
    IntegratorConfig integrator;
    std::vector<AnalysisKind> analyses;
    std::string component;        // analysis target; empty -> photon component
    double prominence_frac = 0.05;
    double settle_time = 0.0;          // pulse-train transient suppression
    double sustained_level = 0.8;      // growth-curve sustained-interval level

    NormalizedParams normalized() const { return normalize(params); }
    std::vector<double> resolved_initial() const;
    std::string resolved_component() const; // photon component by default
};

/// Parses the strict schema. Normalized quantities may be given directly
/// ("N0", "theta"); they are converted onto the physical parameter set
/// (mu0 = sqrt(N_total/N0), delta = theta*mu0) and may not be combined with
/// an explicit mu0/delta.
RunConfig parse_run_config(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& cfg);

nlohmann::json integrator_to_json(const IntegratorConfig& cfg);
IntegratorConfig integrator_from_json(const nlohmann::json& j);

} // namespace masersim
