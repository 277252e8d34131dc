#include "masersim/config.hpp"

#include <cmath>

#include "masersim/io.hpp"

namespace masersim {

const char* analysis_kind_name(AnalysisKind k) {
    switch (k) {
        case AnalysisKind::PulseMetrics: return "pulse_metrics";
        case AnalysisKind::GrowthCurve: return "growth_curve";
        case AnalysisKind::PulseTrain: return "pulse_train";
        case AnalysisKind::Outflow: return "outflow";
        case AnalysisKind::Conservation: return "conservation";
    }
    raise(ErrorCode::InvalidArgument, "bad analysis kind");
}

AnalysisKind analysis_kind_from_name(const std::string& name) {
    if (name == "pulse_metrics") return AnalysisKind::PulseMetrics;
    if (name == "growth_curve") return AnalysisKind::GrowthCurve;
    if (name == "pulse_train") return AnalysisKind::PulseTrain;
    if (name == "outflow") return AnalysisKind::Outflow;
    if (name == "conservation") return AnalysisKind::Conservation;
    raise(ErrorCode::SchemaError, "unknown analysis: " + name);
}

std::vector<double> RunConfig::resolved_initial() const {
    if (!initial_state.empty()) {
        auto labels = variant_labels(variant);
        if (initial_state.size() != labels.size())
            raise(ErrorCode::SchemaError, "initial_state length does not match variant");
        return initial_state;
    }
    return default_initial_state(variant, params);
}

std::string RunConfig::resolved_component() const {
    if (!component.empty()) return component;
    return variant_labels(variant).back(); // the (coherent) photon component
}

namespace {

double require_number(const nlohmann::json& j, const std::string& key, double fallback,
                      bool* present = nullptr) {
    if (!j.contains(key)) {
        if (present) *present = false;
        return fallback;
    }
    if (!j[key].is_number())
        raise(ErrorCode::SchemaError, "config key '" + key + "' must be a number");
    if (present) *present = true;
    return j[key].get<double>();
}

} // namespace

nlohmann::json integrator_to_json(const IntegratorConfig& cfg) {
    return {
        {"method", cfg.method == IntegratorMethod::FixedStepRK4 ? "rk4" : "rk45"},
        {"rel_tol", cfg.rel_tol},
        {"abs_tol", cfg.abs_tol},
        {"initial_step", cfg.initial_step},
        {"max_step", cfg.max_step},
        {"max_steps", cfg.max_steps},
        {"t_end", cfg.t_end},
        {"sample_interval", cfg.sample_interval},
    };
}

IntegratorConfig integrator_from_json(const nlohmann::json& j) {
    reject_unknown_keys(j,
                        {"method", "rel_tol", "abs_tol", "initial_step", "max_step",
                         "max_steps", "t_end", "sample_interval"},
                        "integrator");
    IntegratorConfig cfg;
    if (j.contains("method")) {
        const std::string m = j["method"].get<std::string>();
        if (m == "rk45")
            cfg.method = IntegratorMethod::AdaptiveRK45;
        else if (m == "rk4")
            cfg.method = IntegratorMethod::FixedStepRK4;
        else
            raise(ErrorCode::SchemaError, "integrator.method must be 'rk45' or 'rk4'");
    }
    cfg.rel_tol = require_number(j, "rel_tol", cfg.rel_tol);
    cfg.abs_tol = require_number(j, "abs_tol", cfg.abs_tol);
    cfg.initial_step = require_number(j, "initial_step", cfg.initial_step);
    cfg.max_step = require_number(j, "max_step", cfg.max_step);
    if (j.contains("max_steps")) cfg.max_steps = j["max_steps"].get<std::uint64_t>();
    cfg.t_end = require_number(j, "t_end", cfg.t_end);
    cfg.sample_interval = require_number(j, "sample_interval", cfg.sample_interval);
    cfg.validate();
    return cfg;
}

RunConfig parse_run_config(const nlohmann::json& j) {
    reject_unknown_keys(j,
                        {"variant", "params", "initial_state", "integrator", "analyses",
                         "component", "prominence_frac", "settle_time", "sustained_level"},
                        "config");
    RunConfig cfg;
    if (!j.contains("variant"))
        raise(ErrorCode::SchemaError, "config requires 'variant'");
    cfg.variant = variant_from_name(j["variant"].get<std::string>());

    if (j.contains("params")) {
        const auto& p = j["params"];
        reject_unknown_keys(p,
                            {"N_total", "mu0", "delta", "alpha", "I0", "Gamma",
                             "Gamma_tilde", "Nk0", "spontaneous_source_factor", "N0",
                             "theta"},
                            "params");
        bool has_mu0 = false, has_N0 = false, has_delta = false, has_theta = false;
        cfg.params.N_total = require_number(p, "N_total", cfg.params.N_total);
        cfg.params.mu0 = require_number(p, "mu0", cfg.params.mu0, &has_mu0);
        cfg.params.delta = require_number(p, "delta", cfg.params.delta, &has_delta);
        cfg.params.alpha = require_number(p, "alpha", cfg.params.alpha);
        cfg.params.I0 = require_number(p, "I0", cfg.params.I0);
        cfg.params.Nk0 = require_number(p, "Nk0", cfg.params.Nk0);
        cfg.params.spontaneous_source_factor =
            require_number(p, "spontaneous_source_factor", cfg.params.spontaneous_source_factor);
        if (p.contains("Gamma") && p.contains("Gamma_tilde"))
            raise(ErrorCode::SchemaError, "give either Gamma or Gamma_tilde, not both");
        if (p.contains("Gamma")) cfg.params.Gamma = p["Gamma"].get<double>();
        if (p.contains("Gamma_tilde"))
            cfg.params.Gamma = p["Gamma_tilde"].get<double>() + 2.0;

        const double N0 = require_number(p, "N0", 0.0, &has_N0);
        const double theta = require_number(p, "theta", 0.0, &has_theta);
        if (has_N0) {
            if (has_mu0)
                raise(ErrorCode::SchemaError, "give either N0 or mu0, not both");
            if (!(N0 > 0))
                raise(ErrorCode::SchemaError, "N0 must be positive");
            cfg.params.mu0 = std::sqrt(cfg.params.N_total / N0);
        }
        if (has_theta) {
            if (has_delta)
                raise(ErrorCode::SchemaError, "give either theta or delta, not both");
            if (theta < 0)
                raise(ErrorCode::SchemaError, "theta must be non-negative");
            cfg.params.delta = theta * cfg.params.mu0;
        }
    }

    if (j.contains("initial_state"))
        cfg.initial_state = j["initial_state"].get<std::vector<double>>();
    if (j.contains("integrator")) cfg.integrator = integrator_from_json(j["integrator"]);
    if (j.contains("analyses"))
        for (const auto& a : j["analyses"])
            cfg.analyses.push_back(analysis_kind_from_name(a.get<std::string>()));
    if (j.contains("component")) cfg.component = j["component"].get<std::string>();
    cfg.prominence_frac = require_number(j, "prominence_frac", cfg.prominence_frac);
    cfg.settle_time = require_number(j, "settle_time", cfg.settle_time);
    cfg.sustained_level = require_number(j, "sustained_level", cfg.sustained_level);
    return cfg;
}

nlohmann::json run_config_to_json(const RunConfig& cfg) {
    nlohmann::json analyses = nlohmann::json::array();
    for (auto a : cfg.analyses) analyses.push_back(analysis_kind_name(a));
    nlohmann::json j{
        {"variant", variant_name(cfg.variant)},
        {"params",
         {{"N_total", cfg.params.N_total},
          {"mu0", cfg.params.mu0},
          {"delta", cfg.params.delta},
          {"alpha", cfg.params.alpha},
          {"I0", cfg.params.I0},
          {"Gamma", cfg.params.Gamma},
          {"Nk0", cfg.params.Nk0},
          {"spontaneous_source_factor", cfg.params.spontaneous_source_factor}}},
        {"initial_state", cfg.resolved_initial()},
        {"integrator", integrator_to_json(cfg.integrator)},
        {"analyses", analyses},
        {"component", cfg.resolved_component()},
        {"prominence_frac", cfg.prominence_frac},
        {"settle_time", cfg.settle_time},
        {"sustained_level", cfg.sustained_level},
    };
    return j;
}

} // namespace masersim
