#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "masersim/errors.hpp"

namespace masersim {

/// Right-hand side of an autonomous-or-not small ODE system.
/// `eval` must be a pure function of (t, y); the integrator relies on
/// repeated evaluations being bit-identical.
struct VectorField {
    int dimension = 0;
    std::function<void(double t, const double* y, double* dydt)> eval;
    std::vector<std::string> component_labels;
};

enum class IntegratorMethod {
    AdaptiveRK45, // Dormand-Prince 4(5) with PI step control
    FixedStepRK4, // classical RK4, step == initial_step
};

struct IntegratorConfig {
    IntegratorMethod method = IntegratorMethod::AdaptiveRK45;
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    double initial_step = 1e-6;
    double max_step = 1.0;
    std::uint64_t max_steps = 50'000'000;
    double t_end = 1.0;
    double sample_interval = 0.01;

    void validate() const;
};

struct StepStats {
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    std::uint64_t rhs_evaluations = 0;
};

/// Dense-sampled solution. times[0] == 0 and states[0] is the initial state
/// exactly as supplied.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states; // states[i].size() == labels.size()
    std::vector<std::string> labels;
    IntegratorConfig config_echo;
    StepStats step_stats;

    std::size_t sample_count() const { return times.size(); }
    int component_index(const std::string& label) const; // -1 when absent
    std::vector<double> component(const std::string& label) const;
};

Trajectory integrate(const VectorField& field, const std::vector<double>& y0,
                     const IntegratorConfig& cfg);

/// One point of the Fig.-1-style growth curve: value = ln(d ln y / dT).
/// Points where the finite-difference growth rate is <= 0 are omitted
/// (masked), never emitted as NaN.
struct GrowthCurve {
    std::vector<double> times;
    std::vector<double> values;
};

GrowthCurve derivative_of_log(const Trajectory& traj, const std::string& component);

/// Raw central-difference estimate of d(ln y)/dT at every sample (no masking,
/// may be negative). Shares the precondition of derivative_of_log: the
/// component must be strictly positive.
std::vector<double> log_growth_rate(const Trajectory& traj, const std::string& component);

} // namespace masersim
