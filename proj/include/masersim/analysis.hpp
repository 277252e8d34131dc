#pragma once

#include "masersim/models.hpp"
#include "masersim/ode.hpp"

namespace masersim {

/// Shape descriptors of a single pulse. All durations are in the trajectory's
/// time units; fwhm == leading_edge + trailing_edge by construction.
struct PulseMetrics {
    double peak_time = 0;
    double peak_value = 0;
    double fwhm = 0;
    double leading_edge = 0;  // last upward half-max crossing -> peak
    double trailing_edge = 0; // peak -> next downward half-max crossing
    double edge_ratio = 0;    // trailing / leading
    double rise10_time = 0;   // 10%-of-peak crossing -> peak
};

struct PulseTrain {
    std::vector<double> peak_times;
    std::vector<double> peak_values;
    std::vector<double> spacings;
    double mean_period = 0;
    double period_cv = 0; // coefficient of variation of the spacings
    double mean_peak_value = 0;
};

struct FluxSummary {
    double window_start = 0;
    double window_end = 0;
    double mean_coherent_outflow = 0;   // theta * <N_c>
    double mean_incoherent_outflow = 0; // theta * <N_inc>
    double mean_total_outflow = 0;
};

PulseMetrics pulse_metrics(const Trajectory& traj, const std::string& component);

/// Local maxima with topographic prominence >= prominence_frac * signal range.
/// Peaks before settle_time are discarded (transient suppression).
PulseTrain detect_pulse_train(const Trajectory& traj, const std::string& component,
                              double prominence_frac, double settle_time = 0.0);

FluxSummary time_averaged_outflow(const Trajectory& traj, double theta,
                                  double window_start, double window_end);

/// Max over samples of |Q(t) - Q(0)| / max(|Q(0)|, 1) over the variant's
/// conserved combinations.
double conserved_quantity_drift(const Trajectory& traj, Variant v, const NormalizedParams& np);
double conserved_quantity_drift_dim(const Trajectory& traj, Variant v, const PhysicalParams& p);

/// Characteristic sustained growth level of a Fig.-1-style curve: the mean of
/// d(ln y)/dT over the whole trajectory, i.e. total e-foldings / duration.
double mean_log_growth_rate(const Trajectory& traj, const std::string& component);

/// Length of the longest contiguous time interval with d(ln y)/dT >= level.
double longest_interval_above(const Trajectory& traj, const std::string& component,
                              double level);

} // namespace masersim
