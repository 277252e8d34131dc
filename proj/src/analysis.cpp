#include "masersim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace masersim {

namespace {

// Vertex of the parabola through three equidistant-or-not samples around the
// discrete maximum.
void refine_peak(const std::vector<double>& t, const std::vector<double>& y,
                 std::size_t i, double& tp, double& vp) {
    tp = t[i];
    vp = y[i];
    if (i == 0 || i + 1 >= t.size()) return;
    const double t0 = t[i - 1], t1 = t[i], t2 = t[i + 1];
    const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
    const double d01 = (y1 - y0) / (t1 - t0);
    const double d12 = (y2 - y1) / (t2 - t1);
    const double second = (d12 - d01) / (t2 - t0);
    if (second >= 0) return; // numerically flat top
    // Newton form: p(t) = y0 + d01 (t - t0) + second (t - t0)(t - t1)
    const double tstar = (t0 + t1) / 2.0 - d01 / (2.0 * second);
    if (tstar > t0 && tstar < t2) {
        tp = tstar;
        vp = y0 + d01 * (tstar - t0) + second * (tstar - t0) * (tstar - t1);
        vp = std::max(vp, y1);
    }
}

// Interpolated time where the signal crosses `level` between samples j and j+1.
double cross_time(const std::vector<double>& t, const std::vector<double>& y,
                  std::size_t j, double level) {
    const double frac = (level - y[j]) / (y[j + 1] - y[j]);
    return t[j] + frac * (t[j + 1] - t[j]);
}

} // namespace

PulseMetrics pulse_metrics(const Trajectory& traj, const std::string& component) {
    const std::vector<double> y = traj.component(component);
    const std::vector<double>& t = traj.times;
    if (y.size() < 3)
        raise(ErrorCode::NoPulse, "trajectory too short for pulse metrics");

    std::size_t imax = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
        if (y[i] > y[imax]) imax = i;
    if (imax == 0 || imax + 1 >= y.size())
        raise(ErrorCode::NoPulse, "global maximum of '" + component +
                                      "' is not strictly inside the time window");
    const double ymin = *std::min_element(y.begin(), y.end());
    if (!(y[imax] > ymin))
        raise(ErrorCode::NoPulse, "signal '" + component + "' is flat");

    PulseMetrics m;
    refine_peak(t, y, imax, m.peak_time, m.peak_value);
    const double half = m.peak_value / 2.0;
    const double tenth = m.peak_value / 10.0;

    // Last upward half-max crossing before the peak.
    bool found_lead = false;
    double t_half_up = 0;
    for (std::size_t j = imax; j-- > 0;) {
        if (y[j] < half && y[j + 1] >= half) {
            t_half_up = cross_time(t, y, j, half);
            found_lead = true;
            break;
        }
    }
    if (!found_lead)
        raise(ErrorCode::NoPulse, "signal '" + component +
                                      "' never crosses half-maximum before its peak");

    bool found_rise10 = false;
    double t_tenth_up = 0;
    for (std::size_t j = imax; j-- > 0;) {
        if (y[j] < tenth && y[j + 1] >= tenth) {
            t_tenth_up = cross_time(t, y, j, tenth);
            found_rise10 = true;
            break;
        }
    }

    // First downward half-max crossing after the peak.
    bool found_trail = false;
    double t_half_down = 0;
    for (std::size_t j = imax; j + 1 < y.size(); ++j) {
        if (y[j] >= half && y[j + 1] < half) {
            t_half_down = cross_time(t, y, j, half);
            found_trail = true;
            break;
        }
    }
    if (!found_trail)
        raise(ErrorCode::UnboundedPulse,
              "signal '" + component +
                  "' never falls back below half-maximum before t_end (window too small?)");

    m.leading_edge = m.peak_time - t_half_up;
    m.trailing_edge = t_half_down - m.peak_time;
    m.fwhm = m.leading_edge + m.trailing_edge;
    m.edge_ratio = m.leading_edge > 0 ? m.trailing_edge / m.leading_edge : 0.0;
    m.rise10_time = found_rise10 ? m.peak_time - t_tenth_up : m.leading_edge;
    return m;
}

PulseTrain detect_pulse_train(const Trajectory& traj, const std::string& component,
                              double prominence_frac, double settle_time) {
    if (!(prominence_frac > 0) || !(prominence_frac < 1))
        raise(ErrorCode::InvalidArgument, "prominence_frac must lie in (0, 1)");
    const std::vector<double> y = traj.component(component);
    const std::vector<double>& t = traj.times;
    const double gmax = *std::max_element(y.begin(), y.end());
    const double gmin = *std::min_element(y.begin(), y.end());
    const double min_prom = prominence_frac * (gmax - gmin);

    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) candidates.push_back(i);
    }

    PulseTrain train;
    for (std::size_t i : candidates) {
        // Topographic prominence: lowest point on the way to the nearest
        // higher ground, on each side; prominence = peak - max(left, right).
        double left_min = y[i], right_min = y[i];
        for (std::size_t j = i; j-- > 0;) {
            if (y[j] > y[i]) break;
            left_min = std::min(left_min, y[j]);
            if (j == 0) break;
        }
        for (std::size_t j = i + 1; j < y.size(); ++j) {
            if (y[j] > y[i]) break;
            right_min = std::min(right_min, y[j]);
        }
        const double prom = y[i] - std::max(left_min, right_min);
        if (prom < min_prom) continue;
        if (t[i] < settle_time) continue;
        double tp, vp;
        refine_peak(t, y, i, tp, vp);
        train.peak_times.push_back(tp);
        train.peak_values.push_back(vp);
    }

    if (train.peak_times.size() < 2)
        raise(ErrorCode::FewerThanTwoPeaks,
              "fewer than two pulses detected; no period measurable");

    for (std::size_t i = 1; i < train.peak_times.size(); ++i)
        train.spacings.push_back(train.peak_times[i] - train.peak_times[i - 1]);
    double sum = 0;
    for (double s : train.spacings) sum += s;
    train.mean_period = sum / static_cast<double>(train.spacings.size());
    double var = 0;
    for (double s : train.spacings) var += (s - train.mean_period) * (s - train.mean_period);
    var /= static_cast<double>(train.spacings.size());
    train.period_cv = train.mean_period > 0 ? std::sqrt(var) / train.mean_period : 0.0;
    double psum = 0;
    for (double v : train.peak_values) psum += v;
    train.mean_peak_value = psum / static_cast<double>(train.peak_values.size());
    return train;
}

FluxSummary time_averaged_outflow(const Trajectory& traj, double theta,
                                  double window_start, double window_end) {
    const std::vector<double>& t = traj.times;
    if (!(window_end > window_start) || window_start < t.front() - 1e-12 ||
        window_end > t.back() + 1e-12)
        raise(ErrorCode::EmptyWindow, "averaging window is empty or outside the trajectory");

    int ic = traj.component_index("N_c");
    int ii = traj.component_index("N_inc");
    if (ic < 0) ic = traj.component_index("N_k");
    if (ic < 0 || ii < 0)
        raise(ErrorCode::InvalidArgument,
              "trajectory lacks photon components for the outflow balance");

    auto value_at = [&](int comp, double tq) {
        auto it = std::lower_bound(t.begin(), t.end(), tq);
        std::size_t j = static_cast<std::size_t>(it - t.begin());
        if (j == 0) return traj.states[0][static_cast<std::size_t>(comp)];
        if (j >= t.size()) return traj.states.back()[static_cast<std::size_t>(comp)];
        const double f = (tq - t[j - 1]) / (t[j] - t[j - 1]);
        const double a = traj.states[j - 1][static_cast<std::size_t>(comp)];
        const double b = traj.states[j][static_cast<std::size_t>(comp)];
        return a + f * (b - a);
    };

    // Trapezoidal average over [window_start, window_end] on the sample grid,
    // with interpolated endpoint values.
    auto average = [&](int comp) {
        double acc = 0;
        double prev_t = window_start;
        double prev_v = value_at(comp, window_start);
        for (std::size_t j = 0; j < t.size(); ++j) {
            if (t[j] <= window_start) continue;
            if (t[j] >= window_end) break;
            const double v = traj.states[j][static_cast<std::size_t>(comp)];
            acc += 0.5 * (prev_v + v) * (t[j] - prev_t);
            prev_t = t[j];
            prev_v = v;
        }
        const double v_end = value_at(comp, window_end);
        acc += 0.5 * (prev_v + v_end) * (window_end - prev_t);
        return acc / (window_end - window_start);
    };

    FluxSummary fs;
    fs.window_start = window_start;
    fs.window_end = window_end;
    fs.mean_coherent_outflow = theta * average(ic);
    fs.mean_incoherent_outflow = theta * average(ii);
    fs.mean_total_outflow = fs.mean_coherent_outflow + fs.mean_incoherent_outflow;
    return fs;
}

namespace {
double drift_of(const Trajectory& traj, const std::vector<ConservedQuantity>& qs) {
    double worst = 0;
    for (const auto& q : qs) {
        const double q0 = q.eval(traj.states.front());
        const double scale = std::max(std::abs(q0), 1.0);
        for (const auto& s : traj.states)
            worst = std::max(worst, std::abs(q.eval(s) - q0) / scale);
    }
    return worst;
}
} // namespace

double conserved_quantity_drift(const Trajectory& traj, Variant v, const NormalizedParams& np) {
    return drift_of(traj, conserved_quantities(v, np));
}

double conserved_quantity_drift_dim(const Trajectory& traj, Variant v, const PhysicalParams& p) {
    return drift_of(traj, conserved_quantities_dim(v, p));
}

double mean_log_growth_rate(const Trajectory& traj, const std::string& component) {
    const std::vector<double> y = traj.component(component);
    const std::vector<double>& t = traj.times;
    if (!(y.front() > 0) || !(y.back() > 0))
        raise(ErrorCode::NonPositiveComponent,
              "component '" + component + "' must be strictly positive");
    return std::log(y.back() / y.front()) / (t.back() - t.front());
}

double longest_interval_above(const Trajectory& traj, const std::string& component,
                              double level) {
    const std::vector<double> r = log_growth_rate(traj, component);
    const std::vector<double>& t = traj.times;
    double best = 0, start = 0;
    bool in_run = false;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] >= level) {
            if (!in_run) {
                start = t[i];
                in_run = true;
            }
            best = std::max(best, t[i] - start);
        } else {
            in_run = false;
        }
    }
    return best;
}

} // namespace masersim
