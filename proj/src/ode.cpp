#include "masersim/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace masersim {

namespace {

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th-order embedded weights.
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

struct Sampler {
    const IntegratorConfig& cfg;
    Trajectory& out;
    std::size_t next = 1; // sample 0 is the initial state
    std::vector<double> sample_times;

    Sampler(const IntegratorConfig& c, Trajectory& t) : cfg(c), out(t) {
        double si = cfg.sample_interval;
        std::size_t n = static_cast<std::size_t>(std::floor(cfg.t_end / si + 1e-9));
        sample_times.reserve(n + 2);
        for (std::size_t j = 0; j <= n; ++j) sample_times.push_back(static_cast<double>(j) * si);
        if (sample_times.back() < cfg.t_end - 1e-12 * cfg.t_end)
            sample_times.push_back(cfg.t_end);
    }

    // Cubic Hermite interpolation over an accepted step [t0, t1].
    void emit(double t0, double t1, const std::vector<double>& y0,
              const std::vector<double>& y1, const std::vector<double>& f0,
              const std::vector<double>& f1) {
        double h = t1 - t0;
        while (next < sample_times.size() && sample_times[next] <= t1 + 1e-12 * std::max(1.0, t1)) {
            double t = sample_times[next];
            double s = (t - t0) / h;
            // Increment form of the cubic Hermite basis: exact (no roundoff)
            // for constant solutions, since h00 + h01 == 1 identically.
            double h10 = s * (1 - s) * (1 - s);
            double h01 = s * s * (3 - 2 * s);
            double h11 = s * s * (s - 1);
            std::vector<double> y(y0.size());
            for (std::size_t i = 0; i < y.size(); ++i)
                y[i] = y0[i] + h01 * (y1[i] - y0[i]) + h10 * h * f0[i] + h11 * h * f1[i];
            out.times.push_back(t);
            out.states.push_back(std::move(y));
            ++next;
        }
    }

    bool done() const { return next >= sample_times.size(); }
};

} // namespace

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0))
        raise(ErrorCode::InvalidArgument, "integrator tolerances must be positive");
    if (!(initial_step > 0) || !(initial_step <= max_step))
        raise(ErrorCode::InvalidArgument, "require 0 < initial_step <= max_step");
    if (!(t_end > 0))
        raise(ErrorCode::InvalidArgument, "t_end must be positive");
    if (!(sample_interval > 0))
        raise(ErrorCode::InvalidArgument, "sample_interval must be positive");
    if (max_steps == 0)
        raise(ErrorCode::InvalidArgument, "max_steps must be positive");
}

int Trajectory::component_index(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<int>(i);
    return -1;
}

std::vector<double> Trajectory::component(const std::string& label) const {
    int idx = component_index(label);
    if (idx < 0)
        raise(ErrorCode::InvalidArgument, "unknown trajectory component: " + label);
    std::vector<double> v;
    v.reserve(states.size());
    for (const auto& s : states) v.push_back(s[static_cast<std::size_t>(idx)]);
    return v;
}

namespace {

Trajectory integrate_rk45(const VectorField& field, const std::vector<double>& y0,
                          const IntegratorConfig& cfg) {
    const int n = field.dimension;
    Trajectory out;
    out.labels = field.component_labels;
    out.config_echo = cfg;
    out.times.push_back(0.0);
    out.states.push_back(y0);

    Sampler sampler(cfg, out);

    std::vector<double> y = y0, ynew(n), yerr(n);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n);
    double t = 0.0;
    double h = std::min(cfg.initial_step, cfg.max_step);
    double err_prev = 1.0;

    field.eval(t, y.data(), k1.data());
    out.step_stats.rhs_evaluations++;
    if (!all_finite(k1))
        raise(ErrorCode::NonFiniteState, "derivative is not finite at the initial state");

    while (t < cfg.t_end && !sampler.done()) {
        if (out.step_stats.accepted + out.step_stats.rejected >= cfg.max_steps)
            raise(ErrorCode::MaxStepsExceeded, "integration exceeded max_steps");
        if (t + h > cfg.t_end) h = cfg.t_end - t;
        if (!(t + h > t))
            raise(ErrorCode::StepUnderflow, "adaptive step underflowed at t=" + std::to_string(t));

        auto stage = [&](double c, std::vector<double>& k, auto&&... terms) {
            for (int i = 0; i < n; ++i) {
                double acc = y[i];
                ((acc += h * terms.first * (*terms.second)[i]), ...);
                ytmp[i] = acc;
            }
            field.eval(t + c * h, ytmp.data(), k.data());
            out.step_stats.rhs_evaluations++;
        };
        using P = std::pair<double, const std::vector<double>*>;
        stage(c2, k2, P{a21, &k1});
        stage(c3, k3, P{a31, &k1}, P{a32, &k2});
        stage(c4, k4, P{a41, &k1}, P{a42, &k2}, P{a43, &k3});
        stage(c5, k5, P{a51, &k1}, P{a52, &k2}, P{a53, &k3}, P{a54, &k4});
        stage(1.0, k6, P{a61, &k1}, P{a62, &k2}, P{a63, &k3}, P{a64, &k4}, P{a65, &k5});
        for (int i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        field.eval(t + h, ynew.data(), k7.data());
        out.step_stats.rhs_evaluations++;

        bool finite = all_finite(ynew) && all_finite(k7);
        double err = 0.0;
        if (finite) {
            for (int i = 0; i < n; ++i) {
                double y4 = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                        e6 * k6[i] + e7 * k7[i]);
                double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err = std::max(err, std::abs(ynew[i] - y4) / scale);
            }
        } else {
            err = std::numeric_limits<double>::infinity();
        }

        if (finite && err <= 1.0) {
            sampler.emit(t, t + h, y, ynew, k1, k7);
            t += h;
            y = ynew;
            k1 = k7; // FSAL
            out.step_stats.accepted++;
            // PI controller (Gustafsson): order-5 error estimate.
            double e = std::max(err, 1e-10);
            double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
            fac = std::clamp(fac, 0.2, 5.0);
            h = std::min(h * fac, cfg.max_step);
            err_prev = e;
        } else {
            out.step_stats.rejected++;
            if (!finite) {
                h *= 0.25;
                if (!(t + h > t))
                    raise(ErrorCode::NonFiniteState,
                          "state or derivative became non-finite at t=" + std::to_string(t));
            } else {
                double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
                h *= fac;
            }
        }
    }
    return out;
}

Trajectory integrate_rk4(const VectorField& field, const std::vector<double>& y0,
                         const IntegratorConfig& cfg) {
    const int n = field.dimension;
    Trajectory out;
    out.labels = field.component_labels;
    out.config_echo = cfg;
    out.times.push_back(0.0);
    out.states.push_back(y0);

    Sampler sampler(cfg, out);

    const double h0 = cfg.initial_step;
    std::vector<double> y = y0, ynew(n);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), f1(n), ytmp(n);
    std::uint64_t step = 0;
    double t = 0.0;
    field.eval(0.0, y.data(), k1.data());
    out.step_stats.rhs_evaluations++;

    while (t < cfg.t_end && !sampler.done()) {
        if (step >= cfg.max_steps)
            raise(ErrorCode::MaxStepsExceeded, "integration exceeded max_steps");
        double tnext = static_cast<double>(step + 1) * h0;
        if (tnext > cfg.t_end) tnext = cfg.t_end;
        double h = tnext - t;
        if (!(h > 0))
            raise(ErrorCode::StepUnderflow, "fixed step underflowed at t=" + std::to_string(t));

        for (int i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
        field.eval(t + 0.5 * h, ytmp.data(), k2.data());
        for (int i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
        field.eval(t + 0.5 * h, ytmp.data(), k3.data());
        for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * k3[i];
        field.eval(t + h, ytmp.data(), k4.data());
        for (int i = 0; i < n; ++i)
            ynew[i] = y[i] + (h / 6.0) * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        field.eval(tnext, ynew.data(), f1.data());
        out.step_stats.rhs_evaluations += 4;

        if (!all_finite(ynew) || !all_finite(f1))
            raise(ErrorCode::NonFiniteState,
                  "state or derivative became non-finite at t=" + std::to_string(tnext));

        sampler.emit(t, tnext, y, ynew, k1, f1);
        y = ynew;
        k1 = f1;
        t = tnext;
        ++step;
        out.step_stats.accepted++;
    }
    return out;
}

} // namespace

Trajectory integrate(const VectorField& field, const std::vector<double>& y0,
                     const IntegratorConfig& cfg) {
    cfg.validate();
    if (field.dimension <= 0 || !field.eval)
        raise(ErrorCode::InvalidArgument, "vector field is empty");
    if (static_cast<int>(y0.size()) != field.dimension)
        raise(ErrorCode::InvalidArgument, "initial state length does not match field dimension");
    if (!all_finite(y0))
        raise(ErrorCode::InvalidArgument, "initial state contains non-finite values");
    if (cfg.method == IntegratorMethod::FixedStepRK4)
        return integrate_rk4(field, y0, cfg);
    return integrate_rk45(field, y0, cfg);
}

std::vector<double> log_growth_rate(const Trajectory& traj, const std::string& component) {
    std::vector<double> y = traj.component(component);
    const std::vector<double>& t = traj.times;
    if (y.size() < 3)
        raise(ErrorCode::InvalidArgument, "trajectory too short for finite differences");
    std::vector<double> lny(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0))
            raise(ErrorCode::NonPositiveComponent,
                  "component '" + component + "' is not strictly positive at T=" +
                      std::to_string(t[i]));
        lny[i] = std::log(y[i]);
    }
    std::size_t m = y.size();
    std::vector<double> r(m);
    r[0] = (lny[1] - lny[0]) / (t[1] - t[0]);
    r[m - 1] = (lny[m - 1] - lny[m - 2]) / (t[m - 1] - t[m - 2]);
    for (std::size_t i = 1; i + 1 < m; ++i)
        r[i] = (lny[i + 1] - lny[i - 1]) / (t[i + 1] - t[i - 1]);
    return r;
}

GrowthCurve derivative_of_log(const Trajectory& traj, const std::string& component) {
    std::vector<double> r = log_growth_rate(traj, component);
    GrowthCurve out;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] > 0) {
            out.times.push_back(traj.times[i]);
            out.values.push_back(std::log(r[i]));
        }
    }
    return out;
}

} // namespace masersim
