#include "masersim/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "masersim/io.hpp"

namespace masersim {

namespace {

const std::vector<double> kFig1N0 = {30, 10, 5, 2, 1, 0.5, 0.2, 0.1, 0.03};

std::vector<double> fig67_mu0_list() {
    const double r2 = std::sqrt(2.0), r10 = std::sqrt(10.0), r20 = std::sqrt(20.0),
                 r50 = std::sqrt(50.0);
    return {r2 * 1e6, 2e6, r10 * 1e6, r20 * 1e6, r50 * 1e6, 1e7, r2 * 1e7, 2e7, r10 * 1e7};
}

void apply_axis_value(RunConfig& cfg, const std::string& name, double value) {
    if (name == "variant") {
        const int code = static_cast<int>(value);
        if (code < 0 || code > 4 || static_cast<double>(code) != value)
            raise(ErrorCode::SchemaError, "bad variant code on sweep axis");
        cfg.variant = static_cast<Variant>(code);
    } else if (name == "N0") {
        if (!(value > 0)) raise(ErrorCode::SchemaError, "axis N0 values must be positive");
        cfg.params.mu0 = std::sqrt(cfg.params.N_total / value);
    } else if (name == "mu0") {
        cfg.params.mu0 = value;
    } else if (name == "theta") {
        cfg.params.delta = value * cfg.params.mu0;
    } else if (name == "delta") {
        cfg.params.delta = value;
    } else if (name == "alpha") {
        cfg.params.alpha = value;
    } else if (name == "I0") {
        cfg.params.I0 = value;
    } else if (name == "Gamma_tilde") {
        cfg.params.Gamma = value + 2.0;
    } else if (name == "N_total") {
        cfg.params.N_total = value;
    } else if (name == "Nk0") {
        cfg.params.Nk0 = value;
    } else if (name == "spontaneous_source_factor") {
        cfg.params.spontaneous_source_factor = value;
    } else {
        raise(ErrorCode::SchemaError, "unknown sweep axis parameter: " + name);
    }
}

RunConfig preset_base(Variant v, double t_end, double sample_interval) {
    RunConfig cfg;
    cfg.variant = v;
    cfg.params.N_total = 1e12;
    cfg.params.delta = 0.0;
    cfg.integrator.method = IntegratorMethod::AdaptiveRK45;
    cfg.integrator.rel_tol = 1e-10;
    cfg.integrator.abs_tol = 1e-14;
    cfg.integrator.t_end = t_end;
    cfg.integrator.sample_interval = sample_interval;
    return cfg;
}

} // namespace

SweepSpec figure_preset(const std::string& name) {
    SweepSpec spec;
    spec.seed_label = name;
    const double trad = static_cast<double>(static_cast<int>(Variant::TradNorm));
    const double sep = static_cast<double>(static_cast<int>(Variant::SepNorm));

    if (name == "fig1") {
        spec.base = preset_base(Variant::TradNorm, 20.0, 0.01);
        spec.axes = {{"N0", kFig1N0}};
        spec.base.analyses = {AnalysisKind::GrowthCurve};
    } else if (name == "fig2" || name == "fig3") {
        spec.base = preset_base(Variant::TradNorm, 20.0, 0.01);
        const double N0 = name == "fig2" ? 0.05 : 0.01;
        spec.base.params.mu0 = std::sqrt(spec.base.params.N_total / N0);
        spec.axes = {{"variant", {trad, sep}}};
        spec.base.analyses = {AnalysisKind::Conservation};
    } else if (name == "fig4" || name == "fig5") {
        spec.base = preset_base(Variant::TradNorm, 20.0, 0.01);
        const double N0 = name == "fig4" ? 0.05 : 0.01;
        spec.base.params.mu0 = std::sqrt(spec.base.params.N_total / N0);
        spec.base.params.delta = name == "fig4" ? 2e5 : 4e5;
        spec.axes = {{"variant", {trad, sep}}};
    } else if (name == "fig6" || name == "fig7") {
        // Lossless trailing edges decay only through the slow N0/2 drain, so
        // the half-max recrossing of the largest-mu0 curve lands near T=510;
        // the window must reach past it.
        spec.base = preset_base(Variant::SepNorm, name == "fig6" ? 600.0 : 150.0,
                                name == "fig6" ? 0.05 : 0.02);
        if (name == "fig7") spec.base.params.delta = 4e5;
        spec.axes = {{"mu0", fig67_mu0_list()}};
        spec.base.analyses = {AnalysisKind::PulseMetrics};
    } else if (name == "fig8") {
        spec.base = preset_base(Variant::PulsNorm, 400.0, 0.05);
        const double N0 = 0.05, theta = 0.4, gamma_tilde = 0.1;
        spec.base.params.mu0 = std::sqrt(spec.base.params.N_total / N0);
        spec.base.params.delta = theta * spec.base.params.mu0;
        spec.base.params.Gamma = gamma_tilde + 2.0;
        spec.base.params.I0 = 0.0;
        // Fixed point with a 10% relative kick on M so the oscillation is
        // excited reproducibly.
        NormalizedParams np = spec.base.normalized();
        PulsatingFixedPoint fp = pulsating_fixed_point(np);
        spec.base.initial_state = {1.1 * fp.M, fp.N_inc, fp.N_c};
        spec.base.analyses = {AnalysisKind::PulseTrain, AnalysisKind::Outflow};
    } else {
        raise(ErrorCode::UnknownPreset, "unknown figure preset: " + name);
    }
    return spec;
}

std::size_t sweep_grid_size(const SweepSpec& spec) {
    std::size_t n = 1;
    for (const auto& axis : spec.axes) {
        if (axis.values.empty())
            raise(ErrorCode::SchemaError, "sweep axis '" + axis.name + "' has no values");
        n *= axis.values.size();
    }
    return n;
}

nlohmann::json analyze_trajectory(const Trajectory& traj, const RunConfig& cfg) {
    nlohmann::json out = nlohmann::json::object();
    const std::string comp = cfg.resolved_component();
    const double mu0 = cfg.params.mu0;

    for (AnalysisKind kind : cfg.analyses) {
        const char* key = analysis_kind_name(kind);
        try {
            switch (kind) {
                case AnalysisKind::PulseMetrics: {
                    PulseMetrics m = pulse_metrics(traj, comp);
                    nlohmann::json j{{"component", comp},
                                     {"peak_time", m.peak_time},
                                     {"peak_value", m.peak_value},
                                     {"fwhm", m.fwhm},
                                     {"leading_edge", m.leading_edge},
                                     {"trailing_edge", m.trailing_edge},
                                     {"edge_ratio", m.edge_ratio},
                                     {"rise10_time", m.rise10_time}};
                    if (variant_is_normalized(cfg.variant) && mu0 > 0) {
                        // Durations in dimensional time tau = T / mu0.
                        j["fwhm_tau"] = m.fwhm / mu0;
                        j["leading_edge_tau"] = m.leading_edge / mu0;
                        j["trailing_edge_tau"] = m.trailing_edge / mu0;
                    }
                    out[key] = j;
                    break;
                }
                case AnalysisKind::GrowthCurve: {
                    GrowthCurve g = derivative_of_log(traj, comp);
                    nlohmann::json j{{"component", comp},
                                     {"times", g.times},
                                     {"values", g.values}};
                    const double mean_rate = mean_log_growth_rate(traj, comp);
                    j["mean_rate"] = mean_rate;
                    if (mean_rate > 0) j["plateau_log_rate"] = std::log(mean_rate);
                    j["sustained_level"] = cfg.sustained_level;
                    j["sustained_interval"] =
                        longest_interval_above(traj, comp, cfg.sustained_level);
                    out[key] = j;
                    break;
                }
                case AnalysisKind::PulseTrain: {
                    PulseTrain tr =
                        detect_pulse_train(traj, comp, cfg.prominence_frac, cfg.settle_time);
                    out[key] = {{"component", comp},
                                {"peak_times", tr.peak_times},
                                {"peak_values", tr.peak_values},
                                {"spacings", tr.spacings},
                                {"mean_period", tr.mean_period},
                                {"period_cv", tr.period_cv},
                                {"mean_peak_value", tr.mean_peak_value}};
                    break;
                }
                case AnalysisKind::Outflow: {
                    const double theta = cfg.normalized().theta;
                    double a, b;
                    try {
                        // Integer number of detected periods when a train exists.
                        PulseTrain tr = detect_pulse_train(traj, comp, cfg.prominence_frac,
                                                           cfg.settle_time);
                        a = tr.peak_times.front();
                        b = tr.peak_times.back();
                    } catch (const Error&) {
                        a = traj.times.back() / 2.0; // trailing half
                        b = traj.times.back();
                    }
                    FluxSummary fs = time_averaged_outflow(traj, theta, a, b);
                    out[key] = {{"window_start", fs.window_start},
                                {"window_end", fs.window_end},
                                {"mean_coherent_outflow", fs.mean_coherent_outflow},
                                {"mean_incoherent_outflow", fs.mean_incoherent_outflow},
                                {"mean_total_outflow", fs.mean_total_outflow}};
                    break;
                }
                case AnalysisKind::Conservation: {
                    double drift = variant_is_normalized(cfg.variant)
                                       ? conserved_quantity_drift(traj, cfg.variant,
                                                                  cfg.normalized())
                                       : conserved_quantity_drift_dim(traj, cfg.variant,
                                                                      cfg.params);
                    out[key] = {{"max_relative_drift", drift}};
                    break;
                }
            }
        } catch (const Error& e) {
            out[key] = {{"error", error_code_name(e.code())}, {"message", e.what()}};
        }
    }
    return out;
}

namespace {

RunRecord run_one(std::size_t index, const RunConfig& cfg, const std::string& hash) {
    RunRecord rec;
    rec.index = index;
    rec.resolved = cfg;
    rec.spec_hash = hash;
    const auto start = std::chrono::steady_clock::now();
    try {
        VectorField field = variant_is_normalized(cfg.variant)
                                ? vector_field(cfg.variant, cfg.normalized())
                                : vector_field(cfg.variant, cfg.params);
        rec.trajectory = integrate(field, cfg.resolved_initial(), cfg.integrator);
        rec.analysis = analyze_trajectory(rec.trajectory, cfg);
    } catch (const Error& e) {
        rec.status = error_code_name(e.code());
        rec.error_message = e.what();
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

} // namespace

std::vector<RunRecord> run_sweep(const SweepSpec& spec, int jobs) {
    const std::size_t total = sweep_grid_size(spec);
    if (total > spec.grid_cap)
        raise(ErrorCode::GridTooLarge, "sweep grid has " + std::to_string(total) +
                                           " points, cap is " + std::to_string(spec.grid_cap));
    const std::string hash = sweep_spec_hash(spec);

    std::vector<RunConfig> grid;
    grid.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        RunConfig cfg = spec.base;
        // Lexicographic order: first declared axis is the outermost loop.
        std::size_t rem = idx;
        std::size_t block = total;
        for (const auto& axis : spec.axes) {
            block /= axis.values.size();
            const std::size_t ai = rem / block;
            rem %= block;
            apply_axis_value(cfg, axis.name, axis.values[ai]);
        }
        grid.push_back(std::move(cfg));
    }

    std::vector<RunRecord> records(total);
    if (jobs <= 1 || total <= 1) {
        for (std::size_t i = 0; i < total; ++i) records[i] = run_one(i, grid[i], hash);
        return records;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            records[i] = run_one(i, grid[i], hash);
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), total);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return records;
}

nlohmann::json sweep_spec_to_json(const SweepSpec& spec) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : spec.axes)
        axes.push_back({{"name", a.name}, {"values", a.values}});
    nlohmann::json base = run_config_to_json(spec.base);
    // keep the initial state as authored: an empty one must stay unresolved so
    // a variant axis can still pick each record's own default state
    if (spec.base.initial_state.empty()) base.erase("initial_state");
    if (spec.base.component.empty()) base.erase("component");
    return {{"seed_label", spec.seed_label},
            {"grid_cap", spec.grid_cap},
            {"base", base},
            {"axes", axes}};
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
    reject_unknown_keys(j, {"seed_label", "grid_cap", "base", "axes"}, "sweep_spec");
    SweepSpec spec;
    if (j.contains("seed_label")) spec.seed_label = j["seed_label"].get<std::string>();
    if (j.contains("grid_cap")) spec.grid_cap = j["grid_cap"].get<std::size_t>();
    if (!j.contains("base"))
        raise(ErrorCode::SchemaError, "sweep_spec requires 'base'");
    spec.base = parse_run_config(j["base"]);
    if (j.contains("axes")) {
        for (const auto& a : j["axes"]) {
            reject_unknown_keys(a, {"name", "values"}, "sweep axis");
            SweepAxis axis;
            axis.name = a["name"].get<std::string>();
            axis.values = a["values"].get<std::vector<double>>();
            spec.axes.push_back(std::move(axis));
        }
    }
    return spec;
}

std::string sweep_spec_hash(const SweepSpec& spec) {
    return fnv1a_hex(sweep_spec_to_json(spec).dump());
}

OverlayDataset compare_models(const RunRecord& traditional, const RunRecord& separated) {
    const Trajectory& a = traditional.trajectory;
    const Trajectory& b = separated.trajectory;
    if (a.times.size() != b.times.size())
        raise(ErrorCode::MismatchedGrids, "records have different sample counts");
    for (std::size_t i = 0; i < a.times.size(); ++i)
        if (a.times[i] != b.times[i])
            raise(ErrorCode::MismatchedGrids, "records have different sample times");
    const int iM1 = a.component_index("M1"), iN1 = a.component_index("N1");
    const int iM = b.component_index("M"), iNi = b.component_index("N_inc"),
              iNc = b.component_index("N_c");
    if (iM1 < 0 || iN1 < 0 || iM < 0 || iNi < 0 || iNc < 0)
        raise(ErrorCode::MismatchedGrids,
              "expected a trad-norm / sep-norm record pair for model comparison");

    OverlayDataset ds;
    ds.T = a.times;
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        const double m1 = a.states[i][static_cast<std::size_t>(iM1)];
        const double m = b.states[i][static_cast<std::size_t>(iM)];
        ds.M1.push_back(m1);
        ds.N1.push_back(a.states[i][static_cast<std::size_t>(iN1)]);
        ds.M.push_back(m);
        ds.N_inc.push_back(b.states[i][static_cast<std::size_t>(iNi)]);
        ds.N_c.push_back(b.states[i][static_cast<std::size_t>(iNc)]);
        ds.divergence_M = std::max(ds.divergence_M, std::abs(m1 - m));
    }
    return ds;
}

} // namespace masersim
