#include "masersim/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <set>

#include "masersim/io.hpp"
#include "masersim/version.hpp"

namespace masersim {

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConfigParse:
        case ErrorCode::SchemaError:
        case ErrorCode::InvalidArgument:
        case ErrorCode::UnknownVariant:
        case ErrorCode::UnknownPreset:
        case ErrorCode::ZeroInversionScale:
        case ErrorCode::ZeroLoss:
        case ErrorCode::NonPositiveLength:
        case ErrorCode::NonPositiveRadius:
            return 2;
        case ErrorCode::Io:
            return 4;
        default:
            return 3;
    }
}

nlohmann::json error_json(const Error& e) {
    return {{"error", error_code_name(e.code())},
            {"message", e.what()},
            {"exit_code", exit_code_for(e.code())}};
}

namespace {

std::string utc_timestamp() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json step_stats_json(const StepStats& s) {
    return {{"accepted", s.accepted},
            {"rejected", s.rejected},
            {"rhs_evaluations", s.rhs_evaluations}};
}

std::string record_basename(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "run_%03zu", index);
    return buf;
}

// Scalar (number or string) leaves of an analysis object, keyed
// "<analysis>.<field>", for the sweep summary table.
std::map<std::string, std::string> flatten_analysis(const nlohmann::json& analysis) {
    std::map<std::string, std::string> out;
    for (auto it = analysis.begin(); it != analysis.end(); ++it) {
        if (!it.value().is_object()) continue;
        for (auto f = it.value().begin(); f != it.value().end(); ++f) {
            const std::string key = it.key() + "." + f.key();
            if (f.value().is_number())
                out[key] = format_double(f.value().get<double>());
            else if (f.value().is_string() && f.key() == "error")
                out[key] = f.value().get<std::string>();
        }
    }
    return out;
}

// Axis value at a grid index, same lexicographic decomposition as run_sweep.
std::vector<double> axis_values_at(const SweepSpec& spec, std::size_t index,
                                   std::size_t total) {
    std::vector<double> vals;
    std::size_t rem = index, block = total;
    for (const auto& axis : spec.axes) {
        block /= axis.values.size();
        vals.push_back(axis.values[rem / block]);
        rem %= block;
    }
    return vals;
}

std::string summary_csv(const SweepSpec& spec, const std::vector<RunRecord>& records) {
    const std::size_t total = records.size();
    std::vector<std::map<std::string, std::string>> flat;
    std::set<std::string> keys;
    for (const auto& rec : records) {
        flat.push_back(flatten_analysis(rec.analysis));
        for (const auto& kv : flat.back()) keys.insert(kv.first);
    }

    std::string csv = "index";
    for (const auto& axis : spec.axes) csv += "," + axis.name;
    csv += ",status";
    for (const auto& k : keys) csv += "," + k;
    csv += '\n';

    for (std::size_t i = 0; i < total; ++i) {
        csv += std::to_string(records[i].index);
        for (double v : axis_values_at(spec, i, total)) csv += "," + format_double(v);
        csv += "," + records[i].status;
        for (const auto& k : keys) {
            csv += ',';
            auto it = flat[i].find(k);
            if (it != flat[i].end()) csv += it->second;
        }
        csv += '\n';
    }
    return csv;
}

std::string overlay_csv(const OverlayDataset& ds) {
    std::string csv = "T,M1,N1,M,N_inc,N_c\n";
    for (std::size_t i = 0; i < ds.T.size(); ++i) {
        csv += format_double(ds.T[i]);
        csv += "," + format_double(ds.M1[i]);
        csv += "," + format_double(ds.N1[i]);
        csv += "," + format_double(ds.M[i]);
        csv += "," + format_double(ds.N_inc[i]);
        csv += "," + format_double(ds.N_c[i]);
        csv += '\n';
    }
    return csv;
}

std::string growth_csv(const GrowthCurve& g) {
    std::string csv = "T,log_growth_rate\n";
    for (std::size_t i = 0; i < g.times.size(); ++i) {
        csv += format_double(g.times[i]);
        csv += "," + format_double(g.values[i]);
        csv += '\n';
    }
    return csv;
}

std::string axis_label(const SweepSpec& spec, std::size_t record_index, std::size_t total) {
    std::string label;
    const auto vals = axis_values_at(spec, record_index, total);
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        if (a) label += ", ";
        if (spec.axes[a].name == "variant")
            label += variant_name(static_cast<Variant>(static_cast<int>(vals[a])));
        else
            label += spec.axes[a].name + "=" + format_double(vals[a]);
    }
    return label.empty() ? record_basename(record_index) : label;
}

std::string figure_svg(const SweepSpec& spec, const std::string& preset_name,
                       const std::vector<RunRecord>& records) {
    std::vector<SvgSeries> series;
    SvgOptions opt;
    opt.title = preset_name.empty() ? std::string("sweep") : preset_name;
    const std::size_t total = records.size();

    if (preset_name == "fig1") {
        // Growth rate d(ln N1)/dT on a log axis; the stored growth curve is
        // already ln(rate), so exponentiate back.
        opt.log_y = true;
        opt.y_label = "d(ln N1)/dT";
        for (const auto& rec : records) {
            if (rec.status != "ok") continue;
            GrowthCurve g = derivative_of_log(rec.trajectory, rec.resolved.resolved_component());
            SvgSeries s;
            s.label = axis_label(spec, rec.index, total);
            s.x = g.times;
            for (double v : g.values) s.y.push_back(std::exp(v));
            series.push_back(std::move(s));
        }
    } else {
        opt.y_label = "component value";
        for (const auto& rec : records) {
            if (rec.status != "ok") continue;
            const bool overlay_pair = total == 2 && !spec.axes.empty() &&
                                      spec.axes[0].name == "variant";
            const Trajectory& traj = rec.trajectory;
            std::vector<std::string> wanted;
            if (overlay_pair || preset_name == "fig8")
                wanted = traj.labels; // every component of both models
            else
                wanted = {rec.resolved.resolved_component()};
            for (const auto& comp : wanted) {
                SvgSeries s;
                s.label = overlay_pair || preset_name == "fig8"
                              ? comp
                              : axis_label(spec, rec.index, total);
                s.x = traj.times;
                s.y = traj.component(comp);
                series.push_back(std::move(s));
            }
        }
    }
    return render_svg(series, opt);
}

} // namespace

void cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    VectorField field = variant_is_normalized(cfg.variant)
                            ? vector_field(cfg.variant, cfg.normalized())
                            : vector_field(cfg.variant, cfg.params);
    Trajectory traj = integrate(field, cfg.resolved_initial(), cfg.integrator);
    nlohmann::json analysis = analyze_trajectory(traj, cfg);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const nlohmann::json config = run_config_to_json(cfg);
    nlohmann::json manifest{{"command", "simulate"},
                            {"version", kVersion},
                            {"config", config},
                            {"spec_hash", fnv1a_hex(config.dump())},
                            {"created_utc", utc_timestamp()},
                            {"wall_seconds", wall},
                            {"step_stats", step_stats_json(traj.step_stats)}};

    // All content is ready; now write (atomically, file by file).
    write_trajectory_csv(out_dir / "trajectory.csv", traj);
    atomic_write(out_dir / "analysis.json", dump_json(analysis));
    atomic_write(out_dir / "manifest.json", dump_json(manifest));
}

void cmd_figure(const SweepSpec& spec, const std::string& preset_name,
                const std::filesystem::path& out_dir, int jobs) {
    const std::vector<RunRecord> records = run_sweep(spec, jobs);
    const std::size_t total = records.size();

    nlohmann::json rec_meta = nlohmann::json::array();
    for (const auto& rec : records) {
        nlohmann::json m{{"index", rec.index},
                         {"file", record_basename(rec.index) + ".csv"},
                         {"status", rec.status},
                         {"config", run_config_to_json(rec.resolved)},
                         {"wall_seconds", rec.wall_seconds},
                         {"analysis", rec.analysis}};
        if (rec.status == "ok")
            m["step_stats"] = step_stats_json(rec.trajectory.step_stats);
        else
            m["error_message"] = rec.error_message;
        rec_meta.push_back(std::move(m));
    }
    nlohmann::json manifest{{"command", "figure"},
                            {"preset", preset_name},
                            {"version", kVersion},
                            {"sweep", sweep_spec_to_json(spec)},
                            {"spec_hash", sweep_spec_hash(spec)},
                            {"created_utc", utc_timestamp()},
                            {"jobs", jobs},
                            {"records", rec_meta}};

    for (const auto& rec : records) {
        if (rec.status != "ok") continue;
        write_trajectory_csv(out_dir / (record_basename(rec.index) + ".csv"),
                             rec.trajectory);
    }
    atomic_write(out_dir / "summary.csv", summary_csv(spec, records));

    if (preset_name == "fig1") {
        for (const auto& rec : records) {
            if (rec.status != "ok") continue;
            GrowthCurve g =
                derivative_of_log(rec.trajectory, rec.resolved.resolved_component());
            char name[24];
            std::snprintf(name, sizeof(name), "growth_%03zu.csv", rec.index);
            atomic_write(out_dir / name, growth_csv(g));
        }
    }

    const bool is_pair = total == 2 && !spec.axes.empty() && spec.axes[0].name == "variant";
    if (is_pair && records[0].status == "ok" && records[1].status == "ok") {
        OverlayDataset ds = compare_models(records[0], records[1]);
        atomic_write(out_dir / "overlay.csv", overlay_csv(ds));
        manifest["divergence_M"] = ds.divergence_M;
    }

    const std::string svg_name =
        (preset_name.empty() ? std::string("sweep") : preset_name) + ".svg";
    atomic_write(out_dir / svg_name, figure_svg(spec, preset_name, records));
    atomic_write(out_dir / "manifest.json", dump_json(manifest));
}

bool cmd_analyze(const std::filesystem::path& csv_path, const RunConfig& cfg,
                 const std::filesystem::path& out_path) {
    Trajectory traj = read_trajectory_csv(csv_path);
    const auto expected = variant_labels(cfg.variant);
    if (traj.labels != expected)
        raise(ErrorCode::SchemaError,
              csv_path.string() + ": columns do not match variant " +
                  variant_name(cfg.variant));
    nlohmann::json analysis = analyze_trajectory(traj, cfg);
    atomic_write(out_path, dump_json(analysis));
    for (auto it = analysis.begin(); it != analysis.end(); ++it)
        if (it.value().is_object() && it.value().contains("error")) return false;
    return true;
}

} // namespace masersim
