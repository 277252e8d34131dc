#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "masersim/masersim.h"

namespace {

using nlohmann::json;

int report(masersim_status st) {
    if (st == MASERSIM_OK) return 0;
    json err{{"error", masersim_last_error_code()},
             {"message", masersim_last_error_message()},
             {"exit_code", static_cast<int>(st)}};
    std::fprintf(stderr, "%s\n", err.dump(2).c_str());
    return static_cast<int>(st);
}

int fail_config(const std::string& code, const std::string& message) {
    json err{{"error", code}, {"message", message}, {"exit_code", 2}};
    std::fprintf(stderr, "%s\n", err.dump(2).c_str());
    return 2;
}

std::string default_out_dir() {
    const char* env = std::getenv("MASERSIM_OUT");
    return env && *env ? env : ".";
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

struct ParamFlags {
    double N0 = 0, theta = 0, mu0 = 0, delta = 0, alpha = 0, I0 = 0;
    double gamma_tilde = 0, n_total = 0, nk0 = 0, spont_factor = 0;
    bool has_N0 = false, has_theta = false, has_mu0 = false, has_delta = false;
    bool has_alpha = false, has_I0 = false, has_gamma_tilde = false;
    bool has_n_total = false, has_nk0 = false, has_spont_factor = false;
};

struct RunFlags {
    std::string variant;
    std::string config_path;
    std::string component;
    std::vector<double> initial_state;
    ParamFlags p;
    double t_end = 0, sample_interval = 0, rel_tol = 0, abs_tol = 0;
    bool has_t_end = false, has_sample_interval = false, has_rel_tol = false,
         has_abs_tol = false;
    std::string method;
    std::vector<std::string> analyses;
    double prominence_frac = 0, settle_time = 0, sustained_level = 0;
    bool has_prominence = false, has_settle = false, has_sustained = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--config", f.config_path, "run config JSON file");
    cmd->add_option("--variant", f.variant,
                    "trad-dim | sep-dim | trad-norm | sep-norm | puls-norm");
    auto num = [&](const char* flag, double& slot, bool& present, const char* help) {
        cmd->add_option_function<double>(
            flag,
            [&slot, &present](double v) {
                slot = v;
                present = true;
            },
            help);
    };
    num("--N0", f.p.N0, f.p.has_N0, "normalized density N/mu0^2");
    num("--theta", f.p.theta, f.p.has_theta, "normalized loss delta/mu0");
    num("--mu0", f.p.mu0, f.p.has_mu0, "initial inversion");
    num("--delta", f.p.delta, f.p.has_delta, "photon loss rate");
    num("--alpha", f.p.alpha, f.p.has_alpha, "spontaneous/stimulated ratio");
    num("--I0", f.p.I0, f.p.has_I0, "pump strength");
    num("--gamma-tilde", f.p.gamma_tilde, f.p.has_gamma_tilde, "net inversion drive");
    num("--n-total", f.p.n_total, f.p.has_n_total, "total molecule count");
    num("--nk0", f.p.nk0, f.p.has_nk0, "initial photon count");
    num("--spont-factor", f.p.spont_factor, f.p.has_spont_factor,
        "incoherent spontaneous source factor (0.5 or 1.0)");
    num("--t-end", f.t_end, f.has_t_end, "integration end time (T units)");
    num("--sample-interval", f.sample_interval, f.has_sample_interval,
        "dense output spacing");
    num("--rel-tol", f.rel_tol, f.has_rel_tol, "adaptive relative tolerance");
    num("--abs-tol", f.abs_tol, f.has_abs_tol, "adaptive absolute tolerance");
    cmd->add_option("--method", f.method, "rk45 (adaptive) or rk4 (fixed step)");
    cmd->add_option("--initial-state", f.initial_state, "initial state override");
    cmd->add_option("--component", f.component, "analysis target component");
    cmd->add_option("--analysis", f.analyses,
                    "pulse_metrics | growth_curve | pulse_train | outflow | conservation");
    cmd->add_flag_callback("--pulse-metrics",
                           [&f] { f.analyses.push_back("pulse_metrics"); });
    cmd->add_flag_callback("--growth-curve",
                           [&f] { f.analyses.push_back("growth_curve"); });
    cmd->add_flag_callback("--pulse-train", [&f] { f.analyses.push_back("pulse_train"); });
    cmd->add_flag_callback("--outflow", [&f] { f.analyses.push_back("outflow"); });
    cmd->add_flag_callback("--conservation",
                           [&f] { f.analyses.push_back("conservation"); });
    num("--prominence-frac", f.prominence_frac, f.has_prominence,
        "pulse-train prominence threshold");
    num("--settle-time", f.settle_time, f.has_settle, "pulse-train transient cutoff");
    num("--sustained-level", f.sustained_level, f.has_sustained,
        "growth-rate sustained-interval level");
}

// Builds the strict run-config document from --config plus flag overrides.
int build_config(const RunFlags& f, std::string& out_json) {
    json cfg = json::object();
    if (!f.config_path.empty()) {
        std::string text;
        if (!read_file(f.config_path, text))
            return fail_config("io_error", "cannot read " + f.config_path);
        try {
            cfg = json::parse(text);
        } catch (const json::exception& e) {
            return fail_config("config_parse", e.what());
        }
        if (cfg.is_object() && cfg.contains("config")) cfg = cfg["config"]; // manifest
    }
    if (!cfg.is_object()) return fail_config("schema_error", "config must be an object");

    if (!f.variant.empty()) cfg["variant"] = f.variant;
    json& params = cfg["params"];
    if (params.is_null()) params = json::object();
    const ParamFlags& p = f.p;
    if (p.has_N0) {
        params["N0"] = p.N0;
        params.erase("mu0");
    }
    if (p.has_mu0) {
        params["mu0"] = p.mu0;
        params.erase("N0");
    }
    if (p.has_theta) {
        params["theta"] = p.theta;
        params.erase("delta");
    }
    if (p.has_delta) {
        params["delta"] = p.delta;
        params.erase("theta");
    }
    if (p.has_alpha) params["alpha"] = p.alpha;
    if (p.has_I0) params["I0"] = p.I0;
    if (p.has_gamma_tilde) {
        params["Gamma_tilde"] = p.gamma_tilde;
        params.erase("Gamma");
    }
    if (p.has_n_total) params["N_total"] = p.n_total;
    if (p.has_nk0) params["Nk0"] = p.nk0;
    if (p.has_spont_factor) params["spontaneous_source_factor"] = p.spont_factor;
    if (params.empty()) cfg.erase("params");

    json& integ = cfg["integrator"];
    if (integ.is_null()) integ = json::object();
    if (f.has_t_end) integ["t_end"] = f.t_end;
    if (f.has_sample_interval) integ["sample_interval"] = f.sample_interval;
    if (f.has_rel_tol) integ["rel_tol"] = f.rel_tol;
    if (f.has_abs_tol) integ["abs_tol"] = f.abs_tol;
    if (!f.method.empty()) integ["method"] = f.method;
    if (integ.empty()) cfg.erase("integrator");

    if (!f.initial_state.empty()) cfg["initial_state"] = f.initial_state;
    if (!f.component.empty()) cfg["component"] = f.component;
    if (!f.analyses.empty()) cfg["analyses"] = f.analyses;
    if (f.has_prominence) cfg["prominence_frac"] = f.prominence_frac;
    if (f.has_settle) cfg["settle_time"] = f.settle_time;
    if (f.has_sustained) cfg["sustained_level"] = f.sustained_level;

    out_json = cfg.dump();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-level maser / cosmic-emitter simulation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", masersim_version());

    std::string out_dir = default_out_dir();

    auto* sim = app.add_subcommand("simulate", "integrate one model run");
    RunFlags sim_flags;
    add_run_flags(sim, sim_flags);
    sim->add_option("--out", out_dir, "output directory (default $MASERSIM_OUT or .)");

    auto* fig = app.add_subcommand("figure", "run a figure preset or sweep spec");
    std::string fig_name, fig_spec_path, fig_out = default_out_dir();
    int jobs = 1;
    fig->add_option("name", fig_name, "fig1..fig8");
    fig->add_option("--spec", fig_spec_path, "sweep spec JSON file");
    fig->add_option("--jobs", jobs, "worker thread count (1 = reference mode)");
    fig->add_option("--out", fig_out, "output directory (default $MASERSIM_OUT or .)");

    auto* ana = app.add_subcommand("analyze", "re-analyze a stored trajectory CSV");
    RunFlags ana_flags;
    std::string ana_csv, ana_out;
    ana->add_option("csv", ana_csv, "trajectory CSV path")->required();
    add_run_flags(ana, ana_flags);
    ana->add_option("--out", ana_out, "output JSON path (default analysis.json)");

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) {
        std::string cfg;
        if (int rc = build_config(sim_flags, cfg)) return rc;
        return report(masersim_cmd_simulate(cfg.c_str(), out_dir.c_str()));
    }

    if (fig->parsed()) {
        if (fig_name.empty() == fig_spec_path.empty())
            return fail_config("schema_error", "give exactly one of a preset name or --spec");
        if (!fig_name.empty())
            return report(
                masersim_cmd_figure_preset(fig_name.c_str(), fig_out.c_str(), jobs));
        std::string spec;
        if (!read_file(fig_spec_path, spec))
            return fail_config("io_error", "cannot read " + fig_spec_path);
        return report(masersim_cmd_figure_spec(spec.c_str(), fig_out.c_str(), jobs));
    }

    if (ana->parsed()) {
        std::string cfg;
        if (int rc = build_config(ana_flags, cfg)) return rc;
        if (ana_out.empty())
            ana_out = (std::filesystem::path(default_out_dir()) / "analysis.json").string();
        return report(masersim_cmd_analyze(ana_csv.c_str(), cfg.c_str(), ana_out.c_str()));
    }

    return 0;
}
