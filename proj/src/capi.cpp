#include "masersim/masersim.h"

#include <cstring>
#include <string>

#include "masersim/commands.hpp"
#include "masersim/io.hpp"
#include "masersim/version.hpp"

using namespace masersim;

namespace {

thread_local std::string g_error_code = "ok";
thread_local std::string g_error_message;

masersim_status fail(const Error& e) {
    g_error_code = error_code_name(e.code());
    g_error_message = e.what();
    return static_cast<masersim_status>(exit_code_for(e.code()));
}

masersim_status fail_other(const std::exception& e) {
    g_error_code = "internal_error";
    g_error_message = e.what();
    return MASERSIM_ERR_COMPUTE;
}

template <typename Fn>
masersim_status guarded(Fn&& fn) {
    try {
        fn();
        g_error_code = "ok";
        g_error_message.clear();
        return MASERSIM_OK;
    } catch (const Error& e) {
        return fail(e);
    } catch (const nlohmann::json::exception& e) {
        g_error_code = "config_parse";
        g_error_message = e.what();
        return MASERSIM_ERR_CONFIG;
    } catch (const std::exception& e) {
        return fail_other(e);
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

RunConfig config_from_cstr(const char* config_json) {
    if (!config_json) raise(ErrorCode::InvalidArgument, "config_json is null");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::ConfigParse, e.what());
    }
    return parse_run_config(j);
}

void require(const void* p, const char* what) {
    if (!p) raise(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

} // namespace

struct masersim_run {
    RunConfig config;
    Trajectory trajectory;
    nlohmann::json analysis;
    bool executed = false;
};

extern "C" {

const char* masersim_version(void) { return kVersion; }

const char* masersim_last_error_code(void) { return g_error_code.c_str(); }

const char* masersim_last_error_message(void) { return g_error_message.c_str(); }

void masersim_string_free(char* s) { delete[] s; }

masersim_status masersim_threshold_mu_th1(double delta, double* out) {
    return guarded([&] {
        require(out, "out");
        PhysicalParams p;
        p.delta = delta;
        *out = threshold_mu_th1(p);
    });
}

masersim_status masersim_threshold_mu_th2(double n_total, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = threshold_mu_th2(n_total);
    });
}

masersim_status masersim_stationary_inversion(double mu0, double n_total, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = stationary_inversion(mu0, n_total);
    });
}

masersim_status masersim_stationary_photons(double mu0, double n_total, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = stationary_photons(mu0, n_total);
    });
}

masersim_status masersim_einstein_alpha(double omega_rad_per_s, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = einstein_alpha(omega_rad_per_s);
    });
}

masersim_status masersim_gamma_from_convection(double v, double L, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = gamma_from_convection(v, L);
    });
}

masersim_status masersim_loss_from_radius(double R, double c, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = loss_from_radius(R, c);
    });
}

masersim_status masersim_run_create(const char* config_json, masersim_run** out) {
    return guarded([&] {
        require(out, "out");
        RunConfig cfg = config_from_cstr(config_json);
        *out = new masersim_run{std::move(cfg), {}, {}, false};
    });
}

void masersim_run_free(masersim_run* run) { delete run; }

masersim_status masersim_run_execute(masersim_run* run) {
    return guarded([&] {
        require(run, "run");
        const RunConfig& cfg = run->config;
        VectorField field = variant_is_normalized(cfg.variant)
                                ? vector_field(cfg.variant, cfg.normalized())
                                : vector_field(cfg.variant, cfg.params);
        run->trajectory = integrate(field, cfg.resolved_initial(), cfg.integrator);
        run->analysis = analyze_trajectory(run->trajectory, cfg);
        run->executed = true;
    });
}

size_t masersim_run_sample_count(const masersim_run* run) {
    return run && run->executed ? run->trajectory.times.size() : 0;
}

size_t masersim_run_dimension(const masersim_run* run) {
    return run && run->executed ? run->trajectory.labels.size() : 0;
}

const char* masersim_run_label(const masersim_run* run, size_t component) {
    if (!run || !run->executed || component >= run->trajectory.labels.size()) return nullptr;
    return run->trajectory.labels[component].c_str();
}

masersim_status masersim_run_sample(const masersim_run* run, size_t sample, double* t,
                                    double* state) {
    return guarded([&] {
        require(run, "run");
        require(t, "t");
        require(state, "state");
        if (!run->executed) raise(ErrorCode::InvalidArgument, "run not executed");
        if (sample >= run->trajectory.times.size())
            raise(ErrorCode::InvalidArgument, "sample index out of range");
        *t = run->trajectory.times[sample];
        const auto& row = run->trajectory.states[sample];
        for (size_t i = 0; i < row.size(); ++i) state[i] = row[i];
    });
}

masersim_status masersim_run_trajectory_csv(const masersim_run* run, char** out) {
    return guarded([&] {
        require(run, "run");
        require(out, "out");
        if (!run->executed) raise(ErrorCode::InvalidArgument, "run not executed");
        *out = dup_string(trajectory_csv(run->trajectory));
    });
}

masersim_status masersim_run_analysis_json(const masersim_run* run, char** out) {
    return guarded([&] {
        require(run, "run");
        require(out, "out");
        if (!run->executed) raise(ErrorCode::InvalidArgument, "run not executed");
        *out = dup_string(run->analysis.dump(2) + "\n");
    });
}

masersim_status masersim_run_config_json(const masersim_run* run, char** out) {
    return guarded([&] {
        require(run, "run");
        require(out, "out");
        *out = dup_string(run_config_to_json(run->config).dump(2) + "\n");
    });
}

masersim_status masersim_cmd_simulate(const char* config_json, const char* out_dir) {
    return guarded([&] {
        require(out_dir, "out_dir");
        cmd_simulate(config_from_cstr(config_json), out_dir);
    });
}

masersim_status masersim_cmd_figure_preset(const char* name, const char* out_dir,
                                           int jobs) {
    return guarded([&] {
        require(name, "name");
        require(out_dir, "out_dir");
        cmd_figure(figure_preset(name), name, out_dir, jobs);
    });
}

masersim_status masersim_cmd_figure_spec(const char* spec_json, const char* out_dir,
                                         int jobs) {
    return guarded([&] {
        require(spec_json, "spec_json");
        require(out_dir, "out_dir");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(spec_json);
        } catch (const nlohmann::json::exception& e) {
            raise(ErrorCode::ConfigParse, e.what());
        }
        SweepSpec spec = sweep_spec_from_json(j);
        cmd_figure(spec, spec.seed_label, out_dir, jobs);
    });
}

masersim_status masersim_cmd_analyze(const char* csv_path, const char* config_json,
                                     const char* out_path) {
    bool ok = false;
    masersim_status st = guarded([&] {
        require(csv_path, "csv_path");
        require(out_path, "out_path");
        ok = cmd_analyze(csv_path, config_from_cstr(config_json), out_path);
    });
    if (st != MASERSIM_OK) return st;
    if (!ok) {
        g_error_code = "analysis_failed";
        g_error_message = "one or more analyses failed; details in the output JSON";
        return MASERSIM_ERR_COMPUTE;
    }
    return MASERSIM_OK;
}

} // extern "C"
