/* C interface to the maser simulation library. All entry points are
 * exception-free; failures set a thread-local error (code name + message)
 * and return a status whose numeric value doubles as the CLI exit code. */
#ifndef MASERSIM_MASERSIM_H
#define MASERSIM_MASERSIM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum masersim_status {
    MASERSIM_OK = 0,
    MASERSIM_ERR_CONFIG = 2,  /* bad config, schema, unknown variant/preset */
    MASERSIM_ERR_COMPUTE = 3, /* integration or analysis failure */
    MASERSIM_ERR_IO = 4
} masersim_status;

const char* masersim_version(void);

/* Thread-local details of the most recent failure on this thread. */
const char* masersim_last_error_code(void);    /* e.g. "schema_error" */
const char* masersim_last_error_message(void);

/* Frees strings returned through char** out-parameters. */
void masersim_string_free(char* s);

/* Closed-form quantities ---------------------------------------------------- */

masersim_status masersim_threshold_mu_th1(double delta, double* out);
masersim_status masersim_threshold_mu_th2(double n_total, double* out);
masersim_status masersim_stationary_inversion(double mu0, double n_total, double* out);
masersim_status masersim_stationary_photons(double mu0, double n_total, double* out);
masersim_status masersim_einstein_alpha(double omega_rad_per_s, double* out);
masersim_status masersim_gamma_from_convection(double v, double L, double* out);
masersim_status masersim_loss_from_radius(double R, double c, double* out);

/* Single runs --------------------------------------------------------------- */

typedef struct masersim_run masersim_run;

/* Parses a run-config JSON document; does not integrate yet. */
masersim_status masersim_run_create(const char* config_json, masersim_run** out);
void masersim_run_free(masersim_run* run);

masersim_status masersim_run_execute(masersim_run* run);

/* Valid after a successful execute. */
size_t masersim_run_sample_count(const masersim_run* run);
size_t masersim_run_dimension(const masersim_run* run);
const char* masersim_run_label(const masersim_run* run, size_t component);
masersim_status masersim_run_sample(const masersim_run* run, size_t sample,
                                    double* t, double* state /* dimension-sized */);

/* Serialized outputs; free with masersim_string_free. */
masersim_status masersim_run_trajectory_csv(const masersim_run* run, char** out);
masersim_status masersim_run_analysis_json(const masersim_run* run, char** out);
masersim_status masersim_run_config_json(const masersim_run* run, char** out);

/* CLI-level commands -------------------------------------------------------- */

/* Writes trajectory.csv, analysis.json, manifest.json into out_dir. */
masersim_status masersim_cmd_simulate(const char* config_json, const char* out_dir);

/* Runs a built-in figure preset (fig1..fig8) or a sweep-spec JSON document. */
masersim_status masersim_cmd_figure_preset(const char* name, const char* out_dir,
                                           int jobs);
masersim_status masersim_cmd_figure_spec(const char* spec_json, const char* out_dir,
                                         int jobs);

/* Re-analyzes a stored trajectory CSV; writes the analysis JSON to out_path.
 * Returns MASERSIM_ERR_COMPUTE when an analysis failed (the error is still
 * recorded inside the written JSON). */
masersim_status masersim_cmd_analyze(const char* csv_path, const char* config_json,
                                     const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MASERSIM_MASERSIM_H */
