/*
 * mns.h - C API for the mild Navier-Stokes laboratory.
 *
 * Opaque handles + integer status codes. Every function returning mns_status
 * reports MNS_OK (0) on success; on failure the thread-local message from
 * mns_last_error() describes what went wrong. Heavy operations (runs,
 * sweeps, verification suites) are driven by JSON manifests passed as
 * strings; see the README for the schema.
 */

#ifndef MNS_H
#define MNS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MNS_API __declspec(dllexport)
#else
#define MNS_API __attribute__((visibility("default")))
#endif

typedef enum mns_status {
    MNS_OK = 0,
    MNS_ERR_ASSERTION = 1, /* a verification suite reported failures */
    MNS_ERR_CONFIG = 2,    /* invalid arguments / manifest */
    MNS_ERR_DIVERGENCE = 3,/* numerical divergence or contraction failure */
    MNS_ERR_RUNTIME = 4    /* I/O and other runtime errors */
} mns_status;

typedef struct mns_grid mns_grid;
typedef struct mns_field mns_field;
typedef struct mns_trajectory mns_trajectory;

MNS_API const char* mns_version(void);

/* Thread-local message of the most recent failure; empty string if none. */
MNS_API const char* mns_last_error(void);

/* ---- grids ---- */

MNS_API mns_status mns_grid_create(int dim, int points_per_axis, double box_scale,
                                   double dealias_fraction, mns_grid** out);
MNS_API void mns_grid_destroy(mns_grid* grid);

/* ---- fields ---- */

/* spec is an initial_data JSON object: {"generator": ..., "params": {...}} */
MNS_API mns_status mns_field_generate(const mns_grid* grid, const char* spec_json,
                                      uint64_t seed, mns_field** out);
MNS_API mns_status mns_field_load(const char* path, mns_field** out);
MNS_API mns_status mns_field_save(const mns_field* field, const char* path);
MNS_API mns_status mns_field_write_csv(const mns_field* field, const char* path);
MNS_API void mns_field_destroy(mns_field* field);

MNS_API mns_status mns_field_lp_norm(const mns_field* field, double p, double* out);
MNS_API mns_status mns_field_sup_norm(const mns_field* field, double* out);
MNS_API mns_status mns_field_sobolev_norm(const mns_field* field, double s, double* out);
MNS_API mns_status mns_field_besov_norm(const mns_field* field, double s, double p, double q,
                                        double* out);
MNS_API mns_status mns_field_divergence_max(const mns_field* field, double* out);
MNS_API mns_status mns_field_leray_project(mns_field* field);
MNS_API mns_status mns_field_heat_propagate(mns_field* field, double t);

/* ---- solver ---- */

/* config is a solver JSON object (may be NULL / "{}" for defaults). */
MNS_API mns_status mns_solve_local(const mns_field* u0, double t_horizon,
                                   const char* config_json, mns_trajectory** out);
MNS_API void mns_trajectory_destroy(mns_trajectory* traj);
MNS_API mns_status mns_trajectory_save(const mns_trajectory* traj, const char* path, int stride);
MNS_API mns_status mns_trajectory_load(const char* path, mns_trajectory** out);
MNS_API size_t mns_trajectory_size(const mns_trajectory* traj);
MNS_API mns_status mns_trajectory_time(const mns_trajectory* traj, size_t i, double* out);
MNS_API mns_status mns_trajectory_omega(const mns_trajectory* traj, size_t i, double* out);
MNS_API mns_status mns_trajectory_field(const mns_trajectory* traj, size_t i, mns_field** out);

/* Estimated blowup time of the last solve behind this trajectory handle;
 * +inf when no blowup was declared. Declaration is heuristic. */
MNS_API mns_status mns_trajectory_t_est(const mns_trajectory* traj, double* out);

/* ---- manifest-level drivers (what the CLI calls) ---- */

MNS_API mns_status mns_run_scenario(const char* manifest_json, const char* out_dir);
MNS_API mns_status mns_run_sweep(const char* manifest_json, const char* out_dir, int threads);
/* pass/fail lines are written to report_path when non-NULL */
MNS_API mns_status mns_run_verify(const char* suite, const char* config_json,
                                  const char* out_dir, const char* report_path);
MNS_API mns_status mns_run_analyze(const char* trajectory_path, const char* config_json,
                                   const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MNS_H */
