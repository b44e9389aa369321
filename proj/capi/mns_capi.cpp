//==============================================================================
// mns_capi.cpp
// C wrapper over the C++ core: opaque handles, status codes, thread-local
// error messages. Exceptions never cross the boundary.
//==============================================================================

#include "mns.h"

#include "mns/besov.hpp"
#include "mns/scenario.hpp"
#include "mns/spectral_ops.hpp"

#include <fstream>
#include <string>

struct mns_grid {
    mns::Grid grid;
};
struct mns_field {
    mns::SpectralField field;
};
struct mns_trajectory {
    mns::Trajectory traj;
    double t_est;
};

namespace {

thread_local std::string g_last_error;

mns_status fail(mns_status code, const char* what) {
    g_last_error = what;
    return code;
}

template <typename F>
mns_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return MNS_OK;
    } catch (const std::invalid_argument& e) {
        return fail(MNS_ERR_CONFIG, e.what());
    } catch (const std::domain_error& e) {
        return fail(MNS_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(MNS_ERR_RUNTIME, e.what());
    }
}

mns::json parse_json(const char* text, const char* what) {
    if (!text || !*text) return mns::json::object();
    mns::json j = mns::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument(std::string(what) + ": invalid JSON");
    return j;
}

} // namespace

extern "C" {

const char* mns_version(void) { return "mnslab 1.0"; }

const char* mns_last_error(void) { return g_last_error.c_str(); }

mns_status mns_grid_create(int dim, int points_per_axis, double box_scale,
                           double dealias_fraction, mns_grid** out) {
    if (!out) return fail(MNS_ERR_CONFIG, "grid_create: out is NULL");
    return guarded([&] {
        *out = new mns_grid{mns::Grid(dim, points_per_axis, box_scale, dealias_fraction)};
    });
}

void mns_grid_destroy(mns_grid* grid) { delete grid; }

mns_status mns_field_generate(const mns_grid* grid, const char* spec_json, uint64_t seed,
                              mns_field** out) {
    if (!grid || !out) return fail(MNS_ERR_CONFIG, "field_generate: NULL argument");
    return guarded([&] {
        const mns::json spec = parse_json(spec_json, "initial_data");
        *out = new mns_field{mns::make_initial_data(grid->grid, spec, seed)};
    });
}

mns_status mns_field_load(const char* path, mns_field** out) {
    if (!path || !out) return fail(MNS_ERR_CONFIG, "field_load: NULL argument");
    return guarded([&] { *out = new mns_field{mns::load_field(path)}; });
}

mns_status mns_field_save(const mns_field* field, const char* path) {
    if (!field || !path) return fail(MNS_ERR_CONFIG, "field_save: NULL argument");
    return guarded([&] { mns::save_field(field->field, path); });
}

mns_status mns_field_write_csv(const mns_field* field, const char* path) {
    if (!field || !path) return fail(MNS_ERR_CONFIG, "field_write_csv: NULL argument");
    return guarded([&] { mns::write_physical_csv(field->field, path); });
}

void mns_field_destroy(mns_field* field) { delete field; }

mns_status mns_field_lp_norm(const mns_field* field, double p, double* out) {
    if (!field || !out) return fail(MNS_ERR_CONFIG, "lp_norm: NULL argument");
    return guarded([&] { *out = mns::lp_norm(field->field, p); });
}

mns_status mns_field_sup_norm(const mns_field* field, double* out) {
    if (!field || !out) return fail(MNS_ERR_CONFIG, "sup_norm: NULL argument");
    return guarded([&] { *out = mns::sup_norm(field->field); });
}

mns_status mns_field_sobolev_norm(const mns_field* field, double s, double* out) {
    if (!field || !out) return fail(MNS_ERR_CONFIG, "sobolev_norm: NULL argument");
    return guarded([&] { *out = mns::sobolev_norm(field->field, s); });
}

mns_status mns_field_besov_norm(const mns_field* field, double s, double p, double q,
                                double* out) {
    if (!field || !out) return fail(MNS_ERR_CONFIG, "besov_norm: NULL argument");
    return guarded([&] { *out = mns::besov_norm(field->field, s, p, q); });
}

mns_status mns_field_divergence_max(const mns_field* field, double* out) {
    if (!field || !out) return fail(MNS_ERR_CONFIG, "divergence_max: NULL argument");
    return guarded([&] { *out = field->field.divergence_max(); });
}

mns_status mns_field_leray_project(mns_field* field) {
    if (!field) return fail(MNS_ERR_CONFIG, "leray_project: NULL argument");
    return guarded([&] { field->field = mns::leray_project(field->field); });
}

mns_status mns_field_heat_propagate(mns_field* field, double t) {
    if (!field) return fail(MNS_ERR_CONFIG, "heat_propagate: NULL argument");
    return guarded([&] { mns::heat_propagate_inplace(field->field, t); });
}

mns_status mns_solve_local(const mns_field* u0, double t_horizon, const char* config_json,
                           mns_trajectory** out) {
    if (!u0 || !out) return fail(MNS_ERR_CONFIG, "solve_local: NULL argument");
    mns_status rc = guarded([&] {
        const mns::json cfg_json = parse_json(config_json, "solver");
        const mns::SolverConfig cfg = mns::parse_solver_config(cfg_json);
        mns::SolveResult res = mns::solve_local(u0->field, t_horizon, cfg);
        if (res.status == mns::SolveStatus::Diverged ||
            res.status == mns::SolveStatus::ContractionFailed)
            throw std::runtime_error("solve_local: " + res.message);
        *out = new mns_trajectory{std::move(res.trajectory), res.t_est};
    });
    if (rc == MNS_ERR_RUNTIME && g_last_error.rfind("solve_local:", 0) == 0)
        return fail(MNS_ERR_DIVERGENCE, g_last_error.c_str());
    return rc;
}

void mns_trajectory_destroy(mns_trajectory* traj) { delete traj; }

mns_status mns_trajectory_save(const mns_trajectory* traj, const char* path, int stride) {
    if (!traj || !path) return fail(MNS_ERR_CONFIG, "trajectory_save: NULL argument");
    return guarded([&] { traj->traj.save(path, stride); });
}

mns_status mns_trajectory_load(const char* path, mns_trajectory** out) {
    if (!path || !out) return fail(MNS_ERR_CONFIG, "trajectory_load: NULL argument");
    return guarded([&] {
        *out = new mns_trajectory{mns::Trajectory::load(path),
                                  std::numeric_limits<double>::infinity()};
    });
}

size_t mns_trajectory_size(const mns_trajectory* traj) { return traj ? traj->traj.size() : 0; }

mns_status mns_trajectory_time(const mns_trajectory* traj, size_t i, double* out) {
    if (!traj || !out || i >= traj->traj.size())
        return fail(MNS_ERR_CONFIG, "trajectory_time: bad argument");
    *out = traj->traj.time(i);
    return MNS_OK;
}

mns_status mns_trajectory_omega(const mns_trajectory* traj, size_t i, double* out) {
    if (!traj || !out || i >= traj->traj.size())
        return fail(MNS_ERR_CONFIG, "trajectory_omega: bad argument");
    *out = traj->traj.record(i).omega;
    return MNS_OK;
}

mns_status mns_trajectory_field(const mns_trajectory* traj, size_t i, mns_field** out) {
    if (!traj || !out || i >= traj->traj.size())
        return fail(MNS_ERR_CONFIG, "trajectory_field: bad argument");
    return guarded([&] { *out = new mns_field{traj->traj.field(i)}; });
}

mns_status mns_trajectory_t_est(const mns_trajectory* traj, double* out) {
    if (!traj || !out) return fail(MNS_ERR_CONFIG, "trajectory_t_est: NULL argument");
    *out = traj->t_est;
    return MNS_OK;
}

mns_status mns_run_scenario(const char* manifest_json, const char* out_dir) {
    if (!manifest_json || !out_dir) return fail(MNS_ERR_CONFIG, "run_scenario: NULL argument");
    mns_status rc = guarded([&] {
        const mns::json manifest = parse_json(manifest_json, "manifest");
        const mns::RunSummary s = mns::run_scenario(manifest, out_dir);
        if (s.status == mns::SolveStatus::Diverged ||
            s.status == mns::SolveStatus::ContractionFailed)
            throw std::runtime_error("scenario ended with numerical divergence");
    });
    if (rc == MNS_ERR_RUNTIME && g_last_error.find("divergence") != std::string::npos)
        return fail(MNS_ERR_DIVERGENCE, g_last_error.c_str());
    return rc;
}

mns_status mns_run_sweep(const char* manifest_json, const char* out_dir, int threads) {
    if (!manifest_json || !out_dir) return fail(MNS_ERR_CONFIG, "run_sweep: NULL argument");
    return guarded([&] {
        const mns::json manifest = parse_json(manifest_json, "sweep manifest");
        mns::run_sweep(manifest, out_dir, threads);
    });
}

mns_status mns_run_verify(const char* suite, const char* config_json, const char* out_dir,
                          const char* report_path) {
    if (!suite || !out_dir) return fail(MNS_ERR_CONFIG, "run_verify: NULL argument");
    bool passed = false;
    std::string report;
    mns_status rc = guarded([&] {
        const mns::json config = parse_json(config_json, "verify config");
        const mns::VerifyOutcome vo = mns::run_verify(suite, config, out_dir);
        passed = vo.passed;
        report = vo.report;
        if (report_path) {
            std::ofstream os(report_path);
            os << vo.report;
        }
    });
    if (rc != MNS_OK) return rc;
    if (!passed) return fail(MNS_ERR_ASSERTION, report.c_str());
    return MNS_OK;
}

mns_status mns_run_analyze(const char* trajectory_path, const char* config_json,
                           const char* out_dir) {
    if (!trajectory_path || !out_dir)
        return fail(MNS_ERR_CONFIG, "run_analyze: NULL argument");
    return guarded([&] {
        const mns::json config = parse_json(config_json, "analyze config");
        mns::run_analyze(trajectory_path, config, out_dir);
    });
}

} // extern "C"
