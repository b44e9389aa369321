#pragma once

#include "mns/field.hpp"
#include "mns/solver.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>

namespace mns {

using json = nlohmann::json;

/// Parse helpers shared by the CLI, the C API and the tests. All of them
/// validate against the manifest schema and throw std::invalid_argument with
/// the offending field path.
Grid parse_grid(const json& j);
SolverConfig parse_solver_config(const json& j);
SpectralField make_initial_data(const Grid& grid, const json& spec, std::uint64_t seed);

struct RunSummary {
    std::string name;
    SolveStatus status = SolveStatus::Completed;
    double t_end = 0.0;
    double t_est = 0.0;
    double energy_defect = 0.0;
    double max_omega = 0.0;
    double max_divergence = 0.0;
};

/// Execute one scenario manifest: solve, write steps.csv, requested
/// diagnostic traces, the trajectory container and summary.json under
/// out_dir. Deterministic for a fixed seed.
RunSummary run_scenario(const json& manifest, const std::string& out_dir);

/// Cross-product parameter sweep over a scenario template; one subdirectory
/// per member plus an aggregated sweep.csv and sweep_summary.json (empirical
/// minimal-quantity estimate, declared-blowup runs only).
void run_sweep(const json& manifest, const std::string& out_dir, int threads = 1);

struct VerifyOutcome {
    bool passed = false;
    std::string report; // one line per check, "PASS ..." / "FAIL ..."
};

/// Verification suites: cutoffs, decay, heat_spacetime, support,
/// global_criterion, profiles. Unknown names raise std::invalid_argument.
VerifyOutcome run_verify(const std::string& suite, const json& config,
                         const std::string& out_dir);

/// Post-hoc diagnostics of a stored trajectory file.
void run_analyze(const std::string& trajectory_path, const json& config,
                 const std::string& out_dir);

/// Round-trip helper used by the determinism/config tests.
json normalize_manifest(const json& manifest);

} // namespace mns
