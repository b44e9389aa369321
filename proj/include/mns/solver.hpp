#pragma once

#include "mns/trajectory.hpp"

#include <limits>
#include <string>
#include <vector>

namespace mns {

struct SolverConfig {
    double c_solve = 1.0; // constant of the step law sqrt(dt) = 1/(8 C^2 w)
    std::vector<double> p_diag = {2.0, 6.0}; // finite-p norms recorded per step
    int gl_nodes = 16;       // Duhamel quadrature nodes per step
    int sub_segments = 4;    // interior accumulation nodes per step
    int max_steps = 100000;
    double omega_cap_factor = 1e6; // blowup declared when w > factor * w(0)
    double dt_floor = 1e-12;
    double dt_max = std::numeric_limits<double>::infinity();
    double fixed_point_tol = 1e-10;
    int max_sweeps = 25;
    int max_halvings = 6;
    bool refine_sup = true;
    bool record_support = false;
};

enum class SolveStatus {
    Completed,         // reached the horizon
    BlowupDeclared,    // omega cap or dt floor hit (heuristic, not certified)
    Quiescent,         // u0 = 0, trajectory identically zero
    ContractionFailed, // an interval failed to contract after all halvings
    Diverged,          // NaN / overflow
    MaxSteps
};

struct SolveResult {
    SolveStatus status = SolveStatus::Completed;
    double t_end = 0.0;
    /// Estimated blowup time when declared, +inf otherwise. Blowup is
    /// declared, never certified.
    double t_est = std::numeric_limits<double>::infinity();
    Trajectory trajectory;
    std::string message;
};

/// Mild-solution march with the step law sqrt(t_i - t_{i-1}) = 1/(8 C^2 |u(t_{i-1})|_inf),
/// each interval solved to a Picard fixed point (interval halved on
/// contraction failure, up to max_halvings). Requires divergence-free u0.
SolveResult solve_local(const SpectralField& u0, double t_horizon, const SolverConfig& cfg = {});

/// Perturbed mild system v = e^{tL} v0 - B(v,v) - B(v,w) - B(w,v) - A0 P div f,
/// with the step law driven by |v|_inf + |w|_inf. Null w / forcing reduce it
/// to solve_local. w and f must cover [0, T].
SolveResult solve_perturbed(const SpectralField& v0, const Trajectory* w,
                            const TensorTrajectory* forcing, double t_horizon,
                            const SolverConfig& cfg = {});

/// Max over recorded steps of the relative energy-identity defect
/// |1/2 |u(t)|_2^2 + int_0^t |grad u|_2^2 - 1/2 |u0|_2^2| / (1/2 |u0|_2^2).
double energy_identity_defect(const Trajectory& traj);

} // namespace mns
