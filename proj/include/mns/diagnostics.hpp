#pragma once

#include "mns/trajectory.hpp"

#include <array>

namespace mns {

struct Trace {
    std::vector<double> t;
    std::vector<double> value;
};

/// sigma_p = 2 / (1 - d/p); requires p > d.
double sigma_p(int dim, double p);

/// omega(t) = |u(t)|_inf from the step records.
Trace omega_trace(const Trajectory& traj);

/// (T_est - t)^{1/2} omega(t). Requires T_est >= last trajectory time.
Trace rate_functional(const Trajectory& traj, double t_est);

/// (T_est - t) |u(t)|_p^{sigma_p}; p <= d raises std::domain_error.
Trace typeI_functional(const Trajectory& traj, double t_est, double p);

/// Greedy concentration-time selection: starting from the first trace time,
/// each next tau is the earliest time whose omega reaches 100 C^2 times the
/// previous tau's omega, pulled back to the latest earlier time still
/// satisfying both defining inequalities
///   omega(tau_n) >= 100 C^2 omega(tau_{n-1}),
///   omega(tau_n) >= 1/2 sup_{[tau_{n-1}, tau_n]} omega,
/// so the selected times re-verify both exactly on the discrete trace.
std::vector<double> select_concentration_times(const Trace& omega, double c_conc);

struct DominanceResult {
    bool dominant = false;
    double ratio = 0.0; // |P_{<= beta} u|_inf / omega
    double beta = 0.0;  // 100 C omega
};

/// Low-frequency dominance test |P_{<= 100 C omega} u|_inf >= omega / 2.
DominanceResult low_frequency_dominance(const SpectralField& u, double omega, double c_conc);

struct ConcentrationResult {
    std::array<double, 3> x_star = {0.0, 0.0, 0.0};
    std::array<int, 3> index = {0, 0, 0};
    double beta = 0.0;
    double radius = 0.0;     // M / beta
    double local_mass = 0.0; // |u|_{L^p(|x* - .| <= M/beta)}
    double bound_ratio = 0.0; // local_mass / omega^{1 - d/p}
};

/// Concentration-point localization: x* is the lattice argmax of
/// |P_{<= beta} u| (ties broken by the smallest lattice index), the local
/// mass integrates |u|^p over the periodic ball of radius M/beta. A ball
/// radius below one lattice cell raises std::invalid_argument (refine the
/// grid). omega must be positive.
ConcentrationResult locate_concentration(const SpectralField& u, double omega, double p, double M,
                                         double c_conc);

} // namespace mns
