#pragma once

// Test-only oracles, independent of the implementation paths they check:
// dense convolution sums for the nonlinear term, an integrating-factor RK4
// reference time stepper, and closed-form one-mode heat-time integrals.

#include "mns/field.hpp"
#include "mns/trajectory.hpp"

#include <functional>

namespace mns::oracle {

/// P div(u (x) v) by the dense O(N^{2d}) convolution sum over all mode
/// pairs, truncated to the lattice, dealiased with the same band and
/// Leray-projected mode by mode with an explicit matrix.
SpectralField dense_nonlinear_div(const SpectralField& u, const SpectralField& v);

/// Leray projection recomputed with an explicit per-mode d x d matrix.
SpectralField dense_leray(const SpectralField& f);

/// Integrating-factor RK4 reference: u_hat(t) = e^{-t|xi|^2} w_hat(t) with
/// classic RK4 on w at fixed dt. Shares only the spatial operator with the
/// solver; the time path is independent.
SpectralField integrating_factor_rk4(const SpectralField& u0, double t_end, double dt);

/// sum_k per-mode |e^{-t|xi|^2} u_hat|^2 as an independent check of the heat
/// propagator's l2 decay.
double heat_l2_decay_sum(const SpectralField& f, double t);

/// Closed-form || t^{-s/2} e^{-t mu^2} ||_{L^q(dt/t)} for a single mode of
/// frequency magnitude mu, s < 0 (Gamma function for finite q, stationary
/// point for q = inf).
double one_mode_heat_time_norm(double mu, double s, double q);

/// Synthetic self-similar trajectory u(t) = (T-t)^{-1/2} V(x / sqrt(T-t))
/// from a Gaussian bump V of the given width, sampled analytically per time.
Trajectory self_similar_trajectory(const Grid& grid, double T, double bump_amplitude,
                                   double bump_width, const std::vector<double>& times,
                                   const std::vector<double>& record_p = {});

} // namespace mns::oracle
