#pragma once

#include "mns/trajectory.hpp"

namespace mns {

struct PicardConfig {
    double t_horizon = 1.0;
    int lattice_nodes = 17; // stored time-lattice nodes on [0, T]
    /// 0: uniform lattice. Positive: geometric lattice 0, t_min, ..., T so
    /// the sup-in-time catches features at the viscous scale 1/|xi|^2 of
    /// high-frequency data.
    double t_min = 0.0;
    int gl_nodes = 8; // Duhamel quadrature nodes per lattice segment
    bool refine_sup = true;
    double support_mass_tol = 1e-8; // l2-mass tolerance for support thresholds
};

/// One row per iteration step n: sup norms over the space-time lattice and
/// the measured half-space support threshold of u^{(n+1)} - u^{(n)}.
struct IterationRecord {
    int n = 0;
    double sup_xt = 0.0;        // |u^{(n)}|_{L^inf_{x,t}}
    double diff_sup_xt = 0.0;   // |u^{(n+1)} - u^{(n)}|_{L^inf_{x,t}}
    double support_threshold = 0.0; // largest rho' holding >= 1 - tol of the diff mass
};

enum class PicardStatus { Ok, Diverged };

struct PicardResult {
    PicardStatus status = PicardStatus::Ok;
    int diverged_at = -1;
    std::vector<IterationRecord> records;
    Trajectory final; // u^{(n_max)} on the time lattice
};

/// Standard iteration sequence u^{(0)} = 0, u^{(1)} = e^{tL} u0,
/// u^{(n+1)} = e^{tL} u0 - B(u^{(n)}, u^{(n)}), evaluated on a uniform time
/// lattice. Requires divergence-free u0.
PicardResult picard_iterate(const SpectralField& u0, int n_max, const PicardConfig& cfg = {});

struct SupportTrackResult {
    std::vector<double> thresholds;        // measured rho_n per iteration diff
    std::vector<double> outside_fractions; // diff mass outside {xi_1 >= (n+1) rho}
};

/// Measures the frequency-superposition law: with supp u0_hat in
/// {xi_1 >= rho}, the diff u^{(n+1)} - u^{(n)} must keep all but <= tol of
/// its spectral mass in {xi_1 >= (n+1) rho}. The support precondition is
/// checked to 1e-12 of the spectral mass.
SupportTrackResult frequency_support_tracker(const SpectralField& u0, double rho, int n_max,
                                             const PicardConfig& cfg = {});

struct GlobalCriterionResult {
    bool satisfied = false;
    int best_n0 = -1;
    double margin = 0.0; // (n0+1) rho - 4 C (M_{n0} + M_{n0+1}) at best_n0
    bool decay_ok = false;
    std::vector<double> m_quantities; // |u^{(n)}|_{L^inf_{x,t}} per n
    std::vector<double> diff_sups;    // d_n = |u^{(n+1)} - u^{(n)}| per n
    std::vector<double> decay_ratios; // d_{l+1} / d_l for l > best_n0
    double t_probe = 0.0;
    double c_glob = 0.0;
};

/// Frequency-superposition global-existence criterion: reports whether
/// 4 C (|u^{(n0)}| + |u^{(n0+1)}|) <= (n0+1) rho holds for some n0 <= n0_max
/// over the finite probe window [0, T], plus the geometric decay of the
/// successive differences when it does. The probe window is finite; no claim
/// is made about the t -> infinity tail.
GlobalCriterionResult check_global_criterion(const SpectralField& u0, double rho, int n0_max,
                                             double c_glob, const PicardConfig& cfg = {});

} // namespace mns
