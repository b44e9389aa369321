#pragma once

#include "mns/trajectory.hpp"

#include <functional>

namespace mns {

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// One Duhamel marching step: given I(t_prev) = int_0^{t_prev} e^{(t_prev-s)L} N(s) ds,
/// returns I(t_next) = e^{(t_next-t_prev)L} I(t_prev)
///                    + int_{t_prev}^{t_next} e^{(t_next-s)L} N(s) ds,
/// the segment integral by Gauss-Legendre with the heat factor exact per mode.
SpectralField duhamel_advance(const SpectralField& acc, double t_prev, double t_next,
                              const std::function<SpectralField(double)>& integrand,
                              int gl_nodes);

/// B(u, v)(t) = int_0^t e^{(t-s)L} P div(u (x) v)(s) ds for stored
/// trajectories, integrand values from piecewise-linear interpolation of the
/// spectral coefficients, composite Gauss-Legendre per trajectory segment.
/// Throws on a coverage gap.
SpectralField bilinear_B(const Trajectory& u, const Trajectory& v, double t, int gl_nodes = 16);

/// P (i xi_b f_ab): the projected divergence of a matrix field.
SpectralField projected_tensor_divergence(const TensorField& f);

} // namespace mns
