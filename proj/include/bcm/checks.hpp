#pragma once

#include "bcm/control.hpp"
#include "bcm/medium.hpp"
#include "bcm/wave_solver.hpp"

#include <random>

namespace bcm {

/// |lhs - rhs| / scale, scale being the Cauchy-Schwarz bound of the product.
struct PairResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 0.0;
  double relative() const { return scale > 0.0 ? std::abs(lhs - rhs) / scale : std::abs(lhs - rhs); }
};

/// (u^f(T), y)_int against (f, O^T y)_ext; scale = ||u^f(T)|| ||y||.
PairResidual duality_residual(const MediumModel& model, const BoundaryControl& f, const Field& y,
                              TraceStencil stencil = TraceStencil::kSummationByParts);

/// (C^T f, g)_ext from the sigma trace of u^{f~} against (u^f(T), u^g(T))_int
/// from forward solves; scale = ||u^f(T)|| ||u^g(T)||.
PairResidual connecting_residual(const MediumModel& model, const NeumannTrace& trace_f, const BoundaryControl& f,
                                 const BoundaryControl& g);

/// Discrete energy density at the last step: (u_t^2 / c^2 + |grad u|^2) h^dim,
/// u_t by the backward difference of the last two steps.
Field energy_density(const MediumModel& model, const BoundaryControl& f);

/// Fraction of the energy of u^f(T) outside {tau < xi} dilated by `dilate` cells.
double support_leak(const MediumModel& model, const BoundaryControl& f, double xi, int dilate);
/// Control with delay xi: screen taper times a C^2 bump supported on [T - xi, T].
BoundaryControl delayed_bump(const MediumModel& model, const TimeAxis& time, double xi);

/// Front amplitude of a smoothed unit step whose ramp midpoint has delay `xi`
/// at time T, read behind the front on the central ray and compared with the
/// Geometric Optics transport of the jump. Keep xi small against the screen
/// width: diffraction from the screen ends reaches the central ray after a
/// delay of about sqrt(xi^2 + a^2) - xi for half-aperture a.
struct JumpCheck {
  double measured = 0.0;
  double predicted = 0.0;
  Point where{};
  double relative() const { return std::abs(measured - predicted) / std::abs(predicted); }
};
JumpCheck front_jump(const MediumModel& model, const TimeAxis& time, double xi, double ramp_width);

/// Screen taper: C-infinity ramps of width `taper` up from both ends of sigma.
double screen_taper(const ScreenGeometry& screen, double gamma, double taper);

/// Smooth random control: a tapered bump in gamma times a bump in time,
/// both with random centre and width.
BoundaryControl random_control(const MediumModel& model, const TimeAxis& time, std::mt19937& rng);
/// Smooth random interior field: a Gaussian blob centred in the region
/// reached from the screen by time T.
Field random_blob(const MediumModel& model, double T, std::mt19937& rng);

}  // namespace bcm
