#pragma once

#include "bcm/medium.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace bcm {

/// A field sampled on screen nodes x time samples, row-major (gamma, t).
struct ScreenField {
  int n_gamma = 0;
  int n_time = 0;
  double dt = 0.0;
  double dgamma = 1.0;  // surface weight per screen node (h in 2D, 1 in 1D)
  std::vector<double> values;

  ScreenField() = default;
  ScreenField(int gammas, int times, double dt_, double dgamma_)
      : n_gamma(gammas), n_time(times), dt(dt_), dgamma(dgamma_),
        values(static_cast<std::size_t>(gammas) * times, 0.0) {}

  double& at(int k, int n) { return values[static_cast<std::size_t>(k) * n_time + n]; }
  double at(int k, int n) const { return values[static_cast<std::size_t>(k) * n_time + n]; }
  double horizon() const { return (n_time - 1) * dt; }
  bool same_grid(const ScreenField& other) const;
};

/// Dirichlet control f(gamma, t) on the screen. `delay` is the earliest
/// time at which the control may be non-zero.
struct BoundaryControl : ScreenField {
  double delay = 0.0;

  using ScreenField::ScreenField;
  BoundaryControl(ScreenField field, double delay_ = 0.0) : ScreenField(std::move(field)), delay(delay_) {}
};

/// Outward normal derivative of a wave on the screen (units: control/length).
struct NeumannTrace : ScreenField {
  using ScreenField::ScreenField;
  explicit NeumannTrace(ScreenField field) : ScreenField(std::move(field)) {}
};

/// Empty control on the screen of `model` over [0, horizon_steps * dt].
BoundaryControl make_control(const MediumModel& model, double dt, int horizon_steps);

/// Separable control f(gamma, t) = spatial(gamma) * temporal(t).
BoundaryControl separable_control(const MediumModel& model, double dt, int horizon_steps,
                                  const std::function<double(double)>& spatial,
                                  const std::function<double(double)>& temporal);

/// Odd extension about T followed by time integration, giving the control on
/// [0, 2T]. The integral uses the centred recursion
///   F[n+1] = F[n-1] + 2 dt f_-[n],  F[0] = 0,  F[1] = dt f[0],
/// which is exact for the leapfrog solver (its centred time derivative
/// reproduces f) and makes F symmetric about T, so F(2T) = 0.
BoundaryControl extend_control(const BoundaryControl& f);

/// Smooth step: 0 before t0, 1 after t0 + width, C^2 blend in between.
double smooth_step(double t, double t0, double width);
/// C-infinity step psi(s) / (psi(s) + psi(1 - s)), psi(s) = exp(-1/s),
/// s = (t - t0) / width, and its first or second t-derivative (order 0..2).
double smooth_ramp(double t, double t0, double width, int order = 0);
/// C^2 compactly supported bump on [a, b], peak 1 at the midpoint.
double smooth_bump(double t, double a, double b);
/// Piecewise-linear hat centred at `centre` with half-width `half_width`.
double hat(double s, double centre, double half_width);

/// Raw control family: hats in gamma times hats in time. Time hat k is
/// centred at T - k * layer and supported in [T - (k+1) layer, T - (k-1) layer];
/// only hats vanishing at t = 0 are generated.
struct FamilySpec {
  int n_gamma = 8;        // hats along the screen (interior nodes of a uniform lattice)
  int n_layers = 8;       // layer = T / n_layers
  std::string describe() const;
};

struct ControlFamily {
  FamilySpec spec;
  double layer = 0.0;               // time-hat spacing
  std::vector<BoundaryControl> controls;
  std::vector<int> time_index;      // k of each member
  std::vector<int> gamma_index;     // spatial hat index of each member

  /// Members supported in [T - xi, T], i.e. (k + 1) * layer <= xi.
  std::vector<int> members_for_delay(double xi) const;
  /// Delays xi = m * layer, m = 1..n_layers.
  std::vector<double> delay_grid() const;
};

ControlFamily make_family(const MediumModel& model, const TimeAxis& time, const FamilySpec& spec);

}  // namespace bcm
