#include "bcm/control.hpp"

#include "bcm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bcm {

bool ScreenField::same_grid(const ScreenField& o) const {
  return n_gamma == o.n_gamma && n_time == o.n_time && std::abs(dt - o.dt) <= 1e-12 * dt &&
         std::abs(dgamma - o.dgamma) <= 1e-12 * dgamma;
}

BoundaryControl make_control(const MediumModel& model, double dt, int horizon_steps) {
  return BoundaryControl(ScreenField(static_cast<int>(model.screen.size()), horizon_steps + 1, dt,
                                     model.grid.face_measure()));
}

BoundaryControl separable_control(const MediumModel& model, double dt, int horizon_steps,
                                  const std::function<double(double)>& spatial,
                                  const std::function<double(double)>& temporal) {
  BoundaryControl f = make_control(model, dt, horizon_steps);
  std::vector<double> tv(f.n_time);
  for (int n = 0; n < f.n_time; ++n) tv[n] = temporal(n * dt);
  for (int k = 0; k < f.n_gamma; ++k) {
    const double s = spatial(model.screen.nodes[k].gamma);
    for (int n = 0; n < f.n_time; ++n) f.at(k, n) = s * tv[n];
  }
  const auto first = std::find_if(tv.begin(), tv.end(), [](double v) { return v != 0.0; });
  f.delay = first == tv.end() ? f.horizon() : (first - tv.begin()) * dt;
  return f;
}

BoundaryControl extend_control(const BoundaryControl& f) {
  const int N = f.n_time - 1;
  if (N < 1) throw ValidationError("control needs at least two time samples");
  BoundaryControl out(ScreenField(f.n_gamma, 2 * N + 1, f.dt, f.dgamma), f.delay);
  std::vector<double> odd(2 * N + 1);
  for (int k = 0; k < f.n_gamma; ++k) {
    for (int n = 0; n < N; ++n) odd[n] = f.at(k, n);
    odd[N] = 0.0;  // midpoint of the jump f(T) -> -f(T)
    for (int n = N + 1; n <= 2 * N; ++n) odd[n] = -f.at(k, 2 * N - n);
    out.at(k, 0) = 0.0;
    out.at(k, 1) = f.dt * odd[0];
    for (int n = 1; n < 2 * N; ++n) out.at(k, n + 1) = out.at(k, n - 1) + 2.0 * f.dt * odd[n];
  }
  return out;
}

double smooth_step(double t, double t0, double width) {
  if (width <= 0.0) return t >= t0 ? 1.0 : 0.0;
  const double s = (t - t0) / width;
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

namespace {

/// exp(-1/s) and its first two derivatives; zero for s <= 0.
double psi(double s, int order) {
  if (s <= 0.0) return 0.0;
  const double e = std::exp(-1.0 / s);
  if (order == 0) return e;
  if (order == 1) return e / (s * s);
  return e * (1.0 - 2.0 * s) / (s * s * s * s);
}

}  // namespace

double smooth_ramp(double t, double t0, double width, int order) {
  if (order < 0 || order > 2) throw ValidationError("smooth_ramp supports derivative orders 0..2");
  if (!(width > 0.0)) throw ValidationError("ramp width must be positive");
  const double s = (t - t0) / width;
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return order == 0 ? 1.0 : 0.0;
  const double a0 = psi(s, 0), a1 = psi(s, 1), a2 = psi(s, 2);
  const double b0 = psi(1.0 - s, 0), b1 = -psi(1.0 - s, 1), b2 = psi(1.0 - s, 2);
  const double d0 = a0 + b0, d1 = a1 + b1, d2 = a2 + b2;
  if (order == 0) return a0 / d0;
  const double n1 = a1 * d0 - a0 * d1;
  if (order == 1) return n1 / (d0 * d0) / width;
  return ((a2 * d0 - a0 * d2) / (d0 * d0) - 2.0 * d1 * n1 / (d0 * d0 * d0)) / (width * width);
}

double smooth_bump(double t, double a, double b) {
  if (t <= a || t >= b) return 0.0;
  const double s = (t - a) / (b - a);
  const double w = 4.0 * s * (1.0 - s);
  return w * w * w;
}

double hat(double s, double centre, double half_width) {
  return std::max(0.0, 1.0 - std::abs(s - centre) / half_width);
}

std::string FamilySpec::describe() const {
  std::ostringstream out;
  out << "hat(gamma) x hat(t): n_gamma=" << n_gamma << " n_layers=" << n_layers;
  return out.str();
}

std::vector<int> ControlFamily::members_for_delay(double xi) const {
  std::vector<int> members;
  for (std::size_t j = 0; j < controls.size(); ++j) {
    if ((time_index[j] + 1) * layer <= xi + 1e-9 * layer) members.push_back(static_cast<int>(j));
  }
  return members;
}

std::vector<double> ControlFamily::delay_grid() const {
  std::vector<double> xs;
  for (int m = 1; m <= spec.n_layers; ++m) xs.push_back(m * layer);
  return xs;
}

ControlFamily make_family(const MediumModel& model, const TimeAxis& time, const FamilySpec& spec) {
  if (spec.n_gamma < 1 || spec.n_layers < 1) throw ValidationError("family needs n_gamma, n_layers >= 1");
  if (time.steps % spec.n_layers != 0) {
    throw ValidationError("time steps must be a multiple of the family layer count");
  }
  ControlFamily fam;
  fam.spec = spec;
  fam.layer = time.T / spec.n_layers;
  const auto& screen = model.screen;
  const bool one_d = model.grid.dim == 1;
  const double g_lo = screen.from, g_hi = screen.to;
  const double g_step = one_d ? 1.0 : (g_hi - g_lo) / (spec.n_gamma + 1);
  const int n_gamma = one_d ? 1 : spec.n_gamma;
  // Time hats k = 0..n_layers-1; k = n_layers-1 is centred at `layer` and vanishes at t = 0.
  for (int k = 0; k < spec.n_layers; ++k) {
    const double centre = time.T - k * fam.layer;
    for (int g = 0; g < n_gamma; ++g) {
      const double gc = g_lo + (g + 1) * g_step;
      auto spatial = [&](double gamma) { return one_d ? 1.0 : hat(gamma, gc, g_step); };
      auto temporal = [&](double t) { return hat(t, centre, fam.layer); };
      BoundaryControl c = separable_control(model, time.dt, time.steps, spatial, temporal);
      c.delay = std::max(0.0, time.T - (k + 1) * fam.layer);
      fam.controls.push_back(std::move(c));
      fam.time_index.push_back(k);
      fam.gamma_index.push_back(g);
    }
  }
  return fam;
}

}  // namespace bcm
