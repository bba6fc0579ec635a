#include "bcm/checks.hpp"

#include "bcm/boundary_algebra.hpp"
#include "bcm/eikonal.hpp"
#include "bcm/errors.hpp"
#include "bcm/measurements.hpp"
#include "bcm/rays.hpp"

#include <cmath>

namespace bcm {

namespace {

Field final_wave(const MediumModel& model, const BoundaryControl& f, TraceStencil stencil) {
  RecordOptions options;
  options.snapshot_steps = {f.n_time - 1};
  options.stencil = stencil;
  return solve_forward(model, f, options).snapshots.front().values;
}

double norm_int(const Field& u, const MediumModel& model) { return std::sqrt(int_inner(u, u, model)); }

}  // namespace

PairResidual duality_residual(const MediumModel& model, const BoundaryControl& f, const Field& y,
                              TraceStencil stencil) {
  const Field u = final_wave(model, f, stencil);
  const int steps = f.n_time - 1;
  const NeumannTrace oty = solve_dual(model, WaveSnapshot{y, steps, f.horizon()}, f.dt, steps, stencil);
  return PairResidual{int_inner(u, y, model), ext_inner(f, oty), norm_int(u, model) * norm_int(y, model)};
}

PairResidual connecting_residual(const MediumModel& model, const NeumannTrace& trace_f, const BoundaryControl& f,
                                 const BoundaryControl& g) {
  const Field uf = final_wave(model, f, TraceStencil::kSummationByParts);
  const Field ug = final_wave(model, g, TraceStencil::kSummationByParts);
  return PairResidual{wave_product(trace_f, g), int_inner(uf, ug, model), norm_int(uf, model) * norm_int(ug, model)};
}

Field energy_density(const MediumModel& model, const BoundaryControl& f) {
  const int N = f.n_time - 1;
  if (N < 1) throw ValidationError("energy needs at least one step");
  RecordOptions options;
  options.snapshot_steps = {N - 1, N};
  const auto r = solve_forward(model, f, options);
  const Field& u0 = r.snapshots[0].values;
  const Field& u1 = r.snapshots[1].values;
  const Grid& g = model.grid;
  Field e(g.size(), 0.0);
  for (int j = 0; j < g.nz; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      const double ut = (u1[k] - u0[k]) / f.dt;
      double grad2 = 0.0;
      if (j + 1 < g.nz) grad2 += std::pow((u1[g.index(i, j + 1)] - u1[k]) / g.h, 2);
      if (g.dim == 2 && i + 1 < g.nx) grad2 += std::pow((u1[g.index(i + 1, j)] - u1[k]) / g.h, 2);
      e[k] = (ut * ut / (model.c[k] * model.c[k]) + grad2) * g.cell_measure();
    }
  }
  return e;
}

double support_leak(const MediumModel& model, const BoundaryControl& f, double xi, int dilate) {
  const Field e = energy_density(model, f);
  const auto inside = solve_eikonal(model, model.screen).sublevel_mask(xi, dilate);
  double total = 0.0, outside = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    total += e[k];
    if (!inside[k]) outside += e[k];
  }
  return total > 0.0 ? outside / total : 0.0;
}

BoundaryControl delayed_bump(const MediumModel& model, const TimeAxis& time, double xi) {
  if (!(xi > 0.0) || xi > time.T) throw ValidationError("delay must lie in (0, T]");
  const auto& screen = model.screen;
  const double taper = 0.25 * (screen.to - screen.from);
  BoundaryControl f = separable_control(
      model, time.dt, time.steps, [&](double g) { return screen_taper(screen, g, taper); },
      [&](double t) { return smooth_bump(t, time.T - xi, time.T); });
  f.delay = time.T - xi;
  return f;
}

double screen_taper(const ScreenGeometry& screen, double gamma, double taper) {
  if (screen.nodes.size() == 1) return 1.0;
  return smooth_ramp(gamma, screen.from, taper) * smooth_ramp(-gamma, -screen.to, taper);
}

JumpCheck front_jump(const MediumModel& model, const TimeAxis& time, double xi, double ramp_width) {
  const double ramp_start = time.T - xi - 0.5 * ramp_width;
  if (ramp_start < 0.0) throw ValidationError("jump ramp does not fit in the horizon");
  const auto& screen = model.screen;
  const double taper = 0.25 * (screen.to - screen.from);
  BoundaryControl f = separable_control(
      model, time.dt, time.steps, [&](double g) { return screen_taper(screen, g, taper); },
      [&](double t) { return smooth_ramp(t, ramp_start, ramp_width); });
  // The smoothed jump is centred on the ray at delay xi_mid. Behind it the wave
  // is the jump plus a term vanishing at the front; a line fitted over one ramp
  // width behind the ramp and extrapolated to xi_mid reads the jump.
  const double xi_mid = xi;
  const double behind = 0.5 * ramp_width + 2.0 * time.dt * model.bounds.upper;
  const int samples = 9;
  std::vector<double> xs{0.0};
  for (int i = 0; i < samples; ++i) xs.push_back(xi_mid - behind - ramp_width * (samples - 1 - i) / (samples - 1));
  if (!(xs[1] > 0.0)) throw ValidationError("the ramp does not leave the screen early enough for the jump check");
  xs.push_back(xi_mid);
  const int k = static_cast<int>(screen.size() / 2);
  const RayChart chart = trace_rays(model, screen, xs);
  const Field u = final_wave(model, f, TraceStencil::kSummationByParts);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 1; i <= samples; ++i) {
    if (!chart.regular[chart.index(k, i)]) throw ValidationError("central ray is not regular behind the front");
    const double x = xs[i] - xi_mid, y = interpolate(model.grid, u, chart.x(k, i));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (samples * sxy - sx * sy) / (samples * sxx - sx * sx);
  const int mid = samples + 1;
  if (!chart.regular[chart.index(k, mid)]) throw ValidationError("central ray is not regular at the front");
  JumpCheck check;
  check.where = chart.x(k, mid);
  check.measured = (sy - slope * sx) / samples;
  check.predicted = go_jump_amplitude(f.at(k, f.n_time - 1), chart, model, k, mid);
  return check;
}

BoundaryControl random_control(const MediumModel& model, const TimeAxis& time, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto& s = model.screen;
  const double len = s.to - s.from;
  const double half = len * (0.15 + 0.2 * u(rng));
  const double centre = s.from + half + (len - 2.0 * half) * u(rng);
  const double width = time.T * (0.2 + 0.3 * u(rng));
  const double start = (time.T - width) * u(rng);
  const bool one_d = s.nodes.size() == 1;
  return separable_control(
      model, time.dt, time.steps,
      [=](double g) { return one_d ? 1.0 : smooth_bump(g, centre - half, centre + half); },
      [=](double t) { return smooth_bump(t, start, start + width); });
}

Field random_blob(const MediumModel& model, double T, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Grid& g = model.grid;
  const auto& s = model.screen;
  const double depth = 0.8 * T * model.bounds.lower;
  std::uniform_int_distribution<std::size_t> pick(s.nodes.size() / 5, s.nodes.size() - 1 - s.nodes.size() / 5);
  const Point p0 = s.nodes[pick(rng)].position;
  const double dist = depth * (0.15 + 0.7 * u(rng));
  const Point centre{p0[0] + dist * s.normal_in[0], p0[1] + dist * s.normal_in[1]};
  const double width2 = std::pow(depth * (0.05 + 0.1 * u(rng)), 2);
  Field y(g.size(), 0.0);
  for (int j = 0; j < g.nz; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double dx = g.dim == 2 ? g.x(i) - centre[0] : 0.0, dz = g.z(j) - centre[1];
      y[g.index(i, j)] = std::exp(-(dx * dx + dz * dz) / width2);
    }
  }
  return y;
}

}  // namespace bcm
