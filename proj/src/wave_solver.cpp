#include "bcm/wave_solver.hpp"

#include "bcm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bcm {

double normal_derivative(const Field& u, const ScreenNode& node, double h, TraceStencil stencil) {
  if (stencil == TraceStencil::kThreePoint) {
    return (3.0 * u[node.node] - 4.0 * u[node.inward] + u[node.inward2]) / (2.0 * h);
  }
  return (u[node.node] - u[node.inward]) / h;
}

LeapfrogStepper::LeapfrogStepper(const MediumModel& model, double dt) : grid_(model.grid) {
  validate_cfl(model, dt);
  const std::size_t n = grid_.size();
  courant2_.resize(n);
  potential_.resize(n);
  const Field eta = sponge_profile(model);
  half_eta_dt_.resize(n);
  const double r = dt * dt / (grid_.h * grid_.h);
  for (std::size_t k = 0; k < n; ++k) {
    const double c2 = model.c[k] * model.c[k];
    courant2_[k] = c2 * r;
    potential_[k] = c2 * dt * dt * model.q[k];
    half_eta_dt_[k] = 0.5 * eta[k] * dt;
  }
  for (int j = 0; j < grid_.nz; ++j) {
    for (int i = 0; i < grid_.nx; ++i) {
      if (!grid_.is_boundary(i, j)) interior_.push_back(grid_.index(i, j));
    }
  }
}

void LeapfrogStepper::step(const Field& prev, const Field& cur, Field& next) const {
  const std::size_t sz = static_cast<std::size_t>(grid_.nx);
  const bool two_d = grid_.dim == 2;
  const double* u = cur.data();
  for (std::size_t k : interior_) {
    double lap = u[k - sz] + u[k + sz] - 2.0 * u[k];
    if (two_d) lap += u[k - 1] + u[k + 1] - 2.0 * u[k];
    const double a = half_eta_dt_[k];
    next[k] = (2.0 * u[k] - (1.0 - a) * prev[k] + courant2_[k] * lap - potential_[k] * u[k]) / (1.0 + a);
  }
}

void LeapfrogStepper::step_back(const Field& next, const Field& cur, Field& prev) const {
  const std::size_t sz = static_cast<std::size_t>(grid_.nx);
  const bool two_d = grid_.dim == 2;
  const double* u = cur.data();
  for (std::size_t k : interior_) {
    double lap = u[k - sz] + u[k + sz] - 2.0 * u[k];
    if (two_d) lap += u[k - 1] + u[k + 1] - 2.0 * u[k];
    const double a = half_eta_dt_[k];
    prev[k] = (2.0 * u[k] - (1.0 + a) * next[k] + courant2_[k] * lap - potential_[k] * u[k]) / (1.0 - a);
  }
}

namespace {

void record(NeumannTrace& trace, const ScreenGeometry& nodes, const Field& u, int n, double h,
            TraceStencil stencil) {
  for (int k = 0; k < trace.n_gamma; ++k) trace.at(k, n) = normal_derivative(u, nodes.nodes[k], h, stencil);
}

}  // namespace

ForwardResult solve_forward(const MediumModel& model, const BoundaryControl& control,
                            const RecordOptions& options) {
  const auto& screen = model.screen;
  if (control.n_gamma != static_cast<int>(screen.size())) {
    throw ValidationError("control/screen mismatch: " + std::to_string(control.n_gamma) + " gammas vs " +
                          std::to_string(screen.size()) + " screen nodes");
  }
  if (control.n_time < 2) throw ValidationError("control needs at least two time samples");
  const int steps = control.n_time - 1;
  const double dt = control.dt;
  LeapfrogStepper stepper(model, dt);
  const double h = model.grid.h;

  ForwardResult result;
  result.trace = NeumannTrace(ScreenField(control.n_gamma, control.n_time, dt, model.grid.face_measure()));
  int face_last = -1;
  if (options.extra_face != nullptr) {
    face_last = options.extra_face_last_step < 0 ? steps : std::min(options.extra_face_last_step, steps);
    result.face_trace = NeumannTrace(ScreenField(static_cast<int>(options.extra_face->size()), face_last + 1,
                                                 dt, model.grid.face_measure()));
  }
  std::vector<int> snaps = options.snapshot_steps;
  for (int s : snaps) {
    if (s < 0 || s > steps) throw ValidationError("snapshot step outside the horizon");
  }

  Field prev(model.grid.size(), 0.0), cur(model.grid.size(), 0.0), next(model.grid.size(), 0.0);
  auto apply_boundary = [&](Field& u, int n, double scale) {
    for (int k = 0; k < control.n_gamma; ++k) u[screen.nodes[k].node] = scale * control.at(k, n);
  };
  auto observe = [&](const Field& u, int n) {
    record(result.trace, screen, u, n, h, options.stencil);
    if (n <= face_last) record(result.face_trace, *options.extra_face, u, n, h, options.stencil);
    for (int s : snaps) {
      if (s == n) result.snapshots.push_back(WaveSnapshot{u, n, n * dt});
    }
  };

  apply_boundary(cur, 0, 0.5);
  observe(cur, 0);
  for (int n = 0; n < steps; ++n) {
    stepper.step(prev, cur, next);
    apply_boundary(next, n + 1, 1.0);
    observe(next, n + 1);
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  std::sort(result.snapshots.begin(), result.snapshots.end(),
            [](const WaveSnapshot& a, const WaveSnapshot& b) { return a.step < b.step; });
  return result;
}

NeumannTrace solve_dual(const MediumModel& model, const WaveSnapshot& y, double dt, int steps,
                        TraceStencil stencil) {
  if (y.values.size() != model.grid.size()) throw ValidationError("dual data is not on the model grid");
  if (steps < 1) throw ValidationError("dual horizon must be at least one step");
  LeapfrogStepper stepper(model, dt);
  const auto& screen = model.screen;
  const double h = model.grid.h;
  NeumannTrace trace(ScreenField(static_cast<int>(screen.size()), steps + 1, dt, model.grid.face_measure()));

  // w(m) = v(T - m dt): w(0) = 0, w(1) = -dt y / (1 + eta dt / 2).
  Field prev(model.grid.size(), 0.0), cur(model.grid.size(), 0.0), next(model.grid.size(), 0.0);
  for (int j = 0; j < model.grid.nz; ++j) {
    for (int i = 0; i < model.grid.nx; ++i) {
      if (model.grid.is_boundary(i, j)) continue;
      const std::size_t k = model.grid.index(i, j);
      cur[k] = -dt * y.values[k] / stepper.damping_factor(k);
    }
  }
  auto store = [&](const Field& w, int m) {
    for (int k = 0; k < trace.n_gamma; ++k) trace.at(k, steps - m) = normal_derivative(w, screen.nodes[k], h, stencil);
  };
  store(prev, 0);
  store(cur, 1);
  for (int m = 1; m < steps; ++m) {
    stepper.step(prev, cur, next);
    store(next, m + 1);
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return trace;
}

}  // namespace bcm
