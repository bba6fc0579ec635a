#pragma once

#include "bcm/control.hpp"
#include "bcm/medium.hpp"

#include <vector>

namespace bcm {

/// Discrete outward normal derivative on a screen node.
///  - kSummationByParts: (u_b - u_1) / h. This is the boundary term of the
///    discrete Green formula for the five-point Laplacian, so the duality and
///    connecting-operator identities hold to round-off on the grid.
///  - kThreePoint: (3 u_b - 4 u_1 + u_2) / (2h), second-order one-sided.
enum class TraceStencil { kSummationByParts, kThreePoint };

struct WaveSnapshot {
  Field values;
  int step = 0;
  double time = 0.0;
};

struct RecordOptions {
  std::vector<int> snapshot_steps;
  /// Extra set of boundary nodes on which to record the normal derivative
  /// (e.g. the whole screen face for harmonic products).
  const ScreenGeometry* extra_face = nullptr;
  /// Last step of the extra trace; -1 records the full horizon.
  int extra_face_last_step = -1;
  TraceStencil stencil = TraceStencil::kSummationByParts;
};

struct ForwardResult {
  std::vector<WaveSnapshot> snapshots;
  NeumannTrace trace;       // on sigma, every solver step
  NeumannTrace face_trace;  // on RecordOptions::extra_face (empty otherwise)
};

/// Leapfrog integration of u_tt = c^2 (Lap u - q u) from rest with u = f on
/// sigma, u = 0 on the rest of the boundary, and damping in the absorbing
/// layer. The horizon is (control.n_time - 1) * control.dt. At t = 0 the
/// boundary value is f(0)/2 (mean of the zero initial state and the control),
/// which pairs with the trapezoid rule of the ext product.
ForwardResult solve_forward(const MediumModel& model, const BoundaryControl& control,
                            const RecordOptions& options = {});

/// Dual system v(T) = 0, v_t(T) = y, v = 0 on the boundary; returns
/// O^T y = dv/dnu on sigma for t in [0, steps * dt]. Solved as a forward run
/// in reversed time (the scheme is time symmetric), which makes it the exact
/// adjoint of solve_forward.
NeumannTrace solve_dual(const MediumModel& model, const WaveSnapshot& y, double dt, int steps,
                        TraceStencil stencil = TraceStencil::kSummationByParts);

/// One-step leapfrog kernel shared by the solvers and exposed for tests.
class LeapfrogStepper {
 public:
  LeapfrogStepper(const MediumModel& model, double dt);

  /// next = scheme(prev, cur) on interior nodes; boundary nodes of `next`
  /// are left untouched.
  void step(const Field& prev, const Field& cur, Field& next) const;
  /// Backward recursion: prev = scheme^{-1}(cur, next) (used by tests).
  void step_back(const Field& next, const Field& cur, Field& prev) const;

  double damping_factor(std::size_t node) const { return 1.0 + half_eta_dt_[node]; }

 private:
  const Grid& grid_;
  std::vector<double> courant2_;   // c^2 dt^2 / h^2
  std::vector<double> potential_;  // c^2 dt^2 q
  std::vector<double> half_eta_dt_;
  std::vector<std::size_t> interior_;
};

double normal_derivative(const Field& u, const ScreenNode& node, double h, TraceStencil stencil);

}  // namespace bcm
