#pragma once

#include "bcm/medium.hpp"

namespace bcm {

/// Travel time tau(x) to the screen: |grad tau| = 1/c, tau = 0 on sigma.
struct EikonalField {
  Grid grid;
  Field tau;
  ScreenGeometry source;

  double at(int i, int j) const { return tau[grid.index(i, j)]; }
  /// Nodes of Omega^xi = {tau < xi}, optionally dilated by `dilate` grid
  /// cells (Chebyshev neighbourhood).
  std::vector<unsigned char> sublevel_mask(double xi, int dilate = 0) const;
};

/// First-order fast marching.
EikonalField solve_eikonal(const MediumModel& model, const ScreenGeometry& screen);

/// Smallest travel time from the screen to the absorbing layer (infinity
/// when the model has none).
double sponge_arrival_time(const MediumModel& model, const EikonalField& eik);

}  // namespace bcm

namespace bcm {

/// Smallest travel time from the screen to a boundary node that is not on
/// the screen face.
double far_boundary_arrival_time(const MediumModel& model, const EikonalField& eik);

/// Throws ValidationError unless waves from sigma reach neither the
/// absorbing layer nor the boundary outside the screen face before `T`.
/// Both conditions keep the boundary identities exact on the grid.
void validate_reach(const MediumModel& model, double T);

}  // namespace bcm
