#pragma once

#include "bcm/eikonal.hpp"
#include "bcm/medium.hpp"

#include <filesystem>
#include <vector>

namespace bcm {

/// Ray coordinates (gamma_k, xi_m) -> x(gamma_k, xi_m) with ray divergence J
/// and amplitude factor beta. Arrays are row-major (k, m).
struct RayChart {
  std::vector<double> gamma;    // tangential coordinate of each ray origin
  std::vector<double> xi_grid;  // travel times, xi_grid[0] == 0
  std::vector<Point> positions;
  std::vector<double> J;
  std::vector<double> beta;
  std::vector<unsigned char> valid;    // ray still inside the domain
  std::vector<unsigned char> regular;  // valid, J > 0, no crossing so far

  int n_rays() const { return static_cast<int>(gamma.size()); }
  int n_xi() const { return static_cast<int>(xi_grid.size()); }
  std::size_t index(int k, int m) const { return static_cast<std::size_t>(k) * xi_grid.size() + m; }
  const Point& x(int k, int m) const { return positions[index(k, m)]; }
};

struct RaySeed {
  Point origin;
  Point direction;  // unit vector
  double gamma = 0.0;
};

/// Rays from every screen node along the inward normal, sampled at
/// `xi_grid` (ascending, starting at 0). `substeps` RK4 steps per xi
/// interval at least; more are taken when c^* dxi exceeds h / 4.
/// Fills positions, J and beta.
RayChart trace_rays(const MediumModel& model, const ScreenGeometry& screen, const std::vector<double>& xi_grid,
                    int substeps = 4);
/// Same for arbitrary seeds (ordered along the emitting surface).
RayChart trace_rays_from(const MediumModel& model, const std::vector<RaySeed>& seeds,
                         const std::vector<double>& xi_grid, int substeps = 4);

/// J(gamma_k, xi) from the chord between neighbouring rays, normalised by
/// the chord at xi = 0; crossing rays clear the regular flag.
void ray_divergence(RayChart& chart, int dim);
/// beta = sqrt(J(xi) J(0) / (c(x(xi)) c(x(0)))).
void beta_factor(RayChart& chart, const MediumModel& model);

/// Geometric Optics transport of a front jump:
/// value * sqrt(c(x(gamma, xi)) J(gamma, 0) / (c(gamma) J(gamma, xi))).
double go_jump_amplitude(double control_value, const RayChart& chart, const MediumModel& model, int k, int m);

/// Largest xi_grid value up to which every ray is regular.
double largest_regular_xi(const RayChart& chart);

/// Columns: gamma_index, xi, x, z, J, beta, regular.
void write_chart_csv(const std::filesystem::path& path, const RayChart& chart);

}  // namespace bcm
