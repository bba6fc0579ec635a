#pragma once

#include "bcm/boundary_algebra.hpp"
#include "bcm/rays.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace bcm {

/// Image of an interior function on screen coordinates (gamma_k, xi_m),
/// row-major (k, m).
struct Portrait {
  double sigma_from = 0.0;  // screen end points along gamma
  double sigma_to = 0.0;
  std::vector<double> gamma;
  std::vector<double> xi_grid;
  std::vector<double> values;
  std::vector<unsigned char> mask;

  int n_gamma() const { return static_cast<int>(gamma.size()); }
  int n_xi() const { return static_cast<int>(xi_grid.size()); }
  std::size_t index(int k, int m) const { return static_cast<std::size_t>(k) * xi_grid.size() + m; }
  double at(int k, int m) const { return values[index(k, m)]; }
};

/// Screen nodes whose distance to an end of sigma is at least
/// kappa * sqrt(layer * xi), layer being the delay spacing. Outside this band
/// the slices mix in the edge-diffracted field, which the ray chart omits.
std::vector<unsigned char> tube_mask(const Portrait& portrait, double kappa);

/// Mask entries whose (k, m) neighbours within `cells` (Chebyshev) are all set.
std::vector<unsigned char> erode(const std::vector<unsigned char>& mask, const Portrait& layout, int cells);

/// One wave basis per delay; a rank-zero entry marks a delay where every
/// mode fell below the cutoff.
std::vector<WaveBasis> build_bases(const ObserverData& observer, const std::vector<double>& xi_grid, double eps);

/// Mean of the two samples of `field` immediately below time index n0,
/// per screen node (the one-sided limit t -> t0 - 0).
std::vector<double> read_before(const ScreenField& field, int n0);
/// Delay represented by read_before at basis delay xi: the mean sits 1.5 dt
/// below T - xi. Portrait rows are labelled with it.
double read_delay(double xi, double dt);

/// {C^T f - sum_j (C^T f, f_j) C^T f_j}(gamma, T - xi - 0) for every screen node.
std::vector<double> amplitude_slice(const ScreenField& connected_f, const WaveBasis& basis,
                                    const ObserverData& observer);

/// Stacks amplitude slices over the bases' delays. Delays with rank-zero
/// bases, or with T - xi < 2 dt, are masked out.
Portrait build_portrait(const ScreenField& connected_f, const std::vector<WaveBasis>& bases,
                        const ObserverData& observer, const ScreenGeometry& screen);

/// a(x) = a0 + ax x + az z, harmonic for the 5-point Laplacian as well.
struct HarmonicProbe {
  double a0 = 0.0;
  double ax = 0.0;
  double az = 0.0;
  std::string name = "zero";

  static HarmonicProbe one() { return {1.0, 0.0, 0.0, "one"}; }
  static HarmonicProbe coordinate(int axis) {
    return axis == 0 ? HarmonicProbe{0.0, 1.0, 0.0, "x"} : HarmonicProbe{0.0, 0.0, 1.0, "z"};
  }
  double value(const Point& p) const { return a0 + ax * p[0] + az * p[1]; }
  /// Derivative along the outward normal (the negated inward normal).
  double normal_derivative(const Point& normal_in) const { return -(ax * normal_in[0] + az * normal_in[1]); }
};

/// (a, u^f(T))_int = int_0^T (T - t) int_face [a du/dnu - (da/dnu) u] dGamma dt,
/// from the trace of u^f on the whole screen face over [0, T]. The
/// quadrature (weights dt (T - t_n), n < N, with the solver's halved
/// boundary value at t = 0) is exact for the leapfrog scheme.
double harmonic_wave_product(const HarmonicProbe& probe, const BoundaryControl& f, const NeumannTrace& face_trace,
                             const ScreenGeometry& face, const ScreenGeometry& screen);
/// Same product from the measured trace of u^{f~} (f~ = extend_control(f))
/// on the screen face over [0, T]: int_0^T int_face [a du/dnu - (da/dnu) f~].
double harmonic_product_extended(const HarmonicProbe& probe, const BoundaryControl& f,
                                 const NeumannTrace& face_trace, const ScreenGeometry& face,
                                 const ScreenGeometry& screen);

/// Portrait of a harmonic function: slice(xi) = {O^T a_T - O^T a_xi}(gamma, T - xi - 0)
/// with O^T a_xi = sum_j (a, u^{f_j}(T)) C^T f_j. `basis_T` is the basis for
/// xi = T; `raw_products[k]` = (a, u^{g_k}(T)) for every family member.
Portrait portrait_harmonic(const std::vector<double>& raw_products, const std::vector<WaveBasis>& bases,
                           const WaveBasis& basis_T, const ObserverData& observer, const ScreenGeometry& screen);
/// (a, u^{g_k}(T)) for every family member, from the dataset's face traces.
std::vector<double> harmonic_family_products(const HarmonicProbe& probe, const MeasurementDataset& data,
                                             const ControlFamily& family, const ScreenGeometry& face,
                                             const ScreenGeometry& screen);

/// Nearest-node deposition with multiplicity averaging; holes stay unmasked.
struct Deposit {
  Field values;
  std::vector<unsigned char> mask;
  std::vector<int> count;
};
Deposit deposit(const Grid& grid, const std::vector<Point>& positions, const std::vector<double>& values,
                const std::vector<unsigned char>& mask);

/// Wave on the chart: u(x(gamma, xi), T) = portrait / beta.
struct WaveRecovery {
  std::vector<double> values;  // chart raster (k, m) over the portrait delays
  std::vector<Point> positions;
  std::vector<unsigned char> mask;
  Deposit grid;
};
WaveRecovery recover_wave(const Portrait& portrait, const RayChart& chart, const Grid& grid,
                          double beta_floor = 1e-6);

struct PotentialOptions {
  double threshold = 0.2;     // mask where |u| < threshold * max |u|
  int half_window_gamma = 5;  // local quadratic fit window, screen nodes each side
  int half_window_xi = 2;     // delays each side
  double xi_max = 1e300;      // deepest delay whose fit window stays behind the control's ramp
  double edge_margin = 2.0;   // tube_mask kappa; <= 0 disables
};
struct PotentialRecovery {
  std::vector<double> q;  // chart raster (k, m)
  std::vector<Point> positions;
  std::vector<unsigned char> mask;
  Deposit grid;
  double noise_floor = 0.0;  // mean |Lap u| / |u| over the mask
  std::string diagnostic;
};
/// q = (Lap u - u_tt) / u on the tube (c == 1, flat screen: ray coordinates
/// are Cartesian). Lap u, u and u_tt come from a local least-squares quadratic
/// in the chart positions over the fit window; every window sample must be
/// unmasked in both waves.
PotentialRecovery recover_potential(const WaveRecovery& u, const WaveRecovery& u_tt, const Portrait& layout,
                                    const Grid& grid, const PotentialOptions& options = {});

struct SpeedOptions {
  int half_window = 2;        // Savitzky-Golay half width in xi samples (2 -> 5 points)
  double one_floor = 0.05;    // mask where 1~ < one_floor * max 1~
  double edge_margin = 2.0;   // tube_mask kappa; <= 0 disables
  bool trim_deep = true;      // drop the last half_window delays (one-sided fits)
};
struct SpeedRecovery {
  std::vector<Point> positions;  // x(gamma, xi) = (pi_x~, pi_z~) / 1~
  std::vector<double> speed;     // |dx/dxi|
  std::vector<unsigned char> mask;
  Deposit grid;
  std::string diagnostic;
};
SpeedRecovery recover_speed(const Portrait& one, const Portrait& px, const Portrait& pz, const Grid& grid,
                            const SpeedOptions& options = {});

/// Local least-squares quadratic derivative of equally spaced samples.
std::vector<double> smoothed_derivative(const std::vector<double>& y, double spacing, int half_window);

/// CSV raster, binary + manifest, 8-bit PGM preview; files named stem.*.
void write_portrait(const std::filesystem::path& dir, const std::string& stem, const Portrait& portrait);
Portrait read_portrait(const std::filesystem::path& dir, const std::string& stem);
void write_field(const std::filesystem::path& dir, const std::string& stem, const Grid& grid, const Field& values,
                 const std::vector<unsigned char>& mask);

}  // namespace bcm
