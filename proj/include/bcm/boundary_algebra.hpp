#pragma once

#include "bcm/control.hpp"
#include "bcm/measurements.hpp"
#include "bcm/medium.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace bcm {

/// (f, g)_ext: trapezoid rule in time, dgamma per screen node.
double ext_inner(const ScreenField& f, const ScreenField& g);
/// (y, w)_int = sum over interior nodes of h^dim y w / c^2. Boundary nodes
/// carry prescribed data and are excluded.
double int_inner(const Field& y, const Field& w, const MediumModel& model);

/// C^T f on [0, T] from the trace of u^{f~} on [0, 2T]:
/// (C^T f)(t) = (trace(t) - trace(2T - t)) / 2.
ScreenField apply_connecting(const NeumannTrace& trace);
/// (C^T f, g)_ext, i.e. (u^f(T), u^g(T))_int.
double wave_product(const NeumannTrace& trace_f, const BoundaryControl& g);

/// Everything derived once from the dataset: C^T g_k for every raw control
/// and the full Gram matrix. Nested families make G(xi) a principal
/// submatrix.
struct ObserverData {
  const ControlFamily* family = nullptr;
  std::vector<ScreenField> connected;  // C^T g_k on [0, T]
  Eigen::MatrixXd gram_full;           // before symmetrization
  double symmetry_residual_full = 0.0;
};

ObserverData build_observer(const MeasurementDataset& data, const ControlFamily& family);

struct GramSystem {
  double xi = 0.0;
  std::vector<int> members;  // indices into the family
  Eigen::MatrixXd gram;      // symmetrized
  double symmetry_residual = 0.0;  // ||G - G^T||_F / ||G||_F before symmetrization
  Eigen::VectorXd eigenvalues;     // ascending
  Eigen::MatrixXd eigenvectors;
  std::string family_description;
};

GramSystem gram_matrix(const ObserverData& observer, double xi);
/// Symmetrizes `gram` and computes its spectrum.
GramSystem make_gram_system(const Eigen::MatrixXd& gram, double xi, std::vector<int> members);

/// f_j = sum_k coefficients(k, j) g_{members[k]}; (C^T f_i, f_j)_ext = delta_ij.
struct WaveBasis {
  double xi = 0.0;
  double cutoff = 0.0;
  std::vector<int> members;
  Eigen::MatrixXd coefficients;  // members x rank
  Eigen::VectorXd retained;      // retained eigenvalues, descending
  int rank() const { return static_cast<int>(coefficients.cols()); }
};

/// Spectral orthogonalization keeping eigenvalues >= eps * lambda_max.
/// Throws ValidationError when nothing survives the cutoff.
WaveBasis orthogonalize(const GramSystem& system, double eps);

/// c_j = (C^T f, f_j)_ext for every retained mode.
Eigen::VectorXd truncation_coefficients(const ScreenField& connected_f, const WaveBasis& basis,
                                        const ObserverData& observer);
/// (C^T g_k, h)_ext for every family member k in `members`.
Eigen::VectorXd family_products(const ScreenField& h, const std::vector<int>& members,
                                const ObserverData& observer);

/// Control f_j of a basis, and its connecting image C^T f_j.
BoundaryControl basis_control(const WaveBasis& basis, int j, const ControlFamily& family);
ScreenField basis_connected(const WaveBasis& basis, int j, const ObserverData& observer);

/// Binary matrix (float64, column-major) plus manifest.
void write_gram_system(const std::filesystem::path& dir, const GramSystem& system);
GramSystem read_gram_system(const std::filesystem::path& dir);
void write_wave_basis(const std::filesystem::path& dir, const WaveBasis& basis, const std::string& family_description);
WaveBasis read_wave_basis(const std::filesystem::path& dir);

}  // namespace bcm
