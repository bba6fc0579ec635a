#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace bcm {

using Field = std::vector<double>;
using Point = std::array<double, 2>;  // (x, z); z is depth

enum class Face { kTop, kBottom, kLeft, kRight };

const char* face_name(Face face);
Face parse_face(const char* name);

/// Uniform node-centred grid. In 1D the grid is a single column (nx == 1)
/// and only the depth axis is active.
struct Grid {
  int dim = 2;
  int nx = 1;
  int nz = 1;
  double x0 = 0.0;
  double z0 = 0.0;
  double h = 1.0;

  std::size_t size() const { return static_cast<std::size_t>(nx) * nz; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  double x(int i) const { return x0 + h * i; }
  double z(int j) const { return z0 + h * j; }
  Point node(int i, int j) const { return {x(i), z(j)}; }
  double x_max() const { return x(nx - 1); }
  double z_max() const { return z(nz - 1); }

  bool is_boundary(int i, int j) const {
    if (j == 0 || j == nz - 1) return true;
    return dim == 2 && (i == 0 || i == nx - 1);
  }
  /// Quadrature weight of one node for interior integrals (h^dim).
  double cell_measure() const { return dim == 2 ? h * h : h; }
  /// Quadrature weight of one boundary node for surface integrals (h^(dim-1)).
  double face_measure() const { return dim == 2 ? h : 1.0; }

  bool contains(const Point& p, double slack = 1e-12) const;
};

}  // namespace bcm
