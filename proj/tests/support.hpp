#pragma once

#include "bcm/config.hpp"
#include "bcm/medium.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace bcm::testing {

inline MediumModel model_from(const std::string& ini) { return build_medium(Config::from_string(ini)); }

/// Unit-speed 1D column of the given depth.
inline MediumModel column(double h, double depth, double c = 1.0, double q = 0.0, int sponge = 0) {
  return model_from("[grid]\ndim=1\nspacing=" + std::to_string(h) + "\nextent_z=" + std::to_string(depth) +
                    "\nsponge_width=" + std::to_string(sponge) + "\n[medium]\nc=constant\nc_value=" +
                    std::to_string(c) + "\nq=constant\nq_value=" + std::to_string(q) + "\n");
}

/// 2D slab, screen on [from, to] of the top face.
inline MediumModel slab(double h, double width, double depth, double from, double to, double c = 1.0,
                        int sponge = 0) {
  return model_from("[grid]\ndim=2\nspacing=" + std::to_string(h) + "\nextent_x=" + std::to_string(width) +
                    "\nextent_z=" + std::to_string(depth) + "\nsponge_width=" + std::to_string(sponge) +
                    "\n[medium]\nc=constant\nc_value=" + std::to_string(c) + "\n[screen]\nface=top\nfrom=" +
                    std::to_string(from) + "\nto=" + std::to_string(to) + "\n");
}

/// Lens c = 1 + amplitude exp(-|x - (x0, z0)|^2 / width2) on a 2D slab.
inline MediumModel lens(double h, double width, double depth, double from, double to, double amplitude,
                        double x0, double z0, double width2, int sponge = 0) {
  return model_from("[grid]\ndim=2\nspacing=" + std::to_string(h) + "\nextent_x=" + std::to_string(width) +
                    "\nextent_z=" + std::to_string(depth) + "\nsponge_width=" + std::to_string(sponge) +
                    "\n[medium]\nc=gaussian_lens\nc_base=1\nc_amplitude=" + std::to_string(amplitude) +
                    "\nc_x0=" + std::to_string(x0) + "\nc_z0=" + std::to_string(z0) +
                    "\nc_width2=" + std::to_string(width2) + "\n[screen]\nface=top\nfrom=" +
                    std::to_string(from) + "\nto=" + std::to_string(to) + "\n");
}

inline double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

/// Shortest paths on the 8-connected node graph, edge weight |edge| / c(midpoint).
inline Field graph_distances(const MediumModel& m) {
  const Grid& g = m.grid;
  Field d(g.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  for (const auto& n : m.screen.nodes) {
    d[n.node] = 0.0;
    open.push({0.0, n.node});
  }
  while (!open.empty()) {
    const auto [dist, k] = open.top();
    open.pop();
    if (dist > d[k]) continue;
    const int i = static_cast<int>(k % g.nx), j = static_cast<int>(k / g.nx);
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        const int a = i + di, b = j + dj;
        if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= g.nx || b >= g.nz) continue;
        const Point mid{0.5 * (g.x(i) + g.x(a)), 0.5 * (g.z(j) + g.z(b))};
        const double w = g.h * std::hypot(di, dj) / sample_field(m, FieldKind::kSpeed, mid);
        const std::size_t n = g.index(a, b);
        if (dist + w < d[n]) {
          d[n] = dist + w;
          open.push({d[n], n});
        }
      }
    }
  }
  return d;
}

}  // namespace bcm::testing
