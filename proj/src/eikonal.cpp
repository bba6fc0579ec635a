#include "bcm/eikonal.hpp"

#include "bcm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>
#include <utility>

namespace bcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double local_update(const Grid& g, const Field& tau, const std::vector<unsigned char>& accepted, double slowness,
                    int i, int j) {
  auto known = [&](int ii, int jj) {
    if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.nz) return kInf;
    const std::size_t k = g.index(ii, jj);
    return accepted[k] ? tau[k] : kInf;
  };
  const double f = g.h * slowness;
  const double b = std::min(known(i, j - 1), known(i, j + 1));
  if (g.dim == 1) return b + f;
  const double a = std::min(known(i - 1, j), known(i + 1, j));
  const double lo = std::min(a, b), hi = std::max(a, b);
  if (hi - lo >= f) return lo + f;
  return 0.5 * (lo + hi + std::sqrt(2.0 * f * f - (hi - lo) * (hi - lo)));
}

}  // namespace

std::vector<unsigned char> EikonalField::sublevel_mask(double xi, int dilate) const {
  std::vector<unsigned char> mask(tau.size(), 0);
  for (std::size_t k = 0; k < tau.size(); ++k) mask[k] = tau[k] < xi;
  if (dilate <= 0) return mask;
  std::vector<unsigned char> out(mask.size(), 0);
  for (int j = 0; j < grid.nz; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (!mask[grid.index(i, j)]) continue;
      for (int dj = -dilate; dj <= dilate; ++dj) {
        for (int di = -dilate; di <= dilate; ++di) {
          const int ii = i + di, jj = j + dj;
          if (ii >= 0 && jj >= 0 && ii < grid.nx && jj < grid.nz) out[grid.index(ii, jj)] = 1;
        }
      }
    }
  }
  return out;
}

EikonalField solve_eikonal(const MediumModel& model, const ScreenGeometry& screen) {
  const Grid& g = model.grid;
  EikonalField eik{g, Field(g.size(), kInf), screen};
  std::vector<unsigned char> accepted(g.size(), 0);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (const auto& n : screen.nodes) {
    eik.tau[n.node] = 0.0;
    heap.emplace(0.0, n.node);
  }
  const int offsets[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!heap.empty()) {
    const auto [t, k] = heap.top();
    heap.pop();
    if (accepted[k] || t > eik.tau[k]) continue;
    accepted[k] = 1;
    const int i = static_cast<int>(k % g.nx), j = static_cast<int>(k / g.nx);
    for (const auto& o : offsets) {
      const int ii = i + o[0], jj = j + o[1];
      if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.nz) continue;
      const std::size_t kk = g.index(ii, jj);
      if (accepted[kk]) continue;
      const double cand = local_update(g, eik.tau, accepted, 1.0 / model.c[kk], ii, jj);
      if (cand < eik.tau[kk]) {
        eik.tau[kk] = cand;
        heap.emplace(cand, kk);
      }
    }
  }
  return eik;
}

double sponge_arrival_time(const MediumModel& model, const EikonalField& eik) {
  double t = kInf;
  for (int j = 0; j < model.grid.nz; ++j) {
    for (int i = 0; i < model.grid.nx; ++i) {
      if (in_sponge(model, i, j)) t = std::min(t, eik.at(i, j));
    }
  }
  return t;
}

}  // namespace bcm

namespace bcm {

double far_boundary_arrival_time(const MediumModel& model, const EikonalField& eik) {
  const Grid& g = model.grid;
  double t = std::numeric_limits<double>::infinity();
  const ScreenGeometry face = make_face(g, model.screen.face);
  std::vector<unsigned char> on_face(g.size(), 0);
  for (const auto& n : face.nodes) on_face[n.node] = 1;
  for (int j = 0; j < g.nz; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      if (g.is_boundary(i, j) && !on_face[k]) t = std::min(t, eik.tau[k]);
    }
  }
  return t;
}

void validate_reach(const MediumModel& model, double T) {
  const EikonalField eik = solve_eikonal(model, model.screen);
  const double sponge = sponge_arrival_time(model, eik);
  const double far = far_boundary_arrival_time(model, eik);
  if (sponge < T || far < T) {
    std::ostringstream msg;
    msg << "waves from the screen reach " << (sponge <= far ? "the absorbing layer" : "the far boundary")
        << " at t = " << std::min(sponge, far) << " < T = " << T
        << "; enlarge the domain, move the screen, or shorten T";
    throw ValidationError(msg.str());
  }
}

}  // namespace bcm
