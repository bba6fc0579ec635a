#include "bcm/rays.hpp"

#include "bcm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace bcm {

namespace {

/// Nodal central-difference gradient of c, one-sided on the boundary.
struct SpeedGradient {
  Field gx, gz;

  explicit SpeedGradient(const MediumModel& m) : gx(m.grid.size(), 0.0), gz(m.grid.size(), 0.0) {
    const Grid& g = m.grid;
    for (int j = 0; j < g.nz; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t k = g.index(i, j);
        if (g.nx > 1) {
          const int a = std::max(i - 1, 0), b = std::min(i + 1, g.nx - 1);
          gx[k] = (m.c[g.index(b, j)] - m.c[g.index(a, j)]) / ((b - a) * g.h);
        }
        const int a = std::max(j - 1, 0), b = std::min(j + 1, g.nz - 1);
        gz[k] = (m.c[g.index(i, b)] - m.c[g.index(i, a)]) / ((b - a) * g.h);
      }
    }
  }
};

struct State {
  double x, z, px, pz;
};

State rhs(const MediumModel& m, const SpeedGradient& grad, const State& s) {
  const Point p{s.x, s.z};
  const double c = interpolate(m.grid, m.c, p);
  const double cx = interpolate(m.grid, grad.gx, p);
  const double cz = interpolate(m.grid, grad.gz, p);
  return {c * c * s.px, c * c * s.pz, -cx / c, -cz / c};
}

State axpy(const State& s, double a, const State& d) {
  return {s.x + a * d.x, s.z + a * d.z, s.px + a * d.px, s.pz + a * d.pz};
}

bool inside(const MediumModel& m, const State& s) {
  return m.grid.contains({s.x, s.z}, 1e-9 * m.grid.h);
}

}  // namespace

RayChart trace_rays_from(const MediumModel& model, const std::vector<RaySeed>& seeds,
                         const std::vector<double>& xi_grid, int substeps) {
  if (xi_grid.empty() || xi_grid.front() != 0.0) throw ValidationError("xi grid must start at 0");
  for (std::size_t m = 1; m < xi_grid.size(); ++m) {
    if (!(xi_grid[m] > xi_grid[m - 1])) throw ValidationError("xi grid must be strictly increasing");
  }
  if (substeps < 1) throw ValidationError("ray substeps must be >= 1");
  const SpeedGradient grad(model);
  RayChart chart;
  chart.xi_grid = xi_grid;
  const std::size_t total = seeds.size() * xi_grid.size();
  chart.positions.assign(total, Point{0.0, 0.0});
  chart.J.assign(total, 0.0);
  chart.beta.assign(total, 0.0);
  chart.valid.assign(total, 0);
  chart.regular.assign(total, 0);
  const double max_step = 0.25 * model.grid.h / model.bounds.upper;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const RaySeed& seed = seeds[k];
    chart.gamma.push_back(seed.gamma);
    State s{seed.origin[0], seed.origin[1], 0.0, 0.0};
    const double c0 = interpolate(model.grid, model.c, seed.origin);
    s.px = seed.direction[0] / c0;
    s.pz = seed.direction[1] / c0;
    chart.positions[chart.index(static_cast<int>(k), 0)] = seed.origin;
    chart.valid[chart.index(static_cast<int>(k), 0)] = 1;
    bool alive = true;
    for (std::size_t m = 1; m < xi_grid.size() && alive; ++m) {
      const double span = xi_grid[m] - xi_grid[m - 1];
      const int n = std::max(substeps, static_cast<int>(std::ceil(span / max_step)));
      const double d = span / n;
      for (int step = 0; step < n && alive; ++step) {
        // Stages leaving the domain terminate the ray.
        const State k1 = rhs(model, grad, s);
        State t = axpy(s, 0.5 * d, k1);
        if (!(alive = inside(model, t))) break;
        const State k2 = rhs(model, grad, t);
        t = axpy(s, 0.5 * d, k2);
        if (!(alive = inside(model, t))) break;
        const State k3 = rhs(model, grad, t);
        t = axpy(s, d, k3);
        if (!(alive = inside(model, t))) break;
        const State k4 = rhs(model, grad, t);
        State next{s.x + d / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
                   s.z + d / 6.0 * (k1.z + 2 * k2.z + 2 * k3.z + k4.z),
                   s.px + d / 6.0 * (k1.px + 2 * k2.px + 2 * k3.px + k4.px),
                   s.pz + d / 6.0 * (k1.pz + 2 * k2.pz + 2 * k3.pz + k4.pz)};
        if (!(alive = inside(model, next))) break;
        s = next;
      }
      if (!alive) break;
      const std::size_t idx = chart.index(static_cast<int>(k), static_cast<int>(m));
      chart.positions[idx] = {s.x, s.z};
      chart.valid[idx] = 1;
    }
  }
  ray_divergence(chart, model.grid.dim);
  beta_factor(chart, model);
  return chart;
}

RayChart trace_rays(const MediumModel& model, const ScreenGeometry& screen, const std::vector<double>& xi_grid,
                    int substeps) {
  std::vector<RaySeed> seeds;
  for (const auto& n : screen.nodes) seeds.push_back(RaySeed{n.position, screen.normal_in, n.gamma});
  return trace_rays_from(model, seeds, xi_grid, substeps);
}

void ray_divergence(RayChart& chart, int dim) {
  const int nr = chart.n_rays(), nm = chart.n_xi();
  if (dim == 1 || nr < 2) {
    for (std::size_t i = 0; i < chart.J.size(); ++i) {
      chart.J[i] = chart.valid[i] ? 1.0 : 0.0;
      chart.regular[i] = chart.valid[i];
    }
    return;
  }
  auto chord = [&](int k, int m, double& dx, double& dz) {
    const int a = std::max(k - 1, 0), b = std::min(k + 1, nr - 1);
    dx = chart.x(b, m)[0] - chart.x(a, m)[0];
    dz = chart.x(b, m)[1] - chart.x(a, m)[1];
  };
  for (int k = 0; k < nr; ++k) {
    const int a = std::max(k - 1, 0), b = std::min(k + 1, nr - 1);
    double dx0, dz0;
    chord(k, 0, dx0, dz0);
    const double len0 = std::hypot(dx0, dz0);
    bool regular = true;
    for (int m = 0; m < nm; ++m) {
      const std::size_t idx = chart.index(k, m);
      const bool ok = chart.valid[idx] && chart.valid[chart.index(a, m)] && chart.valid[chart.index(b, m)];
      if (!ok) {
        regular = false;
        chart.J[idx] = 0.0;
        chart.regular[idx] = 0;
        continue;
      }
      double dx, dz;
      chord(k, m, dx, dz);
      // Orientation against the initial chord; a sign flip means neighbouring rays crossed.
      if (dx * dx0 + dz * dz0 <= 0.0) regular = false;
      // Adjacent pairs must also keep their orientation.
      for (int e : {a, k}) {
        const int f = e + 1;
        if (f > b || f >= nr) continue;
        const double ex = chart.x(f, m)[0] - chart.x(e, m)[0], ez = chart.x(f, m)[1] - chart.x(e, m)[1];
        const double ex0 = chart.x(f, 0)[0] - chart.x(e, 0)[0], ez0 = chart.x(f, 0)[1] - chart.x(e, 0)[1];
        if (ex * ex0 + ez * ez0 <= 0.0) regular = false;
      }
      chart.J[idx] = std::hypot(dx, dz) / len0;
      chart.regular[idx] = regular && chart.J[idx] > 0.0;
    }
  }
}

void beta_factor(RayChart& chart, const MediumModel& model) {
  for (int k = 0; k < chart.n_rays(); ++k) {
    const double c0 = interpolate(model.grid, model.c, chart.x(k, 0));
    const double j0 = chart.J[chart.index(k, 0)];
    for (int m = 0; m < chart.n_xi(); ++m) {
      const std::size_t idx = chart.index(k, m);
      if (!chart.valid[idx] || chart.J[idx] <= 0.0) {
        chart.beta[idx] = 0.0;
        continue;
      }
      const double c = interpolate(model.grid, model.c, chart.positions[idx]);
      chart.beta[idx] = std::sqrt(chart.J[idx] * j0 / (c * c0));
    }
  }
}

double go_jump_amplitude(double control_value, const RayChart& chart, const MediumModel& model, int k, int m) {
  const std::size_t idx = chart.index(k, m);
  if (!chart.regular[idx]) throw ValidationError("ray chart is not regular at the requested point");
  const double c = interpolate(model.grid, model.c, chart.positions[idx]);
  const double c0 = interpolate(model.grid, model.c, chart.x(k, 0));
  return control_value * std::sqrt(c * chart.J[chart.index(k, 0)] / (c0 * chart.J[idx]));
}

double largest_regular_xi(const RayChart& chart) {
  double best = 0.0;
  for (int m = 0; m < chart.n_xi(); ++m) {
    for (int k = 0; k < chart.n_rays(); ++k) {
      if (!chart.regular[chart.index(k, m)]) return best;
    }
    best = chart.xi_grid[m];
  }
  return best;
}

void write_chart_csv(const std::filesystem::path& path, const RayChart& chart) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "gamma_index,xi,x,z,J,beta,regular\n";
  char line[256];
  for (int k = 0; k < chart.n_rays(); ++k) {
    for (int m = 0; m < chart.n_xi(); ++m) {
      const std::size_t i = chart.index(k, m);
      std::snprintf(line, sizeof line, "%d,%.10g,%.10g,%.10g,%.10g,%.10g,%d\n", k, chart.xi_grid[m],
                    chart.positions[i][0], chart.positions[i][1], chart.J[i], chart.beta[i],
                    static_cast<int>(chart.regular[i]));
      out << line;
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace bcm
