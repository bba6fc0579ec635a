#include "bcm/medium.hpp"

#include "bcm/errors.hpp"
#include "bcm/raster_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <numbers>
#include <sstream>

namespace bcm {

const char* face_name(Face face) {
  switch (face) {
    case Face::kTop: return "top";
    case Face::kBottom: return "bottom";
    case Face::kLeft: return "left";
    case Face::kRight: return "right";
  }
  return "?";
}

Face parse_face(const char* name) {
  if (std::strcmp(name, "top") == 0) return Face::kTop;
  if (std::strcmp(name, "bottom") == 0) return Face::kBottom;
  if (std::strcmp(name, "left") == 0) return Face::kLeft;
  if (std::strcmp(name, "right") == 0) return Face::kRight;
  throw ValidationError(std::string("screen is not on a boundary face: '") + name + "'");
}

bool Grid::contains(const Point& p, double slack) const {
  const double tol = slack * h;
  if (p[1] < z0 - tol || p[1] > z_max() + tol) return false;
  if (dim == 2 && (p[0] < x0 - tol || p[0] > x_max() + tol)) return false;
  return true;
}

Grid make_grid(int dim, double extent_x, double extent_z, double h, double x0, double z0) {
  if (dim != 1 && dim != 2) throw ValidationError("dim must be 1 or 2");
  if (!(h > 0.0)) throw ValidationError("grid spacing must be positive");
  if (!(extent_z > 0.0) || (dim == 2 && !(extent_x > 0.0))) {
    throw ValidationError("grid extent must be positive");
  }
  Grid g;
  g.dim = dim;
  g.h = h;
  g.x0 = x0;
  g.z0 = z0;
  g.nz = static_cast<int>(std::lround(extent_z / h)) + 1;
  g.nx = dim == 2 ? static_cast<int>(std::lround(extent_x / h)) + 1 : 1;
  if (g.nz < 3 || (dim == 2 && g.nx < 3)) throw ValidationError("grid needs at least 3 nodes per axis");
  return g;
}

namespace {

struct FaceWalk {
  int count;                                    // nodes along the face
  std::function<std::pair<int, int>(int)> ij;   // node k -> (i, j)
  std::array<int, 2> inward;                    // (di, dj)
  bool gamma_is_x;
};

FaceWalk face_walk(const Grid& g, Face face) {
  if (g.dim == 1 && face != Face::kTop && face != Face::kBottom) {
    throw ValidationError("1D grids only have top and bottom faces");
  }
  switch (face) {
    case Face::kTop:
      return {g.nx, [](int k) { return std::pair{k, 0}; }, {0, 1}, true};
    case Face::kBottom: {
      const int last = g.nz - 1;
      return {g.nx, [last](int k) { return std::pair{k, last}; }, {0, -1}, true};
    }
    case Face::kLeft:
      return {g.nz, [](int k) { return std::pair{0, k}; }, {1, 0}, false};
    case Face::kRight: {
      const int last = g.nx - 1;
      return {g.nz, [last](int k) { return std::pair{last, k}; }, {-1, 0}, false};
    }
  }
  throw ValidationError("unknown face");
}

ScreenNode screen_node(const Grid& g, const FaceWalk& walk, int k) {
  auto [i, j] = walk.ij(k);
  ScreenNode n;
  n.node = g.index(i, j);
  n.inward = g.index(i + walk.inward[0], j + walk.inward[1]);
  n.inward2 = g.index(i + 2 * walk.inward[0], j + 2 * walk.inward[1]);
  n.position = g.node(i, j);
  n.gamma = walk.gamma_is_x ? n.position[0] : n.position[1];
  return n;
}

}  // namespace

ScreenGeometry make_screen(const Grid& grid, Face face, double from, double to) {
  const FaceWalk walk = face_walk(grid, face);
  ScreenGeometry s;
  s.face = face;
  s.gamma_spacing = grid.h;
  s.normal_in = {static_cast<double>(walk.inward[0]), static_cast<double>(walk.inward[1])};
  if (grid.dim == 1) {
    s.from = s.to = grid.x0;
    s.nodes.push_back(screen_node(grid, walk, 0));
    return s;
  }
  if (!(to > from)) throw ValidationError("screen interval must satisfy from < to");
  s.from = from;
  s.to = to;
  const double tol = 1e-9 * grid.h;
  // Corners belong to two faces and are never screen nodes.
  for (int k = 1; k + 1 < walk.count; ++k) {
    ScreenNode n = screen_node(grid, walk, k);
    if (n.gamma > from + tol && n.gamma < to - tol) s.nodes.push_back(n);
  }
  if (s.nodes.empty()) throw ValidationError("screen interval contains no interior face nodes");
  return s;
}

ScreenGeometry make_face(const Grid& grid, Face face) {
  const FaceWalk walk = face_walk(grid, face);
  ScreenGeometry s;
  s.face = face;
  s.gamma_spacing = grid.h;
  s.normal_in = {static_cast<double>(walk.inward[0]), static_cast<double>(walk.inward[1])};
  if (grid.dim == 1) {
    s.nodes.push_back(screen_node(grid, walk, 0));
    s.from = s.to = s.nodes.front().gamma;
    return s;
  }
  for (int k = 1; k + 1 < walk.count; ++k) s.nodes.push_back(screen_node(grid, walk, k));
  s.from = walk.gamma_is_x ? grid.x0 : grid.z0;
  s.to = walk.gamma_is_x ? grid.x_max() : grid.z_max();
  return s;
}

double max_cfl_factor(int dim) { return 1.0 / std::sqrt(static_cast<double>(dim)); }

void validate_cfl(const MediumModel& model, double dt) {
  const double limit = max_cfl_factor(model.grid.dim) * model.grid.h / model.bounds.upper;
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "CFL violation: dt = " << dt << " exceeds " << limit << " (h / (sqrt(dim) c^*))";
    throw ValidationError(msg.str());
  }
}

TimeAxis make_time_axis(const MediumModel& model, double T, double cfl, int steps_multiple) {
  if (!(T > 0.0)) throw ValidationError("time horizon T must be positive");
  if (!(cfl > 0.0) || cfl > max_cfl_factor(model.grid.dim) + 1e-12) {
    throw ValidationError("CFL factor must lie in (0, 1/sqrt(dim)]");
  }
  if (steps_multiple < 1) throw ValidationError("steps multiple must be >= 1");
  const double dt_max = cfl * model.grid.h / model.bounds.upper;
  int steps = static_cast<int>(std::ceil(T / dt_max - 1e-9));
  steps = ((steps + steps_multiple - 1) / steps_multiple) * steps_multiple;
  TimeAxis axis{T, T / steps, steps};
  validate_cfl(model, axis.dt);
  return axis;
}

TimeAxis build_time_axis(const Config& config, const MediumModel& model, int steps_multiple) {
  const double T = config.get_double("time", "T");
  const double cfl = config.get_double("time", "cfl", 0.5);
  if (config.has("time", "steps")) {
    const int steps = config.get_int("time", "steps");
    if (steps <= 0 || steps % steps_multiple != 0) {
      throw ValidationError("[time] steps must be a positive multiple of " + std::to_string(steps_multiple));
    }
    TimeAxis axis{T, T / steps, steps};
    validate_cfl(model, axis.dt);
    return axis;
  }
  return make_time_axis(model, T, cfl, steps_multiple);
}

namespace {

Field evaluate_preset(const Config& cfg, const std::string& name, const Grid& grid) {
  const std::string kind = cfg.get_string("medium", name, "constant");
  auto param = [&](const std::string& key) { return cfg.get_double("medium", name + "_" + key); };
  auto param_or = [&](const std::string& key, double fallback) {
    return cfg.get_double("medium", name + "_" + key, fallback);
  };
  std::function<double(double, double)> fn;
  if (kind == "constant") {
    const double v = param_or("value", name == "c" ? 1.0 : 0.0);
    fn = [v](double, double) { return v; };
  } else if (kind == "gaussian_lens") {
    const double base = param("base"), amp = param("amplitude"), x0 = param("x0"), z0 = param("z0"),
                 w2 = param("width2");
    if (!(w2 > 0.0)) throw ValidationError(name + "_width2 must be positive");
    fn = [=](double x, double z) {
      return base + amp * std::exp(-((x - x0) * (x - x0) + (z - z0) * (z - z0)) / w2);
    };
  } else if (kind == "linear_gradient") {
    const double base = param("base"), gx = param_or("gx", 0.0), gz = param_or("gz", 0.0);
    fn = [=](double x, double z) { return base + gx * x + gz * z; };
  } else if (kind == "disk") {
    const double value = param("value"), x0 = param_or("x0", 0.0), z0 = param("z0"),
                 radius = param("radius"), taper = param_or("taper", 0.0),
                 background = param_or("background", 0.0);
    fn = [=](double x, double z) {
      const double r = std::hypot(x - x0, z - z0);
      if (r <= radius - taper) return value;
      if (r >= radius || taper <= 0.0) return r < radius ? value : background;
      const double s = (r - (radius - taper)) / taper;
      const double w = std::cos(0.5 * std::numbers::pi * s);
      return background + (value - background) * w * w;
    };
  } else if (kind == "tabulated") {
    const std::filesystem::path file = cfg.base_dir() / cfg.get_string("medium", name + "_file");
    Raster raster = read_csv_raster(file);
    if (raster.rows != grid.nz || raster.cols != grid.nx) {
      throw ValidationError("tabulated " + name + " raster is " + std::to_string(raster.rows) + "x" +
                            std::to_string(raster.cols) + ", grid is " + std::to_string(grid.nz) + "x" +
                            std::to_string(grid.nx));
    }
    return raster.values;
  } else {
    throw ValidationError("unknown field preset '" + kind + "' for " + name);
  }
  Field values(grid.size());
  for (int j = 0; j < grid.nz; ++j) {
    for (int i = 0; i < grid.nx; ++i) values[grid.index(i, j)] = fn(grid.x(i), grid.z(j));
  }
  return values;
}

}  // namespace

MediumModel build_medium(const Config& cfg) {
  const int dim = cfg.get_int("grid", "dim", 2);
  const double h = cfg.get_double("grid", "spacing");
  MediumModel m;
  m.grid = make_grid(dim, dim == 2 ? cfg.get_double("grid", "extent_x") : 0.0,
                     cfg.get_double("grid", "extent_z"), h, cfg.get_double("grid", "origin_x", 0.0),
                     cfg.get_double("grid", "origin_z", 0.0));
  m.sponge_width = cfg.get_int("grid", "sponge_width", 0);
  m.c = evaluate_preset(cfg, "c", m.grid);
  m.q = evaluate_preset(cfg, "q", m.grid);
  const auto [lo, hi] = std::minmax_element(m.c.begin(), m.c.end());
  m.bounds.lower = cfg.get_double("medium", "c_min", *lo);
  m.bounds.upper = cfg.get_double("medium", "c_max", *hi);
  const Face face = parse_face(cfg.get_string("screen", "face", "top").c_str());
  m.screen = make_screen(m.grid, face, cfg.get_double("screen", "from", 0.0),
                         cfg.get_double("screen", "to", 0.0));
  m.description = cfg.get_string("medium", "c", "constant") + " speed, " +
                  cfg.get_string("medium", "q", "constant") + " potential";
  validate(m);
  return m;
}

void validate(const MediumModel& m) {
  if (!(m.grid.h > 0.0)) throw ValidationError("grid spacing must be positive");
  if (m.c.size() != m.grid.size() || m.q.size() != m.grid.size()) {
    throw ValidationError("c and q must have the grid shape");
  }
  if (!(m.bounds.lower > 0.0) || !(m.bounds.upper >= m.bounds.lower) || !std::isfinite(m.bounds.upper)) {
    throw ValidationError("speed bounds must satisfy 0 < c_* <= c^* < inf");
  }
  for (std::size_t k = 0; k < m.c.size(); ++k) {
    if (!(m.c[k] >= m.bounds.lower) || !(m.c[k] <= m.bounds.upper)) {
      std::ostringstream msg;
      msg << "speed bound violation: c = " << m.c[k] << " outside [" << m.bounds.lower << ", "
          << m.bounds.upper << "]";
      throw ValidationError(msg.str());
    }
    if (!std::isfinite(m.q[k])) throw ValidationError("potential must be finite");
  }
  if (m.sponge_width < 0) throw ValidationError("sponge width must be non-negative");
  const int span = m.grid.dim == 2 ? std::min(m.grid.nx, m.grid.nz) : m.grid.nz;
  if (2 * m.sponge_width + 3 > span) throw ValidationError("sponge layer does not fit the grid");
  if (m.screen.nodes.empty()) throw ValidationError("screen has no nodes");
  for (const auto& n : m.screen.nodes) {
    const int i = static_cast<int>(n.node % m.grid.nx);
    const int j = static_cast<int>(n.node / m.grid.nx);
    if (!m.grid.is_boundary(i, j)) throw ValidationError("screen node is not on the boundary");
    if (in_sponge(m, i, j)) throw ValidationError("screen overlaps the absorbing layer");
  }
}

double interpolate(const Grid& g, const Field& values, const Point& p) {
  if (!g.contains(p, 1e-9)) {
    std::ostringstream msg;
    msg << "point (" << p[0] << ", " << p[1] << ") outside the domain";
    throw ValidationError(msg.str());
  }
  auto locate = [](double coord, double origin, double h, int n, int& cell, double& frac) {
    double s = (coord - origin) / h;
    // Nodes must reproduce their values exactly.
    if (std::abs(s - std::round(s)) < 1e-9) s = std::round(s);
    s = std::clamp(s, 0.0, static_cast<double>(n - 1));
    cell = std::min(static_cast<int>(std::floor(s)), n - 2);
    frac = s - cell;
  };
  int j = 0;
  double fz = 0.0;
  locate(p[1], g.z0, g.h, g.nz, j, fz);
  if (g.dim == 1) return (1.0 - fz) * values[g.index(0, j)] + fz * values[g.index(0, j + 1)];
  int i = 0;
  double fx = 0.0;
  locate(p[0], g.x0, g.h, g.nx, i, fx);
  const double v00 = values[g.index(i, j)], v10 = values[g.index(i + 1, j)];
  const double v01 = values[g.index(i, j + 1)], v11 = values[g.index(i + 1, j + 1)];
  return (1.0 - fz) * ((1.0 - fx) * v00 + fx * v10) + fz * ((1.0 - fx) * v01 + fx * v11);
}

double sample_field(const MediumModel& model, FieldKind kind, const Point& p) {
  return interpolate(model.grid, kind == FieldKind::kSpeed ? model.c : model.q, p);
}

namespace {

// Distance in cells from node (i, j) to the nearest absorbing face.
int sponge_depth(const MediumModel& m, int i, int j) {
  const Grid& g = m.grid;
  int depth = 1 << 30;
  auto consider = [&](Face f, int d) {
    if (f != m.screen.face) depth = std::min(depth, d);
  };
  consider(Face::kTop, j);
  consider(Face::kBottom, g.nz - 1 - j);
  if (g.dim == 2) {
    consider(Face::kLeft, i);
    consider(Face::kRight, g.nx - 1 - i);
  }
  return depth;
}

}  // namespace

bool in_sponge(const MediumModel& m, int i, int j) {
  return m.sponge_width > 0 && sponge_depth(m, i, j) < m.sponge_width;
}

Field sponge_profile(const MediumModel& m) {
  Field eta(m.grid.size(), 0.0);
  if (m.sponge_width == 0) return eta;
  const double width = m.sponge_width * m.grid.h;
  // Quadratic ramp reaching a nominal normal-incidence reflection of 1e-3.
  const double eta_max = 1.5 * m.bounds.upper * std::log(1e3) / width;
  for (int j = 0; j < m.grid.nz; ++j) {
    for (int i = 0; i < m.grid.nx; ++i) {
      const int d = sponge_depth(m, i, j);
      if (d >= m.sponge_width) continue;
      const double s = static_cast<double>(m.sponge_width - d) / m.sponge_width;
      eta[m.grid.index(i, j)] = eta_max * s * s;
    }
  }
  return eta;
}

std::string model_hash(const MediumModel& m) {
  Sha256 sha;
  const double header[] = {static_cast<double>(m.grid.dim), static_cast<double>(m.grid.nx),
                           static_cast<double>(m.grid.nz), m.grid.x0, m.grid.z0, m.grid.h,
                           m.bounds.lower, m.bounds.upper, static_cast<double>(m.sponge_width),
                           static_cast<double>(m.screen.face), m.screen.from, m.screen.to};
  sha.update(std::span<const double>(header));
  sha.update(std::span<const double>(m.c));
  sha.update(std::span<const double>(m.q));
  return sha.hex_digest();
}

}  // namespace bcm
