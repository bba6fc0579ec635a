#pragma once

#include "bcm/config.hpp"
#include "bcm/grid.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace bcm {

struct SpeedBounds {
  double lower = 0.0;  // c_*
  double upper = 0.0;  // c^*
};

/// One boundary node together with its inward neighbours along the normal.
struct ScreenNode {
  std::size_t node = 0;
  std::size_t inward = 0;
  std::size_t inward2 = 0;
  double gamma = 0.0;  // tangential coordinate along the face
  Point position{};
};

/// The accessible part sigma of one grid-aligned face. Nodes are the grid
/// nodes strictly inside the open interval (from, to); in 1D the screen is
/// the single top node.
struct ScreenGeometry {
  Face face = Face::kTop;
  double from = 0.0;
  double to = 0.0;
  double gamma_spacing = 1.0;
  Point normal_in{0.0, 1.0};
  std::vector<ScreenNode> nodes;

  std::size_t size() const { return nodes.size(); }
};

/// Sampled speed and potential on a rectangle, with the screen and the
/// absorbing layer. Immutable after build_medium.
struct MediumModel {
  Grid grid;
  Field c;  // length/time
  Field q;  // 1/length^2
  SpeedBounds bounds;
  int sponge_width = 0;  // cells, on every face except the screen face
  ScreenGeometry screen;
  std::string description;
};

struct TimeAxis {
  double T = 0.0;
  double dt = 0.0;
  int steps = 0;  // steps * dt == T

  int steps_2T() const { return 2 * steps; }
  double time(int n) const { return n * dt; }
};

enum class FieldKind { kSpeed, kPotential };

/// Builds and validates a model from the [grid], [medium] and [screen]
/// sections of a scenario config.
MediumModel build_medium(const Config& config);

/// Builds the time axis from [time]; the step count is rounded up so that
/// it is a multiple of `steps_multiple` and the CFL limit holds.
TimeAxis build_time_axis(const Config& config, const MediumModel& model, int steps_multiple = 1);

/// Explicit construction helpers used by tests and the pipeline.
Grid make_grid(int dim, double extent_x, double extent_z, double h, double x0 = 0.0, double z0 = 0.0);
ScreenGeometry make_screen(const Grid& grid, Face face, double from, double to);
/// All nodes of a face except its two corners (the extended measurement set).
ScreenGeometry make_face(const Grid& grid, Face face);
TimeAxis make_time_axis(const MediumModel& model, double T, double cfl, int steps_multiple = 1);

/// Throws ValidationError on bound violations, shape mismatch, a misplaced
/// screen, or non-positive spacing.
void validate(const MediumModel& model);
void validate_cfl(const MediumModel& model, double dt);
double max_cfl_factor(int dim);

/// Multilinear interpolation of c or q; throws outside the domain.
double sample_field(const MediumModel& model, FieldKind kind, const Point& p);
/// Multilinear interpolation of an arbitrary nodal field on the grid.
double interpolate(const Grid& grid, const Field& values, const Point& p);

/// Damping rate eta (1/time) per node; zero outside the absorbing layer.
Field sponge_profile(const MediumModel& model);
bool in_sponge(const MediumModel& model, int i, int j);

/// Content hash (hex SHA-256) of grid, fields, bounds and screen.
std::string model_hash(const MediumModel& model);

}  // namespace bcm
