#include "doctest.h"
#include "support.hpp"

#include "bcm/boundary_algebra.hpp"
#include "bcm/checks.hpp"
#include "bcm/errors.hpp"
#include "bcm/imaging.hpp"
#include "bcm/measurements.hpp"
#include "bcm/rays.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

using namespace bcm;
using namespace bcm::testing;

namespace {

struct Setup {
  MediumModel model;
  TimeAxis time;
  ControlFamily family;
  MeasurementDataset data;
  ObserverData observer;
  std::vector<double> xi_grid;
  std::vector<WaveBasis> bases;
  WaveBasis basis_T;
};

Setup prepare(MediumModel m, double T, FamilySpec spec, double eps) {
  Setup s;
  s.model = std::move(m);
  s.time = make_time_axis(s.model, T, 0.5, spec.n_layers);
  s.family = make_family(s.model, s.time, spec);
  s.data = synthesize_measurements(s.model, s.time, spec, s.family.controls);
  s.observer = build_observer(s.data, s.family);
  for (int k = 1; k < spec.n_layers; ++k) s.xi_grid.push_back(k * s.family.layer);
  s.bases = build_bases(s.observer, s.xi_grid, eps);
  s.basis_T = orthogonalize(gram_matrix(s.observer, T), eps);
  return s;
}

const Setup& column_setup() {
  static const Setup s = prepare(column(0.005, 1.0), 0.5, FamilySpec{1, 20}, 1e-6);
  return s;
}

// Waves stay clear of the other faces, so the Green identity sees the screen face only.
const Setup& slab_setup() {
  static const Setup s = prepare(slab(0.02, 1.6, 0.6, 0.4, 1.2), 0.3, FamilySpec{39, 10}, 1e-10);
  return s;
}

/// Trace of u^f itself on the screen face over [0, T].
NeumannTrace own_face_trace(const MediumModel& m, const BoundaryControl& f) {
  const ScreenGeometry face = make_face(m.grid, m.screen.face);
  RecordOptions o;
  o.extra_face = &face;
  o.extra_face_last_step = f.n_time - 1;
  return solve_forward(m, f, o).face_trace;
}

BoundaryControl late_step(const Setup& s, double xi0) {
  return separable_control(s.model, s.time.dt, s.time.steps, [](double) { return 1.0; },
                           [&](double t) { return smooth_ramp(t, s.time.T - xi0, 4.0 * s.time.dt); });
}

}  // namespace

TEST_CASE("read delay sits one and a half steps below the sampled time") {
  CHECK(read_delay(0.2, 0.01) == doctest::Approx(0.215));
  ScreenField f(2, 6, 0.1, 0.1);
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 6; ++n) f.at(k, n) = 10.0 * k + n;
  const auto v = read_before(f, 4);
  CHECK(v[0] == doctest::Approx(2.5));
  CHECK(v[1] == doctest::Approx(12.5));
}

TEST_CASE("1D amplitude slice of a step is one above its front and zero below") {
  const Setup& s = column_setup();
  const double xi0 = 0.25;
  const ScreenField cf = apply_connecting(measure(s.model, late_step(s, xi0)).sigma);
  const Portrait p = build_portrait(cf, s.bases, s.observer, s.model.screen);
  REQUIRE(p.n_gamma() == 1);
  for (int m = 0; m < p.n_xi(); ++m) {
    const double xi = p.xi_grid[m];
    if (!p.mask[p.index(0, m)] || std::abs(xi - xi0) < 2.0 * s.family.layer) continue;
    MESSAGE("xi " << xi << ": " << p.at(0, m));
    CHECK(p.at(0, m) == doctest::Approx(xi < xi0 ? 1.0 : 0.0).scale(1.0).epsilon(0.05));
  }
}

TEST_CASE("portrait of the zero control is zero") {
  const Setup& s = column_setup();
  const ScreenField cf = apply_connecting(measure(s.model, make_control(s.model, s.time.dt, s.time.steps)).sigma);
  const Portrait p = build_portrait(cf, s.bases, s.observer, s.model.screen);
  for (double v : p.values) CHECK(v == 0.0);
  CHECK(p.xi_grid.front() == doctest::Approx(read_delay(s.xi_grid.front(), s.time.dt)));
}

TEST_CASE("harmonic products from boundary data equal the interior products") {
  const Setup& s = slab_setup();
  const ScreenGeometry face = make_face(s.model.grid, s.model.screen.face);
  std::mt19937 rng(61);
  for (int trial = 0; trial < 3; ++trial) {
    const BoundaryControl f = random_control(s.model, s.time, rng);
    const Measurement me = measure(s.model, f);
    const NeumannTrace own = own_face_trace(s.model, f);
    RecordOptions o;
    o.snapshot_steps = {s.time.steps};
    const Field u = solve_forward(s.model, f, o).snapshots.front().values;
    for (const HarmonicProbe& a : {HarmonicProbe::one(), HarmonicProbe::coordinate(0), HarmonicProbe::coordinate(1)}) {
      Field af(s.model.grid.size());
      for (int j = 0; j < s.model.grid.nz; ++j)
        for (int i = 0; i < s.model.grid.nx; ++i) af[s.model.grid.index(i, j)] = a.value(s.model.grid.node(i, j));
      const double direct = int_inner(af, u, s.model);
      const double boundary = harmonic_wave_product(a, f, own, face, s.model.screen);
      const double extended = harmonic_product_extended(a, f, me.face, face, s.model.screen);
      CHECK(std::abs(boundary - direct) < 1e-9 * (std::abs(direct) + 1e-3));
      CHECK(std::abs(extended - direct) < 1e-9 * (std::abs(direct) + 1e-3));
    }
  }
}

TEST_CASE("harmonic product of a 1D step") {
  // u = 1 on [0, xi0] at time T, so (1, u) = xi0 and (z, u) = xi0^2 / 2.
  const Setup& s = column_setup();
  const double xi0 = 0.25;
  const BoundaryControl f = late_step(s, xi0);
  const NeumannTrace own = own_face_trace(s.model, f);
  const ScreenGeometry face = make_face(s.model.grid, s.model.screen.face);
  const double one = harmonic_wave_product(HarmonicProbe::one(), f, own, face, s.model.screen);
  const double z = harmonic_wave_product(HarmonicProbe::coordinate(1), f, own, face, s.model.screen);
  CHECK(relative_error(one, xi0) < 0.05);
  CHECK(relative_error(z, 0.5 * xi0 * xi0) < 0.05);
}

TEST_CASE("portrait of the constant harmonic function is one in unit speed") {
  const Setup& s = slab_setup();
  const ScreenGeometry face = make_face(s.model.grid, s.model.screen.face);
  const auto products = harmonic_family_products(HarmonicProbe::one(), s.data, s.family, face, s.model.screen);
  const Portrait p = portrait_harmonic(products, s.bases, s.basis_T, s.observer, s.model.screen);
  const auto tube = tube_mask(p, 2.0);
  int used = 0;
  // The first delay sees one layer of controls and the last two read within a few steps of t = 0.
  for (int k = 0; k < p.n_gamma(); ++k) {
    for (int m = 1; m + 2 < p.n_xi(); ++m) {
      if (!p.mask[p.index(k, m)] || !tube[p.index(k, m)]) continue;
      ++used;
      CHECK(p.at(k, m) == doctest::Approx(1.0).epsilon(0.1));
    }
  }
  CHECK(used > 0);
  HarmonicProbe zero;
  const auto none = harmonic_family_products(zero, s.data, s.family, face, s.model.screen);
  for (double v : portrait_harmonic(none, s.bases, s.basis_T, s.observer, s.model.screen).values) CHECK(v == 0.0);
}

TEST_CASE("recovered wave divides the portrait by beta") {
  const MediumModel m = slab(0.02, 1.0, 1.0, 0.2, 0.8, 4.0);
  Portrait p;
  p.sigma_from = m.screen.from;
  p.sigma_to = m.screen.to;
  for (const auto& n : m.screen.nodes) p.gamma.push_back(n.gamma);
  p.xi_grid = {0.02, 0.04, 0.06};
  p.values.assign(p.gamma.size() * 3, 0.5);
  p.mask.assign(p.values.size(), 1);
  const RayChart chart = trace_rays(m, m.screen, {0.0, 0.02, 0.04, 0.06});
  const WaveRecovery w = recover_wave(p, chart, m.grid);
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    REQUIRE(w.mask[i]);
    CHECK(w.values[i] == doctest::Approx(2.0).epsilon(1e-2));
  }
}

TEST_CASE("smoothed derivative is exact on quadratics") {
  std::vector<double> y;
  const double dx = 0.1;
  for (int i = 0; i < 20; ++i) {
    const double x = i * dx;
    y.push_back(1.0 - 2.0 * x + 3.0 * x * x);
  }
  const auto d = smoothed_derivative(y, dx, 2);
  for (int i = 0; i < 20; ++i) CHECK(d[i] == doctest::Approx(-2.0 + 6.0 * i * dx).epsilon(1e-10));
}

TEST_CASE("tube mask and erosion") {
  Portrait p;
  p.sigma_from = 0.0;
  p.sigma_to = 1.0;
  for (int k = 1; k < 20; ++k) p.gamma.push_back(0.05 * k);
  for (int m = 1; m <= 6; ++m) p.xi_grid.push_back(0.05 * m);
  p.values.assign(p.gamma.size() * p.xi_grid.size(), 0.0);
  p.mask.assign(p.values.size(), 1);
  const auto tube = tube_mask(p, 1.1);
  for (int k = 0; k < p.n_gamma(); ++k) {
    for (int m = 0; m < p.n_xi(); ++m) {
      const double edge = std::min(p.gamma[k], 1.0 - p.gamma[k]);
      CHECK(bool(tube[p.index(k, m)]) == (edge >= 1.1 * std::sqrt(0.05 * p.xi_grid[m])));
    }
  }
  const auto e = erode(p.mask, p, 1);
  for (int k = 0; k < p.n_gamma(); ++k)
    for (int m = 0; m < p.n_xi(); ++m) {
      const bool inner = k > 0 && k + 1 < p.n_gamma() && m > 0 && m + 1 < p.n_xi();
      CHECK(bool(e[p.index(k, m)]) == inner);
    }
}

TEST_CASE("deposit averages values landing on one node") {
  const Grid g = make_grid(2, 1.0, 1.0, 0.1);
  const Deposit d = deposit(g, {{0.31, 0.2}, {0.29, 0.21}, {0.7, 0.7}}, {1.0, 3.0, 5.0}, {1, 1, 0});
  CHECK(d.values[g.index(3, 2)] == doctest::Approx(2.0));
  CHECK(d.count[g.index(3, 2)] == 2);
  CHECK(d.mask[g.index(7, 7)] == 0);
}

TEST_CASE("speed recovery in constant media") {
  for (double c : {1.0, 2.0}) {
    const Setup s = prepare(slab(0.02, 1.6, 0.6, 0.4, 1.2, c), 0.3 / c, FamilySpec{39, 10}, 1e-10);
    const ScreenGeometry face = make_face(s.model.grid, s.model.screen.face);
    std::vector<Portrait> ps;
    for (int axis = -1; axis < 2; ++axis) {
      const HarmonicProbe a = axis < 0 ? HarmonicProbe::one() : HarmonicProbe::coordinate(axis);
      ps.push_back(portrait_harmonic(harmonic_family_products(a, s.data, s.family, face, s.model.screen), s.bases,
                                     s.basis_T, s.observer, s.model.screen));
    }
    SpeedOptions o;
    o.half_window = 4;
    const SpeedRecovery r = recover_speed(ps[0], ps[1], ps[2], s.model.grid, o);
    int used = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < r.speed.size(); ++i) {
      if (!r.mask[i]) continue;
      ++used;
      worst = std::max(worst, std::abs(r.speed[i] - c) / c);
    }
    MESSAGE("c = " << c << ": " << used << " points, max relative error " << worst);
    CHECK(used > 0);
    CHECK(worst < 0.1);
  }
}

TEST_CASE("potential recovery with an impossible threshold masks everything") {
  const Setup& s = slab_setup();
  const ScreenField cf = apply_connecting(measure(s.model, delayed_bump(s.model, s.time, 0.5 * s.time.T)).sigma);
  const Portrait p = build_portrait(cf, s.bases, s.observer, s.model.screen);
  std::vector<double> xs{0.0};
  xs.insert(xs.end(), p.xi_grid.begin(), p.xi_grid.end());
  const RayChart chart = trace_rays(s.model, s.model.screen, xs);
  const WaveRecovery u = recover_wave(p, chart, s.model.grid);
  PotentialOptions o;
  o.threshold = 1.0 + 1e-9;
  const PotentialRecovery r = recover_potential(u, u, p, s.model.grid, o);
  CHECK(std::none_of(r.mask.begin(), r.mask.end(), [](unsigned char v) { return v != 0; }));
  CHECK(!r.diagnostic.empty());
}

TEST_CASE("portrait survives a disk round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "bcm_portrait_round_trip";
  std::filesystem::remove_all(dir);
  Portrait p;
  p.sigma_from = 0.1;
  p.sigma_to = 0.9;
  p.gamma = {0.2, 0.5, 0.8};
  p.xi_grid = {0.1, 0.2};
  p.values = {1.0, -2.0, 3.5, 0.25, 0.0, 7.0};
  p.mask = {1, 0, 1, 1, 1, 0};
  write_portrait(dir, "p", p);
  const Portrait q = read_portrait(dir, "p");
  CHECK(q.gamma == p.gamma);
  CHECK(q.xi_grid == p.xi_grid);
  CHECK(q.values == p.values);
  CHECK(q.mask == p.mask);
  CHECK(std::filesystem::exists(dir / "p.pgm"));
  std::filesystem::remove_all(dir);
}
