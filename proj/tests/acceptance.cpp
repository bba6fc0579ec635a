// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "support.hpp"

#include "bcm/boundary_algebra.hpp"
#include "bcm/checks.hpp"
#include "bcm/eikonal.hpp"
#include "bcm/errors.hpp"
#include "bcm/measurements.hpp"
#include "bcm/rays.hpp"
#include "pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace bcm;
using namespace bcm::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = BCM_CONFIG_DIR;
const fs::path kWork = fs::temp_directory_path() / "bcm_acceptance";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream out;
  out << std::setprecision(3) << v;
  return out.str();
}

cli::Scenario scenario(const std::string& name) {
  cli::RunOptions o;
  o.config = kConfigs / (name + ".ini");
  o.out = kWork / name;
  fs::remove_all(o.out);
  return cli::load_scenario(o);
}

struct Resolution {
  MediumModel model;
  TimeAxis time;
};

/// The lens scenario at its own spacing divided by `refine`.
Resolution lens_at(int refine, int steps_multiple = 1) {
  Config c = Config::from_file(kConfigs / "lens_speed.ini");
  c.set("grid", "spacing", c.get_double("grid", "spacing") / refine);
  c.set("grid", "sponge_width", std::to_string(c.get_int("grid", "sponge_width") * refine));
  Resolution r{build_medium(c), {}};
  r.time = build_time_axis(c, r.model, steps_multiple);
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Max three-point residual over 20 pairs at spacing h and h / 2, and the SBP maximum at h.
struct Refinement {
  double sbp = 0.0;
  double coarse = 0.0;
  double fine = 0.0;
};

Refinement refine_pairs(const std::function<double(const Resolution&, std::mt19937&, TraceStencil)>& residual) {
  const Resolution h = lens_at(1), h2 = lens_at(2);
  Refinement r;
  for (int p = 0; p < 20; ++p) {
    std::mt19937 a(1000 + p), b(1000 + p), c(1000 + p);
    r.sbp = std::max(r.sbp, residual(h, a, TraceStencil::kSummationByParts));
    r.coarse = std::max(r.coarse, residual(h, b, TraceStencil::kThreePoint));
    r.fine = std::max(r.fine, residual(h2, c, TraceStencil::kThreePoint));
  }
  return r;
}

Outcome refinement_outcome(const Refinement& r, double elapsed, double budget) {
  const double ratio = r.coarse / r.fine;
  Outcome o;
  o.pass = r.sbp <= 0.02 && r.coarse <= 0.02 && ratio >= 2.0 && elapsed <= budget;
  o.detail = "max residual " + num(r.sbp) + " (summation-by-parts trace); three-point trace " + num(r.coarse) +
             " at h, " + num(r.fine) + " at h/2, ratio " + num(ratio);
  return o;
}

Outcome duality() {
  const auto t0 = std::chrono::steady_clock::now();
  const Refinement r = refine_pairs([](const Resolution& res, std::mt19937& rng, TraceStencil st) {
    const BoundaryControl f = random_control(res.model, res.time, rng);
    const Field y = random_blob(res.model, res.time.T, rng);
    return duality_residual(res.model, f, y, st).relative();
  });
  return refinement_outcome(r, seconds_since(t0), 120.0);
}

Outcome blagovestchenskii() {
  const auto t0 = std::chrono::steady_clock::now();
  const Refinement r = refine_pairs([](const Resolution& res, std::mt19937& rng, TraceStencil st) {
    const BoundaryControl f = random_control(res.model, res.time, rng);
    const BoundaryControl g = random_control(res.model, res.time, rng);
    SynthesisOptions o;
    o.record_face = false;
    o.stencil = st;
    return connecting_residual(res.model, measure(res.model, f, o).sigma, f, g).relative();
  });
  return refinement_outcome(r, seconds_since(t0), 180.0);
}

Outcome finite_propagation() {
  const Resolution r = lens_at(1);
  double worst = 0.0;
  for (int d = 1; d <= 10; ++d) {
    const double xi = d * r.time.T / 10.0;
    worst = std::max(worst, support_leak(r.model, delayed_bump(r.model, r.time, xi), xi, 2));
  }
  return {worst <= 1e-3, "max energy fraction outside the dilated set over 10 delays " + num(worst)};
}

Outcome jump() {
  Outcome o{true, ""};
  for (const char* name : {"homogeneous_1d", "portrait_homogeneous"}) {
    const cli::Scenario s = scenario(name);
    const JumpCheck j = front_jump(s.model, s.time, 0.35 * s.time.T, 0.15 * s.time.T);
    o.pass = o.pass && j.relative() <= 0.03;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + (s.model.grid.dim == 1 ? "1D" : "2D") + " measured " +
                num(j.measured) + " vs " + num(j.predicted) + " (" + num(100.0 * j.relative()) + "%)";
  }
  return o;
}

Outcome gram_structure(const cli::Scenario& s) {
  const MeasurementDataset data = read_dataset(s.out / "dataset");
  const ControlFamily family = make_family(s.model, s.time, s.family);
  const GramSystem g = gram_matrix(build_observer(data, family), s.time.T);
  const Eigen::VectorXd& ev = g.eigenvalues;
  const double lmax = ev(ev.size() - 1), lmin = ev(0);
  std::cout << "  Gram spectrum, N = " << ev.size() << ", lambda_max = " << num(lmax) << "\n";
  std::cout << "    modes above 10^-k lambda_max:";
  for (int k = 1; k <= 12; k += 1) {
    const double floor = lmax * std::pow(10.0, -k);
    std::cout << " k=" << k << ":" << std::count_if(ev.data(), ev.data() + ev.size(), [&](double v) { return v > floor; });
  }
  std::cout << "\n    lambda_i / lambda_max at i = ";
  for (int i = 0; i < ev.size(); i += std::max<int>(1, ev.size() / 12)) {
    std::cout << i << ":" << num(ev(ev.size() - 1 - i) / lmax) << " ";
  }
  std::cout << "\n";
  const bool pass = g.symmetry_residual < 0.01 && lmin > -1e-3 * lmax;
  return {pass, "symmetry residual " + num(g.symmetry_residual) + ", lambda_min / lambda_max " + num(lmin / lmax) +
                    ", spectrum logged above"};
}

Outcome orthonormality() {
  const Resolution r = lens_at(1, 8);
  const TimeAxis& time = r.time;
  const FamilySpec spec{8, 8};
  const ControlFamily family = make_family(r.model, time, spec);
  SynthesisOptions so;
  so.record_face = false;
  const MeasurementDataset data = synthesize_measurements(r.model, time, spec, family.controls, so);
  const ObserverData obs = build_observer(data, family);
  const WaveBasis b = orthogonalize(gram_matrix(obs, time.T), 1e-4);
  double off = 0.0, diag = 0.0;
  for (int i = 0; i < b.rank(); ++i) {
    const ScreenField ci = basis_connected(b, i, obs);
    for (int j = 0; j < b.rank(); ++j) {
      const double v = ext_inner(ci, basis_control(b, j, family));
      if (i == j) {
        diag = std::max(diag, std::abs(v - 1.0));
      } else {
        off = std::max(off, std::abs(v));
      }
    }
  }
  return {off < 0.05 && diag <= 0.05, "N = 64, retained " + std::to_string(b.rank()) + " modes, max off-diagonal " +
                                          num(off) + ", max diagonal deviation " + num(diag)};
}

Outcome portrait_fidelity() {
  const auto t0 = std::chrono::steady_clock::now();
  const cli::Scenario s = scenario("portrait_homogeneous");
  cli::cmd_synthesize(s);
  const cli::VisualizeResult v = cli::cmd_visualize(s);
  const double elapsed = seconds_since(t0);
  return {v.relative_l2 <= 0.15 && elapsed <= 600.0,
          "relative L2 vs direct transfer " + num(v.relative_l2) + " on " + std::to_string(v.points) + " points"};
}

Outcome speed(const cli::Scenario& s, double synthesis_seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const cli::SpeedResult r = cli::cmd_recover_speed(s);
  const double elapsed = synthesis_seconds + seconds_since(t0);
  return {r.relative_l2 <= 0.10 && r.max_interior <= 0.20 && elapsed <= 1200.0,
          "relative L2 " + num(r.relative_l2) + " on " + std::to_string(r.points) + " points, max pointwise " +
              num(r.max_interior) + " on " + std::to_string(r.interior_points) + " interior points, end to end " +
              num(elapsed) + " s"};
}

Outcome potential() {
  const cli::Scenario disk = scenario("potential_disk");
  cli::cmd_synthesize(disk);
  const cli::PotentialResult d = cli::cmd_recover_potential(disk);
  const cli::Scenario zero = scenario("potential_zero");
  cli::cmd_synthesize(zero);
  const cli::PotentialResult z = cli::cmd_recover_potential(zero);
  const double plateau_mean_error = std::abs(d.plateau_mean - 20.0) / 20.0;
  const bool pass = d.plateau_points > 0 && d.plateau_rms <= 0.2 && z.mean_abs_q < z.recovery.noise_floor;
  return {pass, "anomaly: relative RMS " + num(d.plateau_rms) + " over " + std::to_string(d.plateau_points) +
                    " plateau points (mean off by " + num(100.0 * plateau_mean_error) + "%); q = 0: mean |q| " +
                    num(z.mean_abs_q) + " vs noise floor " + num(z.recovery.noise_floor)};
}

Outcome eikonal_and_rays() {
  std::ostringstream detail;
  bool pass = true;
  {
    const MediumModel m = slab(0.01, 2.0, 1.0, 0.0, 2.0);
    const EikonalField e = solve_eikonal(m, m.screen);
    double worst = 0.0;
    for (int j = 0; j < m.grid.nz; ++j)
      for (int i = 1; i + 1 < m.grid.nx; ++i) worst = std::max(worst, std::abs(e.at(i, j) - m.grid.z(j)));
    pass = pass && worst < 1e-12;
    detail << "constant medium tau error " << num(worst);
  }
  {
    // Graph metric anisotropy is O(1) on oblique paths; O(h) is measured where paths run along the grid.
    const double anisotropy = std::sqrt(4.0 - 2.0 * std::sqrt(2.0));
    std::vector<double> aligned;
    bool banded = true;
    for (int refine : {1, 2}) {
      const MediumModel m = lens_at(refine).model;
      const EikonalField e = solve_eikonal(m, m.screen);
      const Field d = graph_distances(m);
      const double h = m.grid.h;
      double a = 0.0;
      for (int j = 0; j < m.grid.nz; ++j) {
        for (int i = 0; i < m.grid.nx; ++i) {
          const std::size_t k = m.grid.index(i, j);
          if (!std::isfinite(e.tau[k])) continue;
          banded = banded && d[k] >= e.tau[k] - 2.0 * h && d[k] <= anisotropy * e.tau[k] + 2.0 * h;
          if (std::abs(m.grid.x(i) - 1.0) < 0.2 && m.grid.z(j) < 0.2) a = std::max(a, std::abs(e.tau[k] - d[k]));
        }
      }
      aligned.push_back(a / h);
    }
    pass = pass && banded && aligned[0] <= 1.0 && aligned[1] <= 1.0;
    detail << "; Dijkstra under the screen " << num(aligned[0]) << " h at h, " << num(aligned[1])
           << " h at h/2, anisotropy band " << (banded ? "held" : "violated");
  }
  {
    const MediumModel m = slab(0.01, 2.0, 1.0, 0.5, 1.5);
    std::vector<double> xs;
    for (int i = 0; i <= 12; ++i) xs.push_back(0.05 * i);
    const RayChart chart = trace_rays(m, m.screen, xs);
    double worst = 0.0;
    for (std::size_t c = 0; c < chart.J.size(); ++c)
      if (chart.regular[c]) worst = std::max(worst, std::abs(chart.J[c] - 1.0));
    pass = pass && worst < 0.01;
    detail << "; max |J - 1| " << num(worst);
  }
  return {pass, detail.str()};
}

}  // namespace

int main() {
  fs::create_directories(kWork);
  int failures = 0;
  auto run = [&](int id, const std::string& name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << std::setw(2) << id << " " << name << ": " << o.detail << " ["
              << std::fixed << std::setprecision(1) << seconds_since(t0) << " s]" << std::defaultfloat << std::endl;
  };

  run(1, "duality", duality);
  run(2, "Blagovestchenskii identity", blagovestchenskii);
  run(3, "finite propagation", finite_propagation);
  run(4, "Geometric Optics jump", jump);

  // Criteria 5 and 8 share the lens dataset.
  const cli::Scenario lens = scenario("lens_speed");
  double lens_synthesis = 0.0;
  run(5, "Gram structure", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    cli::cmd_synthesize(lens);
    lens_synthesis = seconds_since(t0);
    return gram_structure(lens);
  });
  run(6, "wave basis orthonormality", orthonormality);
  run(7, "portrait fidelity", portrait_fidelity);
  run(8, "speed recovery", [&] { return speed(lens, lens_synthesis); });
  run(9, "potential recovery", potential);
  run(10, "eikonal and ray oracles", eikonal_and_rays);

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  fs::remove_all(kWork);
  return failures == 0 ? 0 : 1;
}
