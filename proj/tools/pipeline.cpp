#include "pipeline.hpp"

#include "bcm/boundary_algebra.hpp"
#include "bcm/checks.hpp"
#include "bcm/eikonal.hpp"
#include "bcm/errors.hpp"
#include "bcm/raster_io.hpp"
#include "bcm/rays.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

namespace bcm::cli {

namespace fs = std::filesystem;

void Report::add(const std::string& key, double value) { add(key, format_double(value)); }

std::string Report::str() const {
  std::ostringstream out;
  out << "# " << title_ << "\n";
  for (const auto& [k, v] : lines_) out << k << ": " << v << "\n";
  return out.str();
}

void Report::write(const fs::path& path) const {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << str();
  if (!out) throw IoError("write failed: " + path.string());
}

Scenario load_scenario(const RunOptions& options) {
  if (!fs::exists(options.config)) throw IoError("config not found: " + options.config.string());
  Scenario s;
  s.config = Config::from_file(options.config);
  s.out = options.out;
  s.model = build_medium(s.config);
  s.family.n_gamma = s.config.get_int("family", "n_gamma", s.family.n_gamma);
  s.family.n_layers = s.config.get_int("family", "n_layers", s.family.n_layers);
  s.time = build_time_axis(s.config, s.model, s.family.n_layers);
  s.workers = options.workers.value_or(s.config.get_int("synthesis", "workers", 1));
  if (s.workers < 1) throw ValidationError("--workers must be >= 1");
  s.seed = options.seed.value_or(static_cast<unsigned>(s.config.get_int("verify", "seed", 1)));
  s.cutoff = options.cutoff.value_or(s.config.get_double("basis", "cutoff", 1e-4));
  if (!(s.cutoff > 0.0) || s.cutoff >= 1.0) throw ValidationError("--cutoff must lie in (0, 1)");
  s.probe.kind = s.config.get_string("probe", "kind", "pulse");
  if (s.probe.kind != "pulse" && s.probe.kind != "ramp") {
    throw ValidationError("[probe] kind must be pulse or ramp");
  }
  s.probe.start = s.config.get_double("probe", "start", 0.1 * s.time.T);
  s.probe.width = s.config.get_double("probe", "width", 0.3 * s.time.T);
  s.probe.taper = s.config.get_double("probe", "taper", 0.25 * (s.model.screen.to - s.model.screen.from));
  if (!(s.probe.width > 0.0) || s.probe.start < 0.0 || s.probe.start + s.probe.width > s.time.T) {
    throw ValidationError("[probe] start and width must fit in [0, T]");
  }
  return s;
}

BoundaryControl probe_control(const Scenario& s, int order) {
  const auto& screen = s.model.screen;
  const ProbeSpec p = s.probe;
  auto spatial = [&](double g) { return screen_taper(screen, g, p.taper); };
  if (p.kind == "ramp") {
    return separable_control(s.model, s.time.dt, s.time.steps, spatial,
                             [&](double t) { return smooth_ramp(t, p.start, p.width, order); });
  }
  if (order != 0) throw ValidationError("derivatives are available for the ramp probe only");
  return separable_control(s.model, s.time.dt, s.time.steps, spatial,
                           [&](double t) { return smooth_bump(t, p.start, p.start + p.width); });
}

namespace {

fs::path dataset_dir(const Scenario& s) { return s.out / "dataset"; }

/// Dataset, family, observer data and wave bases shared by the imaging stages.
struct Observed {
  MeasurementDataset data;
  ControlFamily family;
  ObserverData observer;
  std::vector<double> xi_grid;  // portrait delays, T excluded
  std::vector<WaveBasis> bases;
  WaveBasis basis_T;
};

void check_dataset(const Scenario& s, const MeasurementDataset& data) {
  if (data.model_hash != model_hash(s.model)) {
    throw ValidationError("dataset was synthesized for a different model (run synthesize again)");
  }
  if (data.time.steps != s.time.steps || std::abs(data.time.T - s.time.T) > 1e-12 * s.time.T) {
    throw ValidationError("dataset time axis does not match the scenario");
  }
  if (data.family.n_gamma != s.family.n_gamma || data.family.n_layers != s.family.n_layers) {
    throw ValidationError("dataset family does not match the scenario");
  }
}

std::unique_ptr<Observed> observe(const Scenario& s) {
  auto st = std::make_unique<Observed>();
  st->data = read_dataset(dataset_dir(s));
  check_dataset(s, st->data);
  if (st->data.size() == 0) throw ValidationError("dataset is empty");
  st->family = make_family(s.model, s.time, s.family);
  st->observer = build_observer(st->data, st->family);
  for (int m = 1; m < s.family.n_layers; ++m) st->xi_grid.push_back(m * st->family.layer);
  st->bases = build_bases(st->observer, st->xi_grid, s.cutoff);
  const GramSystem gT = gram_matrix(st->observer, s.time.T);
  st->basis_T = orthogonalize(gT, s.cutoff);
  write_gram_system(s.out / "bases" / "gram_T", gT);
  write_wave_basis(s.out / "bases" / "basis_T", st->basis_T, s.family.describe());
  return st;
}

std::vector<double> chart_delays(const std::vector<double>& xi_grid) {
  std::vector<double> xs{0.0};
  xs.insert(xs.end(), xi_grid.begin(), xi_grid.end());
  return xs;
}

std::string rank_list(const std::vector<WaveBasis>& bases) {
  std::ostringstream out;
  for (std::size_t i = 0; i < bases.size(); ++i) out << (i ? " " : "") << bases[i].rank();
  return out.str();
}

Field final_wave(const MediumModel& model, const BoundaryControl& f) {
  RecordOptions options;
  options.snapshot_steps = {f.n_time - 1};
  return solve_forward(model, f, options).snapshots.front().values;
}

void describe(Report& r, const Scenario& s) {
  r.add("model", s.model.description);
  r.add("model_hash", model_hash(s.model));
  r.add("grid", std::to_string(s.model.grid.nx) + " x " + std::to_string(s.model.grid.nz) + ", h = " +
                    format_double(s.model.grid.h));
  r.add("T", s.time.T);
  r.add("dt", s.time.dt);
  r.add("steps", s.time.steps);
  r.add("family", s.family.describe());
}

std::string brief(double value) {
  std::ostringstream out;
  out.precision(4);
  out << value;
  return out.str();
}

}  // namespace

SynthesizeResult cmd_synthesize(const Scenario& s) {
  validate_reach(s.model, s.time.T);
  const ControlFamily family = make_family(s.model, s.time, s.family);
  SynthesisOptions options;
  options.workers = s.workers;
  MeasurementDataset data = synthesize_measurements(s.model, s.time, s.family, family.controls, options);
  data.description = s.config.get_string("scenario", "name", "unnamed scenario");
  write_dataset(dataset_dir(s), data);
  {
    std::ofstream cfg(s.out / "scenario.ini");
    cfg << s.config.to_string();
    if (!cfg) throw IoError("cannot write " + (s.out / "scenario.ini").string());
  }
  SynthesizeResult result{data.size(), dataset_hash(data)};
  Report r("synthesize");
  describe(r, s);
  r.add("controls", result.controls);
  r.add("dataset_hash", result.dataset_hash);
  const EikonalField eik = solve_eikonal(s.model, s.model.screen);
  r.add("sponge_arrival_time", sponge_arrival_time(s.model, eik));
  r.add("far_boundary_arrival_time", far_boundary_arrival_time(s.model, eik));
  r.write(s.out / "synthesize" / "report.txt");
  return result;
}

bool VerifyResult::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

VerifyResult cmd_verify(const Scenario& s) {
  VerifyResult result;
  Report r("verify");
  describe(r, s);
  r.add("seed", static_cast<long long>(s.seed));
  const MeasurementDataset data = read_dataset(dataset_dir(s));
  if (data.size() == 0) {
    result.warnings.push_back("dataset is empty: no checks were run");
    r.add("checks", 0);
    r.add("warning", result.warnings.back());
    r.write(s.out / "verify" / "report.txt");
    return result;
  }
  check_dataset(s, data);
  const ControlFamily family = make_family(s.model, s.time, s.family);
  if (family.controls.size() != data.size()) throw ValidationError("dataset size does not match the family");
  const double tol_pair = s.config.get_double("verify", "pair_tolerance", 0.02);
  std::mt19937 rng(s.seed);
  const int n = static_cast<int>(data.size());

  // Blagovestchenskii identity per stored trace, paired with the next member.
  {
    const int max_controls = s.config.get_int("verify", "max_controls", 0);
    const int stride = max_controls > 0 ? std::max(1, n / max_controls) : 1;
    VerifyCheck c{"Blagovestchenskii identity (per control)", 0.0, tol_pair, true, ""};
    std::ostringstream failing;
    int failures = 0;
    for (int k = 0; k < n; k += stride) {
      const int partner = (k + 1) % n;
      const PairResidual res =
          connecting_residual(s.model, data.records[k].sigma, family.controls[k], family.controls[partner]);
      const double rel = res.relative();
      c.value = std::max(c.value, rel);
      if (!(rel <= tol_pair)) {
        if (failures < 8) failing << (failures ? ", " : "") << "control " << k << " (residual " << brief(rel) << ")";
        ++failures;
      }
    }
    c.pass = failures == 0;
    c.detail = c.pass ? "all controls" : std::to_string(failures) + " failing: " + failing.str();
    result.checks.push_back(c);
  }
  // Duality on random smooth pairs.
  {
    const int pairs = s.config.get_int("verify", "pairs", 4);
    VerifyCheck c{"duality (random pairs)", 0.0, tol_pair, true, std::to_string(pairs) + " pairs"};
    for (int p = 0; p < pairs; ++p) {
      const BoundaryControl f = random_control(s.model, s.time, rng);
      const Field y = random_blob(s.model, s.time.T, rng);
      c.value = std::max(c.value, duality_residual(s.model, f, y).relative());
    }
    c.pass = c.value <= c.limit;
    result.checks.push_back(c);
  }
  // Finite propagation speed: bumps supported on [T - xi, T] for distinct delays.
  {
    const int delays = s.config.get_int("verify", "support_delays", 10);
    if (delays < 1) throw ValidationError("[verify] support_delays must be positive");
    VerifyCheck c{"finite propagation (energy outside dilated Omega^xi)", 0.0, 1e-3, true, ""};
    std::ostringstream detail;
    for (int d = 1; d <= delays; ++d) {
      const double xi = d * s.time.T / delays;
      const double leak = support_leak(s.model, delayed_bump(s.model, s.time, xi), xi, 2);
      c.value = std::max(c.value, leak);
      detail << (d > 1 ? " " : "") << "xi=" << brief(xi) << ":" << brief(leak);
    }
    c.detail = detail.str();
    c.pass = c.value <= c.limit;
    result.checks.push_back(c);
  }
  // Gram structure.
  {
    const ObserverData obs = build_observer(data, family);
    VerifyCheck sym{"Gram symmetry residual", obs.symmetry_residual_full, 0.01, true, ""};
    sym.pass = sym.value < sym.limit;
    result.checks.push_back(sym);
    const GramSystem g = gram_matrix(obs, s.time.T);
    const double lmax = g.eigenvalues(g.eigenvalues.size() - 1);
    VerifyCheck neg{"Gram most negative eigenvalue / lambda_max", g.eigenvalues(0) / lmax, -1e-3, true, ""};
    neg.pass = neg.value > neg.limit;
    result.checks.push_back(neg);
  }
  // Geometric Optics transport of a front jump.
  {
    const double delay = s.config.get_double("verify", "jump_delay", 0.35 * s.time.T);
    const double width = s.config.get_double("verify", "jump_width", 0.15 * s.time.T);
    const JumpCheck j = front_jump(s.model, s.time, delay, width);
    VerifyCheck c{"front jump vs Geometric Optics", j.relative(), 0.03, true, ""};
    std::ostringstream detail;
    detail << "measured " << brief(j.measured) << " predicted " << brief(j.predicted) << " at ("
           << brief(j.where[0]) << ", " << brief(j.where[1]) << ")";
    c.detail = detail.str();
    c.pass = c.value <= c.limit;
    result.checks.push_back(c);
  }
  r.add("checks", result.checks.size());
  for (const auto& c : result.checks) {
    r.add(c.name, std::string(c.pass ? "PASS" : "FAIL") + " value " + format_double(c.value) + " limit " +
                      format_double(c.limit) + (c.detail.empty() ? "" : " | " + c.detail));
  }
  r.add("result", result.ok() ? "PASS" : "FAIL");
  r.write(s.out / "verify" / "report.txt");
  return result;
}

VisualizeResult cmd_visualize(const Scenario& s) {
  const auto st = observe(s);
  const BoundaryControl f = probe_control(s, 0);
  SynthesisOptions options;
  options.record_face = false;
  const Measurement me = measure(s.model, f, options);
  VisualizeResult result;
  result.portrait = build_portrait(apply_connecting(me.sigma), st->bases, st->observer, s.model.screen);
  result.rank_T = st->basis_T.rank();
  const fs::path dir = s.out / "visualize";
  write_portrait(dir, "portrait", result.portrait);

  // Ground truth: direct transfer of the forward-solved wave.
  const RayChart chart = trace_rays(s.model, s.model.screen, chart_delays(result.portrait.xi_grid));
  const Field u = final_wave(s.model, f);
  result.direct = result.portrait;
  std::fill(result.direct.values.begin(), result.direct.values.end(), 0.0);
  std::fill(result.direct.mask.begin(), result.direct.mask.end(), 0);
  double num = 0.0, den = 0.0;
  for (int k = 0; k < result.portrait.n_gamma(); ++k) {
    for (int m = 0; m < result.portrait.n_xi(); ++m) {
      const std::size_t i = result.portrait.index(k, m), c = chart.index(k, m + 1);
      if (!chart.regular[c] || !s.model.grid.contains(chart.positions[c])) continue;
      const double d = chart.beta[c] * interpolate(s.model.grid, u, chart.positions[c]);
      result.direct.values[i] = d;
      result.direct.mask[i] = 1;
      if (!result.portrait.mask[i]) continue;
      num += std::pow(result.portrait.values[i] - d, 2);
      den += d * d;
      ++result.points;
    }
  }
  result.relative_l2 = den > 0.0 ? std::sqrt(num / den) : 0.0;
  write_portrait(dir, "direct_transfer", result.direct);

  Report r("visualize");
  describe(r, s);
  r.add("probe", s.probe.kind + " start " + format_double(s.probe.start) + " width " + format_double(s.probe.width));
  r.add("cutoff", s.cutoff);
  r.add("rank_T", result.rank_T);
  r.add("rank_per_delay", rank_list(st->bases));
  r.add("portrait_sha256", sha256_hex(result.portrait.values));
  r.add("compared_points", result.points);
  r.add("relative_l2_vs_direct_transfer", result.relative_l2);
  r.write(dir / "report.txt");
  return result;
}

SpeedResult cmd_recover_speed(const Scenario& s) {
  const auto st = observe(s);
  if (st->data.face_nodes == 0) throw ValidationError("speed recovery needs face traces in the dataset");
  const ScreenGeometry face = make_face(s.model.grid, s.model.screen.face);
  std::vector<Portrait> ps;
  const fs::path dir = s.out / "speed";
  const char* names[3] = {"one", "x", "z"};
  for (int axis = -1; axis < 2; ++axis) {
    const HarmonicProbe a = axis < 0 ? HarmonicProbe::one() : HarmonicProbe::coordinate(axis);
    const auto products = harmonic_family_products(a, st->data, st->family, face, s.model.screen);
    ps.push_back(portrait_harmonic(products, st->bases, st->basis_T, st->observer, s.model.screen));
    write_portrait(dir, names[axis + 1], ps.back());
  }
  SpeedOptions options;
  options.half_window = s.config.get_int("speed", "half_window", options.half_window);
  options.one_floor = s.config.get_double("speed", "one_floor", options.one_floor);
  options.edge_margin = s.config.get_double("speed", "edge_margin", options.edge_margin);
  SpeedResult result;
  result.recovery = recover_speed(ps[0], ps[1], ps[2], s.model.grid, options);
  const SpeedRecovery& sr = result.recovery;
  write_field(dir, "speed", s.model.grid, sr.grid.values, sr.grid.mask);

  // Ground truth comparison on the chart raster.
  result.interior = erode(sr.mask, ps[0], 2);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < sr.speed.size(); ++i) {
    if (!sr.mask[i] || !s.model.grid.contains(sr.positions[i])) continue;
    const double ct = sample_field(s.model, FieldKind::kSpeed, sr.positions[i]);
    num += std::pow(sr.speed[i] - ct, 2);
    den += ct * ct;
    ++result.points;
    if (result.interior[i]) {
      result.max_interior = std::max(result.max_interior, std::abs(sr.speed[i] - ct) / ct);
      ++result.interior_points;
    }
  }
  result.relative_l2 = den > 0.0 ? std::sqrt(num / den) : 0.0;

  Report r("recover-speed");
  describe(r, s);
  r.add("cutoff", s.cutoff);
  r.add("rank_T", st->basis_T.rank());
  r.add("rank_per_delay", rank_list(st->bases));
  r.add("half_window", options.half_window);
  r.add("edge_margin", options.edge_margin);
  r.add("mask_points", result.points);
  r.add("interior_points", result.interior_points);
  r.add("relative_l2", result.relative_l2);
  r.add("max_relative_error_interior", result.max_interior);
  r.add("speed_sha256", sha256_hex(sr.grid.values));
  if (!sr.diagnostic.empty()) r.add("diagnostic", sr.diagnostic);
  r.write(dir / "report.txt");
  return result;
}

PotentialResult cmd_recover_potential(const Scenario& s) {
  if (s.config.get_string("medium", "c", "constant") != "constant" ||
      s.config.get_double("medium", "c_value", 1.0) != 1.0) {
    throw ValidationError("potential recovery needs a unit speed (c = constant, c_value = 1)");
  }
  if (s.probe.kind != "ramp") throw ValidationError("potential recovery needs [probe] kind = ramp");
  const auto st = observe(s);
  const fs::path dir = s.out / "potential";
  SynthesisOptions options;
  options.record_face = false;
  const BoundaryControl f = probe_control(s, 0), ftt = probe_control(s, 2);
  Portrait pu = build_portrait(apply_connecting(measure(s.model, f, options).sigma), st->bases, st->observer,
                               s.model.screen);
  Portrait ptt = build_portrait(apply_connecting(measure(s.model, ftt, options).sigma), st->bases, st->observer,
                                s.model.screen);
  write_portrait(dir, "u", pu);
  write_portrait(dir, "u_tt", ptt);

  // The chart uses the known unit speed only.
  MediumModel known = s.model;
  known.c.assign(known.grid.size(), 1.0);
  known.q.assign(known.grid.size(), 0.0);
  known.bounds = {1.0, 1.0};
  const RayChart chart = trace_rays(known, known.screen, chart_delays(pu.xi_grid));
  const WaveRecovery u = recover_wave(pu, chart, s.model.grid);
  const WaveRecovery utt = recover_wave(ptt, chart, s.model.grid);

  PotentialOptions po;
  po.threshold = s.config.get_double("potential", "threshold", po.threshold);
  po.half_window_gamma = s.config.get_int("potential", "half_window_gamma", po.half_window_gamma);
  po.half_window_xi = s.config.get_int("potential", "half_window_xi", po.half_window_xi);
  po.edge_margin = s.config.get_double("potential", "edge_margin", po.edge_margin);
  // Behind the ramp the wave is slowly varying; the fit window must stay there.
  po.xi_max = s.time.T - (s.probe.start + s.probe.width) - po.half_window_xi * st->family.layer;
  PotentialResult result;
  result.recovery = recover_potential(u, utt, pu, s.model.grid, po);
  const PotentialRecovery& pr = result.recovery;
  write_field(dir, "q", s.model.grid, pr.grid.values, pr.grid.mask);

  // Ground truth comparison.
  const Field utrue = final_wave(s.model, f);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (!u.mask[i] || !s.model.grid.contains(u.positions[i])) continue;
    const double t = interpolate(s.model.grid, utrue, u.positions[i]);
    num += std::pow(u.values[i] - t, 2);
    den += t * t;
  }
  result.wave_relative_l2 = den > 0.0 ? std::sqrt(num / den) : 0.0;
  const double qmax = *std::max_element(s.model.q.begin(), s.model.q.end());
  double sq = 0.0, sum = 0.0, sum_abs = 0.0;
  for (std::size_t i = 0; i < pr.q.size(); ++i) {
    if (!pr.mask[i]) continue;
    ++result.points;
    sum_abs += std::abs(pr.q[i]);
    const double qt = sample_field(s.model, FieldKind::kPotential, pr.positions[i]);
    if (qmax > 0.0 && qt >= (1.0 - 1e-9) * qmax) {
      sq += std::pow(pr.q[i] - qt, 2);
      sum += pr.q[i];
      ++result.plateau_points;
    }
  }
  if (result.points > 0) result.mean_abs_q = sum_abs / result.points;
  if (result.plateau_points > 0) {
    result.plateau_mean = sum / result.plateau_points;
    result.plateau_rms = std::sqrt(sq / result.plateau_points) / qmax;
  }

  Report r("recover-potential");
  describe(r, s);
  r.add("cutoff", s.cutoff);
  r.add("rank_T", st->basis_T.rank());
  r.add("probe", "ramp start " + format_double(s.probe.start) + " width " + format_double(s.probe.width));
  r.add("xi_max", po.xi_max);
  r.add("fit_window", std::to_string(2 * po.half_window_gamma + 1) + " x " + std::to_string(2 * po.half_window_xi + 1));
  r.add("mask_points", result.points);
  r.add("wave_relative_l2", result.wave_relative_l2);
  r.add("mean_abs_q", result.mean_abs_q);
  r.add("noise_floor", pr.noise_floor);
  r.add("true_q_max", qmax);
  r.add("plateau_points", result.plateau_points);
  r.add("plateau_mean", result.plateau_mean);
  r.add("plateau_relative_rms", result.plateau_rms);
  r.add("q_sha256", sha256_hex(pr.grid.values));
  if (!pr.diagnostic.empty()) r.add("diagnostic", pr.diagnostic);
  r.write(dir / "report.txt");
  return result;
}

}  // namespace bcm::cli
