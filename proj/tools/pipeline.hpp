#pragma once

#include "bcm/config.hpp"
#include "bcm/control.hpp"
#include "bcm/imaging.hpp"
#include "bcm/measurements.hpp"
#include "bcm/medium.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bcm::cli {

/// Command-line overrides; unset fields fall back to the scenario file.
struct RunOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<int> workers;
  std::optional<unsigned> seed;
  std::optional<double> cutoff;
};

/// Probe control used by visualize and recover-potential:
///   pulse: taper(gamma) * bump(t) on [start, start + width]
///   ramp:  taper(gamma) * ramp(t) rising over [start, start + width]
struct ProbeSpec {
  std::string kind = "pulse";
  double start = 0.0;
  double width = 0.0;
  double taper = 0.0;
};

struct Scenario {
  Config config;
  std::filesystem::path out;
  MediumModel model;
  TimeAxis time;
  FamilySpec family;
  ProbeSpec probe;
  int workers = 1;
  unsigned seed = 0;
  double cutoff = 1e-4;
};

Scenario load_scenario(const RunOptions& options);

/// The probe control (order 0) or its second time derivative (order 2).
BoundaryControl probe_control(const Scenario& scenario, int order = 0);

/// Plain-text report: ordered `key: value` lines.
class Report {
 public:
  explicit Report(std::string title) : title_(std::move(title)) {}
  void add(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }
  void add(const std::string& key, double value);
  void add(const std::string& key, long long value) { add(key, std::to_string(value)); }
  void add(const std::string& key, int value) { add(key, std::to_string(value)); }
  void add(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }
  void write(const std::filesystem::path& path) const;
  std::string str() const;

 private:
  std::string title_;
  std::vector<std::pair<std::string, std::string>> lines_;
};

struct SynthesizeResult {
  std::size_t controls = 0;
  std::string dataset_hash;
};
SynthesizeResult cmd_synthesize(const Scenario& scenario);

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = true;
  std::string detail;
};
struct VerifyResult {
  std::vector<VerifyCheck> checks;
  std::vector<std::string> warnings;
  bool ok() const;
};
/// Runs the checks and writes verify/report.txt. Does not throw on failed
/// checks; the caller maps !ok() to the invariant-failure exit code.
VerifyResult cmd_verify(const Scenario& scenario);

struct VisualizeResult {
  Portrait portrait;
  Portrait direct;  // beta * u(x(gamma, xi), T) from a forward solve
  double relative_l2 = 0.0;
  int points = 0;
  int rank_T = 0;
};
VisualizeResult cmd_visualize(const Scenario& scenario);

struct SpeedResult {
  SpeedRecovery recovery;
  std::vector<unsigned char> interior;  // mask eroded by two samples
  double relative_l2 = 0.0;
  double max_interior = 0.0;
  int points = 0;
  int interior_points = 0;
};
SpeedResult cmd_recover_speed(const Scenario& scenario);

struct PotentialResult {
  PotentialRecovery recovery;
  double wave_relative_l2 = 0.0;  // recovered u vs forward solve on the chart
  double plateau_rms = 0.0;       // relative to the plateau value
  double plateau_mean = 0.0;
  int plateau_points = 0;
  double mean_abs_q = 0.0;
  int points = 0;
};
PotentialResult cmd_recover_potential(const Scenario& scenario);

}  // namespace bcm::cli
