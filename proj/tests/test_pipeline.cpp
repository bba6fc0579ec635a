#include "doctest.h"

#include "bcm/errors.hpp"
#include "bcm/measurements.hpp"
#include "pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <vector>

using namespace bcm;
using namespace bcm::cli;
namespace fs = std::filesystem;

namespace {

const char* kColumn =
    "[scenario]\nname = small column\n[grid]\ndim = 1\nspacing = 0.01\nextent_z = 1.0\nsponge_width = 10\n"
    "[medium]\nc = constant\nc_value = 1\n[screen]\nface = top\n[time]\nT = 0.3\ncfl = %CFL%\n"
    "[family]\nn_gamma = 1\nn_layers = 6\n[verify]\npairs = 2\nseed = 3\n";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("bcm_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Scenario scenario_in(const fs::path& dir, const std::string& cfl = "0.5", std::optional<int> workers = {}) {
  std::string text = kColumn;
  text.replace(text.find("%CFL%"), 5, cfl);
  std::ofstream(dir / "scenario.ini") << text;
  RunOptions o;
  o.config = dir / "scenario.ini";
  o.out = dir / "out";
  o.workers = workers;
  return load_scenario(o);
}

}  // namespace

TEST_CASE("synthesis is deterministic across worker counts") {
  const fs::path dir = scratch("determinism");
  const SynthesizeResult a = cmd_synthesize(scenario_in(dir, "0.5", 1));
  const SynthesizeResult b = cmd_synthesize(scenario_in(dir, "0.5", 2));
  CHECK(a.controls == 6);
  CHECK(a.dataset_hash == b.dataset_hash);
  CHECK(fs::exists(dir / "out" / "synthesize" / "report.txt"));
  fs::remove_all(dir);
}

TEST_CASE("scenario with a CFL number above one is refused") {
  const fs::path dir = scratch("cfl");
  CHECK_THROWS_AS(scenario_in(dir, "1.2"), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("missing scenario file is an i/o error") {
  RunOptions o;
  o.config = "/nonexistent/scenario.ini";
  o.out = "/tmp";
  CHECK_THROWS_AS(load_scenario(o), IoError);
}

TEST_CASE("verify passes on a clean dataset and names a corrupted control") {
  const fs::path dir = scratch("verify");
  const Scenario s = scenario_in(dir);
  cmd_synthesize(s);
  const VerifyResult clean = cmd_verify(s);
  for (const auto& c : clean.checks) {
    INFO(c.name << ": " << c.value << " (limit " << c.limit << ") " << c.detail);
    CHECK(c.pass);
  }
  CHECK(clean.ok());

  MeasurementDataset data = read_dataset(dir / "out" / "dataset");
  for (double& v : data.records[2].sigma.values) v *= 1.5;
  write_dataset(dir / "out" / "dataset", data);
  const VerifyResult broken = cmd_verify(s);
  CHECK(!broken.ok());
  bool named = false;
  for (const auto& c : broken.checks) {
    if (!c.pass) named = named || c.detail.find("control 2 ") != std::string::npos;
  }
  CHECK(named);
  fs::remove_all(dir);
}

TEST_CASE("verify on an empty dataset warns and runs no checks") {
  const fs::path dir = scratch("empty");
  const Scenario s = scenario_in(dir);
  MeasurementDataset empty;
  empty.time = s.time;
  empty.family = s.family;
  write_dataset(dir / "out" / "dataset", empty);
  const VerifyResult r = cmd_verify(s);
  CHECK(r.checks.empty());
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.ok());
  fs::remove_all(dir);
}
