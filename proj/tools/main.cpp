#include "pipeline.hpp"

#include "bcm/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kIo = 2, kInvariant = 3 };

int run(const std::string& command, const bcm::cli::RunOptions& options) {
  using namespace bcm::cli;
  const Scenario s = load_scenario(options);
  if (command == "synthesize") {
    const auto r = cmd_synthesize(s);
    std::cout << "synthesized " << r.controls << " controls, dataset " << r.dataset_hash << "\n";
  } else if (command == "verify") {
    const auto r = cmd_verify(s);
    for (const auto& w : r.warnings) std::cout << "warning: " << w << "\n";
    for (const auto& c : r.checks) {
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " = " << c.value << " (limit " << c.limit << ")";
      if (!c.detail.empty()) std::cout << " " << c.detail;
      std::cout << "\n";
    }
    if (!r.ok()) return kInvariant;
  } else if (command == "visualize") {
    const auto r = cmd_visualize(s);
    std::cout << "portrait " << r.portrait.n_gamma() << " x " << r.portrait.n_xi() << ", rank(T) " << r.rank_T
              << ", relative L2 vs direct transfer " << r.relative_l2 << "\n";
  } else if (command == "recover-speed") {
    const auto r = cmd_recover_speed(s);
    std::cout << "speed on " << r.points << " chart points: relative L2 " << r.relative_l2
              << ", max interior relative error " << r.max_interior << "\n";
  } else if (command == "recover-potential") {
    const auto r = cmd_recover_potential(s);
    std::cout << "potential on " << r.points << " chart points: mean |q| " << r.mean_abs_q << ", noise floor "
              << r.recovery.noise_floor << ", plateau mean " << r.plateau_mean << ", plateau relative RMS "
              << r.plateau_rms << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-control desk lab: synthetic measurements, wave bases, portraits and recovery"};
  app.require_subcommand(1);
  bcm::cli::RunOptions options;
  int workers = 0;
  unsigned seed = 0;
  double cutoff = 0.0;
  const char* names[] = {"synthesize", "verify", "visualize", "recover-speed", "recover-potential"};
  const char* help[] = {"synthesize boundary measurements for the scenario's control family",
                        "check duality, connecting identity, finite speed, Gram structure and jump transport",
                        "build the portrait of the scenario's probe wave",
                        "recover the speed on the tube from harmonic portraits",
                        "recover the potential on the tube (unit speed scenarios)"};
  std::vector<CLI::App*> subs;
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", options.config, "scenario INI file")->required();
    sub->add_option("--out", options.out, "artifact directory")->required();
    sub->add_option("--workers", workers, "parallel synthesis solves")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for randomized checks");
    sub->add_option("--cutoff", cutoff, "spectral cutoff eps (relative to lambda_max)");
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }
  std::string command;
  for (int i = 0; i < 5; ++i) {
    if (subs[i]->parsed()) {
      command = names[i];
      if (subs[i]->count("--workers")) options.workers = workers;
      if (subs[i]->count("--seed")) options.seed = seed;
      if (subs[i]->count("--cutoff")) options.cutoff = cutoff;
    }
  }
  try {
    return run(command, options);
  } catch (const bcm::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const bcm::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const bcm::InvariantFailure& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return kInvariant;
  }
}
