#pragma once

#include "bcm/control.hpp"
#include "bcm/medium.hpp"
#include "bcm/wave_solver.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace bcm {

/// Boundary response to one control: the Neumann trace of u^{f~} on sigma
/// over [0, 2T] and, optionally, on the whole screen face over [0, T].
struct Measurement {
  NeumannTrace sigma;
  NeumannTrace face;
};

/// The observer's data: responses to every member of a raw control family.
struct MeasurementDataset {
  TimeAxis time;
  FamilySpec family;
  std::string model_hash;
  std::string description;
  int face_nodes = 0;  // 0 when face traces were not recorded
  std::vector<Measurement> records;

  std::size_t size() const { return records.size(); }
};

struct SynthesisOptions {
  int workers = 1;
  bool record_face = true;
  TraceStencil stencil = TraceStencil::kSummationByParts;
};

/// Runs solve_forward with extend_control(f) over [0, 2T].
Measurement measure(const MediumModel& model, const BoundaryControl& f, const SynthesisOptions& options = {});

/// Measures every control of `controls`, `options.workers` solves at a time.
/// All controls must share one sampling grid of horizon T.
MeasurementDataset synthesize_measurements(const MediumModel& model, const TimeAxis& time,
                                           const FamilySpec& family,
                                           const std::vector<BoundaryControl>& controls,
                                           const SynthesisOptions& options = {});

/// Dataset directory layout:
///   manifest.txt          key = value metadata (schema below)
///   trace_NNNN.bin        sigma trace, float64 LE, row-major (gamma, t), n_time = 2 steps + 1
///   face_NNNN.bin         face trace, float64 LE, row-major (node, t), n_time = steps + 1
/// Manifest keys: format, count, T, dt, steps, n_sigma, dgamma, face_nodes,
/// family.n_gamma, family.n_layers, family.description, model_hash,
/// description, sha256.trace_NNNN, sha256.face_NNNN, dataset_hash.
void write_dataset(const std::filesystem::path& dir, const MeasurementDataset& data);
MeasurementDataset read_dataset(const std::filesystem::path& dir);

/// Hash over all trace payloads in order.
std::string dataset_hash(const MeasurementDataset& data);

}  // namespace bcm
