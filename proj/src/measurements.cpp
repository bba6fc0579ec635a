#include "bcm/measurements.hpp"

#include "bcm/errors.hpp"
#include "bcm/raster_io.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

namespace bcm {

namespace {

std::string numbered(const char* stem, std::size_t k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu", stem, k);
  return buf;
}

const std::string& require(const std::map<std::string, std::string>& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) throw IoError("dataset manifest lacks key '" + key + "'");
  return it->second;
}

double parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw IoError("dataset manifest key '" + key + "' is not a number: " + text);
  }
}

}  // namespace

Measurement measure(const MediumModel& model, const BoundaryControl& f, const SynthesisOptions& options) {
  const BoundaryControl extended = extend_control(f);
  const int steps = f.n_time - 1;
  const ScreenGeometry face = make_face(model.grid, model.screen.face);
  RecordOptions rec;
  rec.stencil = options.stencil;
  if (options.record_face) {
    rec.extra_face = &face;
    rec.extra_face_last_step = steps;
  }
  ForwardResult r = solve_forward(model, extended, rec);
  return Measurement{std::move(r.trace), std::move(r.face_trace)};
}

MeasurementDataset synthesize_measurements(const MediumModel& model, const TimeAxis& time,
                                           const FamilySpec& family,
                                           const std::vector<BoundaryControl>& controls,
                                           const SynthesisOptions& options) {
  for (const auto& c : controls) {
    if (c.n_time != time.steps + 1 || std::abs(c.dt - time.dt) > 1e-12 * time.dt ||
        c.n_gamma != static_cast<int>(model.screen.size())) {
      throw ValidationError("family member does not match the time axis or the screen");
    }
  }
  MeasurementDataset data;
  data.time = time;
  data.family = family;
  data.model_hash = model_hash(model);
  data.description = model.description;
  data.face_nodes = options.record_face ? static_cast<int>(make_face(model.grid, model.screen.face).size()) : 0;
  data.records.resize(controls.size());

  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(controls.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto work = [&] {
    for (std::size_t k = next++; k < controls.size(); k = next++) {
      try {
        data.records[k] = measure(model, controls[k], options);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_lock);
        if (!failure) failure = std::current_exception();
        next = controls.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return data;
}

std::string dataset_hash(const MeasurementDataset& data) {
  Sha256 sha;
  for (const auto& r : data.records) {
    sha.update(std::span<const double>(r.sigma.values));
    sha.update(std::span<const double>(r.face.values));
  }
  return sha.hex_digest();
}

void write_dataset(const std::filesystem::path& dir, const MeasurementDataset& data) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create dataset directory " + dir.string() + ": " + ec.message());
  const int n_sigma = data.records.empty() ? 0 : data.records.front().sigma.n_gamma;
  const double dgamma = data.records.empty() ? 1.0 : data.records.front().sigma.dgamma;
  Manifest m{{"format", "bcm-dataset-1"},
             {"count", std::to_string(data.size())},
             {"T", format_double(data.time.T)},
             {"dt", format_double(data.time.dt)},
             {"steps", std::to_string(data.time.steps)},
             {"n_sigma", std::to_string(n_sigma)},
             {"dgamma", format_double(dgamma)},
             {"face_nodes", std::to_string(data.face_nodes)},
             {"family.n_gamma", std::to_string(data.family.n_gamma)},
             {"family.n_layers", std::to_string(data.family.n_layers)},
             {"family.description", data.family.describe()},
             {"model_hash", data.model_hash},
             {"description", data.description}};
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto& r = data.records[k];
    const std::string t = numbered("trace", k);
    write_binary(dir / (t + ".bin"), r.sigma.values);
    m.emplace_back("sha256." + t, sha256_hex(r.sigma.values));
    if (data.face_nodes > 0) {
      const std::string f = numbered("face", k);
      write_binary(dir / (f + ".bin"), r.face.values);
      m.emplace_back("sha256." + f, sha256_hex(r.face.values));
    }
  }
  m.emplace_back("dataset_hash", dataset_hash(data));
  write_manifest(dir / "manifest.txt", m);
}

MeasurementDataset read_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("dataset directory not found: " + dir.string());
  const auto m = read_manifest(dir / "manifest.txt");
  if (require(m, "format") != "bcm-dataset-1") throw IoError("unsupported dataset format");
  auto number = [&](const std::string& key) { return parse_number(key, require(m, key)); };
  MeasurementDataset data;
  data.time.T = number("T");
  data.time.dt = number("dt");
  data.time.steps = static_cast<int>(number("steps"));
  data.family.n_gamma = static_cast<int>(number("family.n_gamma"));
  data.family.n_layers = static_cast<int>(number("family.n_layers"));
  data.model_hash = require(m, "model_hash");
  data.description = require(m, "description");
  data.face_nodes = static_cast<int>(number("face_nodes"));
  const auto count = static_cast<std::size_t>(number("count"));
  const int n_sigma = static_cast<int>(number("n_sigma"));
  const double dgamma = number("dgamma");
  const int steps = data.time.steps;
  data.records.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    auto& r = data.records[k];
    const std::string t = numbered("trace", k);
    r.sigma = NeumannTrace(ScreenField(n_sigma, 2 * steps + 1, data.time.dt, dgamma));
    r.sigma.values = read_binary(dir / (t + ".bin"), r.sigma.values.size());
    if (data.face_nodes > 0) {
      const std::string f = numbered("face", k);
      r.face = NeumannTrace(ScreenField(data.face_nodes, steps + 1, data.time.dt, dgamma));
      r.face.values = read_binary(dir / (f + ".bin"), r.face.values.size());
    }
  }
  return data;
}

}  // namespace bcm
