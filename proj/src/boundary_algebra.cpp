#include "bcm/boundary_algebra.hpp"

#include "bcm/errors.hpp"
#include "bcm/raster_io.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bcm {

namespace {

struct Box {
  int k0 = 0, k1 = -1, n0 = 0, n1 = -1;  // inclusive ranges
};

Box support(const ScreenField& f) {
  Box b{f.n_gamma, -1, f.n_time, -1};
  for (int k = 0; k < f.n_gamma; ++k) {
    for (int n = 0; n < f.n_time; ++n) {
      if (f.at(k, n) == 0.0) continue;
      b.k0 = std::min(b.k0, k);
      b.k1 = std::max(b.k1, k);
      b.n0 = std::min(b.n0, n);
      b.n1 = std::max(b.n1, n);
    }
  }
  return b;
}

double ext_on(const ScreenField& f, const ScreenField& g, const Box& b) {
  const int last = f.n_time - 1;
  double s = 0.0;
  for (int k = b.k0; k <= b.k1; ++k) {
    double row = 0.0;
    for (int n = b.n0; n <= b.n1; ++n) {
      const double w = (n == 0 || n == last) ? 0.5 : 1.0;
      row += w * f.at(k, n) * g.at(k, n);
    }
    s += row;
  }
  return s * f.dt * f.dgamma;
}

void require_same(const ScreenField& f, const ScreenField& g) {
  if (!f.same_grid(g)) {
    std::ostringstream msg;
    msg << "screen grids differ: " << f.n_gamma << "x" << f.n_time << " (dt " << f.dt << ") vs " << g.n_gamma
        << "x" << g.n_time << " (dt " << g.dt << ")";
    throw ValidationError(msg.str());
  }
}

std::vector<Box> supports_of(const ControlFamily& family) {
  std::vector<Box> boxes;
  boxes.reserve(family.controls.size());
  for (const auto& c : family.controls) boxes.push_back(support(c));
  return boxes;
}

}  // namespace

double ext_inner(const ScreenField& f, const ScreenField& g) {
  require_same(f, g);
  return ext_on(f, g, Box{0, f.n_gamma - 1, 0, f.n_time - 1});
}

double int_inner(const Field& y, const Field& w, const MediumModel& model) {
  const Grid& g = model.grid;
  if (y.size() != g.size() || w.size() != g.size()) throw ValidationError("snapshot is not on the model grid");
  double s = 0.0;
  for (int j = 0; j < g.nz; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (g.is_boundary(i, j)) continue;
      const std::size_t k = g.index(i, j);
      s += y[k] * w[k] / (model.c[k] * model.c[k]);
    }
  }
  return s * g.cell_measure();
}

ScreenField apply_connecting(const NeumannTrace& trace) {
  if (trace.n_time < 3 || trace.n_time % 2 == 0) {
    throw ValidationError("connecting operator needs a trace over [0, 2T] with an odd sample count");
  }
  const int N = (trace.n_time - 1) / 2;
  ScreenField out(trace.n_gamma, N + 1, trace.dt, trace.dgamma);
  for (int k = 0; k < trace.n_gamma; ++k) {
    for (int n = 0; n <= N; ++n) out.at(k, n) = 0.5 * (trace.at(k, n) - trace.at(k, 2 * N - n));
  }
  return out;
}

double wave_product(const NeumannTrace& trace_f, const BoundaryControl& g) {
  return ext_inner(apply_connecting(trace_f), g);
}

ObserverData build_observer(const MeasurementDataset& data, const ControlFamily& family) {
  if (data.size() != family.controls.size()) {
    std::ostringstream msg;
    msg << "dataset holds " << data.size() << " traces but the family has " << family.controls.size()
        << " controls";
    throw ValidationError(msg.str());
  }
  ObserverData obs;
  obs.family = &family;
  obs.connected.reserve(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    obs.connected.push_back(apply_connecting(data.records[k].sigma));
    require_same(obs.connected.back(), family.controls[k]);
  }
  const auto boxes = supports_of(family);
  const int n = static_cast<int>(family.controls.size());
  obs.gram_full.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) obs.gram_full(i, j) = ext_on(obs.connected[i], family.controls[j], boxes[j]);
  }
  const double norm = obs.gram_full.norm();
  obs.symmetry_residual_full = norm > 0.0 ? (obs.gram_full - obs.gram_full.transpose()).norm() / norm : 0.0;
  return obs;
}

GramSystem make_gram_system(const Eigen::MatrixXd& gram, double xi, std::vector<int> members) {
  GramSystem s;
  s.xi = xi;
  s.members = std::move(members);
  const double norm = gram.norm();
  s.symmetry_residual = norm > 0.0 ? (gram - gram.transpose()).norm() / norm : 0.0;
  s.gram = 0.5 * (gram + gram.transpose());
  if (s.gram.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.gram);
    if (eig.info() != Eigen::Success) throw ValidationError("Gram eigendecomposition failed");
    s.eigenvalues = eig.eigenvalues();
    s.eigenvectors = eig.eigenvectors();
  }
  return s;
}

GramSystem gram_matrix(const ObserverData& observer, double xi) {
  const std::vector<int> members = observer.family->members_for_delay(xi);
  const int m = static_cast<int>(members.size());
  Eigen::MatrixXd g(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) g(a, b) = observer.gram_full(members[a], members[b]);
  }
  GramSystem s = make_gram_system(g, xi, members);
  s.family_description = observer.family->spec.describe();
  return s;
}

WaveBasis orthogonalize(const GramSystem& system, double eps) {
  if (!(eps > 0.0)) throw ValidationError("cutoff must be positive");
  WaveBasis b;
  b.xi = system.xi;
  b.cutoff = eps;
  b.members = system.members;
  const int n = static_cast<int>(system.eigenvalues.size());
  const double lmax = n > 0 ? system.eigenvalues(n - 1) : 0.0;
  std::vector<int> keep;
  for (int i = n - 1; i >= 0; --i) {
    if (lmax > 0.0 && system.eigenvalues(i) >= eps * lmax) keep.push_back(i);
  }
  if (keep.empty()) {
    std::ostringstream msg;
    msg << "no Gram mode survives the cutoff at xi = " << system.xi << " (" << n << " controls)";
    throw ValidationError(msg.str());
  }
  b.coefficients.resize(n, static_cast<int>(keep.size()));
  b.retained.resize(static_cast<int>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const double lambda = system.eigenvalues(keep[j]);
    b.retained(j) = lambda;
    b.coefficients.col(j) = system.eigenvectors.col(keep[j]) / std::sqrt(lambda);
  }
  return b;
}

Eigen::VectorXd family_products(const ScreenField& h, const std::vector<int>& members,
                                const ObserverData& observer) {
  Eigen::VectorXd out(static_cast<int>(members.size()));
  for (std::size_t a = 0; a < members.size(); ++a) {
    const auto& g = observer.family->controls[members[a]];
    require_same(h, g);
    out(a) = ext_on(h, g, support(g));
  }
  return out;
}

Eigen::VectorXd truncation_coefficients(const ScreenField& connected_f, const WaveBasis& basis,
                                        const ObserverData& observer) {
  return basis.coefficients.transpose() * family_products(connected_f, basis.members, observer);
}

BoundaryControl basis_control(const WaveBasis& basis, int j, const ControlFamily& family) {
  BoundaryControl f = family.controls.at(basis.members.at(0));
  std::fill(f.values.begin(), f.values.end(), 0.0);
  f.delay = family.controls.front().horizon() - basis.xi;
  for (std::size_t a = 0; a < basis.members.size(); ++a) {
    const double w = basis.coefficients(static_cast<int>(a), j);
    const auto& g = family.controls[basis.members[a]].values;
    for (std::size_t i = 0; i < g.size(); ++i) f.values[i] += w * g[i];
  }
  return f;
}

ScreenField basis_connected(const WaveBasis& basis, int j, const ObserverData& observer) {
  ScreenField out = observer.connected.at(basis.members.at(0));
  std::fill(out.values.begin(), out.values.end(), 0.0);
  for (std::size_t a = 0; a < basis.members.size(); ++a) {
    const double w = basis.coefficients(static_cast<int>(a), j);
    const auto& g = observer.connected[basis.members[a]].values;
    for (std::size_t i = 0; i < g.size(); ++i) out.values[i] += w * g[i];
  }
  return out;
}

namespace {

std::string join(const Eigen::VectorXd& v) {
  std::ostringstream out;
  for (int i = 0; i < v.size(); ++i) out << (i ? " " : "") << format_double(v(i));
  return out.str();
}

std::string join(const std::vector<int>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  return out.str();
}

std::vector<double> split_numbers(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

const std::string& need(const std::map<std::string, std::string>& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) throw IoError("manifest lacks key '" + key + "'");
  return it->second;
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  write_binary(path, std::span<const double>(m.data(), static_cast<std::size_t>(m.size())));
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path, int rows, int cols) {
  const auto v = read_binary(path, static_cast<std::size_t>(rows) * cols);
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::vector<int> to_ints(const std::vector<double>& v) {
  std::vector<int> out;
  for (double x : v) out.push_back(static_cast<int>(x));
  return out;
}

}  // namespace

void write_gram_system(const std::filesystem::path& dir, const GramSystem& s) {
  ensure_dir(dir);
  write_matrix(dir / "gram.bin", s.gram);
  write_manifest(dir / "gram_manifest.txt",
                 {{"format", "bcm-gram-1"},
                  {"xi", format_double(s.xi)},
                  {"size", std::to_string(s.gram.rows())},
                  {"symmetry_residual", format_double(s.symmetry_residual)},
                  {"family", s.family_description},
                  {"members", join(s.members)},
                  {"spectrum", join(s.eigenvalues)},
                  {"sha256.gram", sha256_hex(std::span<const double>(s.gram.data(), s.gram.size()))}});
}

GramSystem read_gram_system(const std::filesystem::path& dir) {
  const auto m = read_manifest(dir / "gram_manifest.txt");
  if (need(m, "format") != "bcm-gram-1") throw IoError("unsupported Gram format");
  const int n = std::stoi(need(m, "size"));
  GramSystem s = make_gram_system(read_matrix(dir / "gram.bin", n, n), std::stod(need(m, "xi")),
                                  to_ints(split_numbers(need(m, "members"))));
  s.symmetry_residual = std::stod(need(m, "symmetry_residual"));
  s.family_description = need(m, "family");
  return s;
}

void write_wave_basis(const std::filesystem::path& dir, const WaveBasis& b, const std::string& family_description) {
  ensure_dir(dir);
  write_matrix(dir / "basis.bin", b.coefficients);
  write_manifest(dir / "basis_manifest.txt",
                 {{"format", "bcm-basis-1"},
                  {"xi", format_double(b.xi)},
                  {"cutoff", format_double(b.cutoff)},
                  {"members", join(b.members)},
                  {"rank", std::to_string(b.rank())},
                  {"family", family_description},
                  {"retained_spectrum", join(b.retained)},
                  {"sha256.basis",
                   sha256_hex(std::span<const double>(b.coefficients.data(), b.coefficients.size()))}});
}

WaveBasis read_wave_basis(const std::filesystem::path& dir) {
  const auto m = read_manifest(dir / "basis_manifest.txt");
  if (need(m, "format") != "bcm-basis-1") throw IoError("unsupported basis format");
  WaveBasis b;
  b.xi = std::stod(need(m, "xi"));
  b.cutoff = std::stod(need(m, "cutoff"));
  b.members = to_ints(split_numbers(need(m, "members")));
  const int rank = std::stoi(need(m, "rank"));
  b.coefficients = read_matrix(dir / "basis.bin", static_cast<int>(b.members.size()), rank);
  const auto r = split_numbers(need(m, "retained_spectrum"));
  b.retained = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<int>(r.size()));
  return b;
}

}  // namespace bcm
