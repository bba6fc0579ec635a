#include "bcm/imaging.hpp"

#include "bcm/errors.hpp"
#include "bcm/raster_io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace bcm {

namespace {

int delay_index(double T, double xi, double dt) { return static_cast<int>(std::lround((T - xi) / dt)); }

/// sum_k d_k read_before(C^T g_k, n0) for members of `basis`.
std::vector<double> combine_before(const Eigen::VectorXd& d, const std::vector<int>& members,
                                   const ObserverData& observer, int n0, int n_gamma) {
  std::vector<double> out(n_gamma, 0.0);
  for (std::size_t a = 0; a < members.size(); ++a) {
    const double w = d(static_cast<int>(a));
    if (w == 0.0) continue;
    const auto v = read_before(observer.connected[members[a]], n0);
    for (int k = 0; k < n_gamma; ++k) out[k] += w * v[k];
  }
  return out;
}

/// Member weights d = B B^T b of the projection onto the basis span.
Eigen::VectorXd projection_weights(const WaveBasis& basis, const Eigen::VectorXd& products) {
  return basis.coefficients * (basis.coefficients.transpose() * products);
}

Portrait empty_portrait(const ScreenGeometry& screen, const std::vector<WaveBasis>& bases, double dt) {
  Portrait p;
  p.sigma_from = screen.from;
  p.sigma_to = screen.to;
  for (const auto& n : screen.nodes) p.gamma.push_back(n.gamma);
  for (const auto& b : bases) p.xi_grid.push_back(read_delay(b.xi, dt));
  p.values.assign(p.gamma.size() * p.xi_grid.size(), 0.0);
  p.mask.assign(p.values.size(), 0);
  return p;
}

}  // namespace

std::vector<unsigned char> tube_mask(const Portrait& p, double kappa) {
  std::vector<unsigned char> mask(p.values.size(), 1);
  if (kappa <= 0.0 || p.n_xi() < 2) return mask;
  const double layer = p.xi_grid[1] - p.xi_grid[0];
  for (int k = 0; k < p.n_gamma(); ++k) {
    const double dist = std::min(p.gamma[k] - p.sigma_from, p.sigma_to - p.gamma[k]);
    for (int m = 0; m < p.n_xi(); ++m) {
      if (dist < kappa * std::sqrt(layer * std::max(p.xi_grid[m], 0.0))) mask[p.index(k, m)] = 0;
    }
  }
  return mask;
}

std::vector<unsigned char> erode(const std::vector<unsigned char>& mask, const Portrait& p, int cells) {
  if (mask.size() != p.values.size()) throw ValidationError("mask does not match the portrait layout");
  std::vector<unsigned char> out(mask.size(), 0);
  for (int k = 0; k < p.n_gamma(); ++k) {
    for (int m = 0; m < p.n_xi(); ++m) {
      bool ok = mask[p.index(k, m)] != 0;
      for (int a = -cells; a <= cells && ok; ++a) {
        for (int b = -cells; b <= cells && ok; ++b) {
          const int kk = k + a, mm = m + b;
          ok = kk >= 0 && kk < p.n_gamma() && mm >= 0 && mm < p.n_xi() && mask[p.index(kk, mm)];
        }
      }
      out[p.index(k, m)] = ok;
    }
  }
  return out;
}

std::vector<WaveBasis> build_bases(const ObserverData& observer, const std::vector<double>& xi_grid, double eps) {
  std::vector<WaveBasis> bases;
  for (double xi : xi_grid) {
    const GramSystem g = gram_matrix(observer, xi);
    try {
      bases.push_back(orthogonalize(g, eps));
    } catch (const ValidationError&) {
      WaveBasis empty;
      empty.xi = xi;
      empty.cutoff = eps;
      empty.members = g.members;
      empty.coefficients.resize(static_cast<int>(g.members.size()), 0);
      bases.push_back(std::move(empty));
    }
  }
  return bases;
}

double read_delay(double xi, double dt) { return xi + 1.5 * dt; }

std::vector<double> read_before(const ScreenField& field, int n0) {
  if (n0 < 1 || n0 >= field.n_time) throw ValidationError("read-out time outside the screen field");
  std::vector<double> out(field.n_gamma);
  for (int k = 0; k < field.n_gamma; ++k) {
    out[k] = n0 >= 2 ? 0.5 * (field.at(k, n0 - 1) + field.at(k, n0 - 2)) : field.at(k, n0 - 1);
  }
  return out;
}

std::vector<double> amplitude_slice(const ScreenField& connected_f, const WaveBasis& basis,
                                    const ObserverData& observer) {
  const int n0 = delay_index(connected_f.horizon(), basis.xi, connected_f.dt);
  std::vector<double> slice = read_before(connected_f, n0);
  if (basis.rank() == 0) return slice;
  const Eigen::VectorXd d = projection_weights(basis, family_products(connected_f, basis.members, observer));
  const auto proj = combine_before(d, basis.members, observer, n0, connected_f.n_gamma);
  for (std::size_t k = 0; k < slice.size(); ++k) slice[k] -= proj[k];
  return slice;
}

Portrait build_portrait(const ScreenField& connected_f, const std::vector<WaveBasis>& bases,
                        const ObserverData& observer, const ScreenGeometry& screen) {
  Portrait p = empty_portrait(screen, bases, connected_f.dt);
  if (connected_f.n_gamma != p.n_gamma()) throw ValidationError("screen field does not match the screen");
  for (int m = 0; m < p.n_xi(); ++m) {
    const int n0 = delay_index(connected_f.horizon(), bases[m].xi, connected_f.dt);
    if (bases[m].rank() == 0 || n0 < 2) continue;
    const auto slice = amplitude_slice(connected_f, bases[m], observer);
    for (int k = 0; k < p.n_gamma(); ++k) {
      p.values[p.index(k, m)] = slice[k];
      p.mask[p.index(k, m)] = 1;
    }
  }
  return p;
}

namespace {

struct FaceLayout {
  std::vector<int> sigma_of_face;  // sigma index of each face node, -1 off sigma
};

FaceLayout layout(const ScreenGeometry& face, const ScreenGeometry& screen) {
  std::unordered_map<std::size_t, int> where;
  for (std::size_t s = 0; s < screen.nodes.size(); ++s) where[screen.nodes[s].node] = static_cast<int>(s);
  FaceLayout l;
  for (const auto& n : face.nodes) {
    const auto it = where.find(n.node);
    l.sigma_of_face.push_back(it == where.end() ? -1 : it->second);
  }
  if (std::count_if(l.sigma_of_face.begin(), l.sigma_of_face.end(), [](int s) { return s >= 0; }) !=
      static_cast<long>(screen.size())) {
    throw ValidationError("the recorded face does not contain the whole screen");
  }
  return l;
}

/// int_face [a du/dnu - (da/dnu) u_b] at time sample n.
double boundary_flux(const HarmonicProbe& probe, const NeumannTrace& trace, const ScreenGeometry& face,
                     const FaceLayout& l, const ScreenField& boundary_values, int n, double boundary_scale) {
  const double dadn = probe.normal_derivative(face.normal_in);
  double s = 0.0;
  for (int b = 0; b < trace.n_gamma; ++b) {
    s += probe.value(face.nodes[b].position) * trace.at(b, n);
    const int sg = l.sigma_of_face[b];
    if (sg >= 0) s -= dadn * boundary_scale * boundary_values.at(sg, n);
  }
  return s * trace.dgamma;
}

void require_face_trace(const NeumannTrace& trace, const ScreenGeometry& face, const BoundaryControl& f) {
  if (trace.n_gamma != static_cast<int>(face.size())) throw ValidationError("face trace does not match the face");
  if (trace.n_time != f.n_time || std::abs(trace.dt - f.dt) > 1e-12 * f.dt) {
    throw ValidationError("face trace must cover [0, T] on the control's time grid");
  }
}

}  // namespace

double harmonic_wave_product(const HarmonicProbe& probe, const BoundaryControl& f, const NeumannTrace& face_trace,
                             const ScreenGeometry& face, const ScreenGeometry& screen) {
  require_face_trace(face_trace, face, f);
  const FaceLayout l = layout(face, screen);
  const int N = f.n_time - 1;
  const double T = f.horizon();
  double s = 0.0;
  for (int n = 0; n < N; ++n) {
    s += (T - n * f.dt) * boundary_flux(probe, face_trace, face, l, f, n, n == 0 ? 0.5 : 1.0);
  }
  return s * f.dt;
}

double harmonic_product_extended(const HarmonicProbe& probe, const BoundaryControl& f,
                                 const NeumannTrace& face_trace, const ScreenGeometry& face,
                                 const ScreenGeometry& screen) {
  require_face_trace(face_trace, face, f);
  const FaceLayout l = layout(face, screen);
  const BoundaryControl ext = extend_control(f);
  const int N = f.n_time - 1;
  double s = 0.0;
  for (int n = 0; n <= N; ++n) {
    const double w = n == N ? 0.5 : 1.0;
    s += w * boundary_flux(probe, face_trace, face, l, ext, n, n == 0 ? 0.5 : 1.0);
  }
  return s * f.dt;
}

std::vector<double> harmonic_family_products(const HarmonicProbe& probe, const MeasurementDataset& data,
                                             const ControlFamily& family, const ScreenGeometry& face,
                                             const ScreenGeometry& screen) {
  if (data.face_nodes == 0) throw ValidationError("dataset has no face traces; harmonic products need them");
  if (data.size() != family.controls.size()) throw ValidationError("dataset does not cover the family");
  std::vector<double> out(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    out[k] = harmonic_product_extended(probe, family.controls[k], data.records[k].face, face, screen);
  }
  return out;
}

Portrait portrait_harmonic(const std::vector<double>& raw_products, const std::vector<WaveBasis>& bases,
                           const WaveBasis& basis_T, const ObserverData& observer, const ScreenGeometry& screen) {
  if (raw_products.size() != observer.connected.size()) throw ValidationError("one product per family member");
  if (basis_T.rank() == 0) throw ValidationError("rank-zero basis at xi = T");
  const ScreenField& ref = observer.connected.front();
  Portrait p = empty_portrait(screen, bases, ref.dt);
  auto weights = [&](const WaveBasis& b) {
    Eigen::VectorXd a(static_cast<int>(b.members.size()));
    for (std::size_t i = 0; i < b.members.size(); ++i) a(static_cast<int>(i)) = raw_products[b.members[i]];
    return projection_weights(b, a);
  };
  const Eigen::VectorXd dT = weights(basis_T);
  for (int m = 0; m < p.n_xi(); ++m) {
    const int n0 = delay_index(ref.horizon(), bases[m].xi, ref.dt);
    if (bases[m].rank() == 0 || n0 < 2) continue;
    // Members of the xi-basis are a prefix-free subset of the T-basis members.
    Eigen::VectorXd d = dT;
    const Eigen::VectorXd dxi = weights(bases[m]);
    std::unordered_map<int, int> pos;
    for (std::size_t i = 0; i < basis_T.members.size(); ++i) pos[basis_T.members[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < bases[m].members.size(); ++i) {
      const auto it = pos.find(bases[m].members[i]);
      if (it == pos.end()) throw ValidationError("xi-basis member missing from the T-basis");
      d(it->second) -= dxi(static_cast<int>(i));
    }
    const auto slice = combine_before(d, basis_T.members, observer, n0, p.n_gamma());
    for (int k = 0; k < p.n_gamma(); ++k) {
      p.values[p.index(k, m)] = slice[k];
      p.mask[p.index(k, m)] = 1;
    }
  }
  return p;
}

Deposit deposit(const Grid& grid, const std::vector<Point>& positions, const std::vector<double>& values,
                const std::vector<unsigned char>& mask) {
  Deposit d{Field(grid.size(), 0.0), std::vector<unsigned char>(grid.size(), 0), std::vector<int>(grid.size(), 0)};
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!mask[i] || !std::isfinite(values[i])) continue;
    const long ix = grid.dim == 2 ? std::lround((positions[i][0] - grid.x0) / grid.h) : 0;
    const long iz = std::lround((positions[i][1] - grid.z0) / grid.h);
    if (ix < 0 || iz < 0 || ix >= grid.nx || iz >= grid.nz) continue;
    const std::size_t k = grid.index(static_cast<int>(ix), static_cast<int>(iz));
    d.values[k] += values[i];
    ++d.count[k];
  }
  for (std::size_t k = 0; k < d.values.size(); ++k) {
    if (d.count[k] > 0) {
      d.values[k] /= d.count[k];
      d.mask[k] = 1;
    }
  }
  return d;
}

namespace {

int chart_column(const RayChart& chart, double xi) {
  for (int m = 0; m < chart.n_xi(); ++m) {
    if (std::abs(chart.xi_grid[m] - xi) <= 1e-9 * std::max(1.0, xi)) return m;
  }
  throw ValidationError("ray chart lacks the portrait delay " + std::to_string(xi));
}

}  // namespace

WaveRecovery recover_wave(const Portrait& portrait, const RayChart& chart, const Grid& grid, double beta_floor) {
  if (chart.n_rays() != portrait.n_gamma()) throw ValidationError("chart and portrait have different rays");
  WaveRecovery r;
  r.values.assign(portrait.values.size(), 0.0);
  r.positions.assign(portrait.values.size(), Point{0.0, 0.0});
  r.mask.assign(portrait.values.size(), 0);
  for (int m = 0; m < portrait.n_xi(); ++m) {
    const int cm = chart_column(chart, portrait.xi_grid[m]);
    for (int k = 0; k < portrait.n_gamma(); ++k) {
      const std::size_t i = portrait.index(k, m), c = chart.index(k, cm);
      r.positions[i] = chart.positions[c];
      if (!portrait.mask[i] || !chart.regular[c]) continue;
      if (chart.beta[c] < beta_floor) throw ValidationError("beta below threshold on the regular chart");
      r.values[i] = portrait.values[i] / chart.beta[c];
      r.mask[i] = 1;
    }
  }
  r.grid = deposit(grid, r.positions, r.values, r.mask);
  return r;
}

PotentialRecovery recover_potential(const WaveRecovery& u, const WaveRecovery& u_tt, const Portrait& layout_p,
                                    const Grid& grid, const PotentialOptions& options) {
  const int nk = layout_p.n_gamma(), nm = layout_p.n_xi();
  if (u.values.size() != layout_p.values.size() || u_tt.values.size() != u.values.size()) {
    throw ValidationError("recovered waves do not share the portrait layout");
  }
  const int wa = options.half_window_gamma, wb = options.half_window_xi;
  if (wa < 1 || wb < 1) throw ValidationError("potential fit windows must be >= 1");
  PotentialRecovery r;
  r.q.assign(u.values.size(), 0.0);
  r.positions = u.positions;
  r.mask.assign(u.values.size(), 0);
  double umax = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (u.mask[i]) umax = std::max(umax, std::abs(u.values[i]));
  }
  const auto tube = tube_mask(layout_p, options.edge_margin);
  const int rows = (2 * wa + 1) * (2 * wb + 1);
  Eigen::MatrixXd A(rows, 6);
  Eigen::MatrixXd b(rows, 2);
  double floor_sum = 0.0;
  int kept = 0;
  for (int k = wa; k + wa < nk; ++k) {
    for (int m = wb; m + wb < nm; ++m) {
      const std::size_t c = layout_p.index(k, m);
      if (!tube[c] || layout_p.xi_grid[m] > options.xi_max) continue;
      bool ok = true;
      for (int da = -wa; da <= wa && ok; ++da) {
        for (int db = -wb; db <= wb && ok; ++db) {
          const std::size_t i = layout_p.index(k + da, m + db);
          ok = u.mask[i] && u_tt.mask[i];
        }
      }
      if (!ok) continue;
      const Point& x0 = u.positions[c];
      int row = 0;
      for (int da = -wa; da <= wa; ++da) {
        for (int db = -wb; db <= wb; ++db) {
          const std::size_t i = layout_p.index(k + da, m + db);
          const double x = u.positions[i][0] - x0[0], z = u.positions[i][1] - x0[1];
          A.row(row) << 1.0, x, z, x * x, x * z, z * z;
          b(row, 0) = u.values[i];
          b(row, 1) = u_tt.values[i];
          ++row;
        }
      }
      const Eigen::MatrixXd fit = A.colPivHouseholderQr().solve(b);
      const double uc = fit(0, 0), lap = 2.0 * (fit(3, 0) + fit(5, 0));
      if (!(std::abs(uc) > options.threshold * umax)) continue;
      r.q[c] = (lap - fit(0, 1)) / uc;
      r.mask[c] = 1;
      floor_sum += std::abs(lap / uc);
      ++kept;
    }
  }
  if (kept == 0) {
    std::ostringstream msg;
    msg << "potential mask is empty (threshold " << options.threshold << " of max |u| = " << umax << ")";
    r.diagnostic = msg.str();
  } else {
    r.noise_floor = floor_sum / kept;
  }
  r.grid = deposit(grid, r.positions, r.q, r.mask);
  return r;
}

std::vector<double> smoothed_derivative(const std::vector<double>& y, double spacing, int half_window) {
  const int n = static_cast<int>(y.size());
  if (half_window < 1) throw ValidationError("derivative window must be >= 1");
  const int width = 2 * half_window + 1;
  if (n < 3) throw ValidationError("need at least three samples to differentiate");
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) {
    const int w = std::min(width, n);
    int lo = std::clamp(i - half_window, 0, n - w);
    Eigen::MatrixXd A(w, 3);
    Eigen::VectorXd b(w);
    for (int r = 0; r < w; ++r) {
      const double s = (lo + r - i) * spacing;
      A(r, 0) = 1.0;
      A(r, 1) = s;
      A(r, 2) = s * s;
      b(r) = y[lo + r];
    }
    d[i] = A.colPivHouseholderQr().solve(b)(1);
  }
  return d;
}

SpeedRecovery recover_speed(const Portrait& one, const Portrait& px, const Portrait& pz, const Grid& grid,
                            const SpeedOptions& options) {
  if (one.values.size() != px.values.size() || one.values.size() != pz.values.size()) {
    throw ValidationError("portraits must share one layout");
  }
  const int nk = one.n_gamma(), nm = one.n_xi();
  SpeedRecovery r;
  r.positions.assign(one.values.size(), Point{0.0, 0.0});
  r.speed.assign(one.values.size(), 0.0);
  r.mask.assign(one.values.size(), 0);
  double omax = 0.0;
  for (std::size_t i = 0; i < one.values.size(); ++i) {
    if (one.mask[i]) omax = std::max(omax, std::abs(one.values[i]));
  }
  const auto tube = tube_mask(one, options.edge_margin);
  std::vector<unsigned char> ok(one.values.size(), 0);
  for (std::size_t i = 0; i < one.values.size(); ++i) {
    ok[i] = tube[i] && one.mask[i] && px.mask[i] && pz.mask[i] && one.values[i] > options.one_floor * omax;
    if (ok[i]) r.positions[i] = {px.values[i] / one.values[i], pz.values[i] / one.values[i]};
  }
  int non_monotone = 0;
  for (int k = 0; k < nk; ++k) {
    // Longest run of usable delays starting from the screen side.
    int m0 = 0;
    while (m0 < nm && !ok[one.index(k, m0)]) ++m0;
    int m1 = m0;
    while (m1 < nm && ok[one.index(k, m1)]) ++m1;
    const int len = m1 - m0;
    if (len < 3) continue;
    const double spacing = one.xi_grid[m0 + 1] - one.xi_grid[m0];
    std::vector<double> xs(len), zs(len);
    for (int t = 0; t < len; ++t) {
      xs[t] = r.positions[one.index(k, m0 + t)][0];
      zs[t] = r.positions[one.index(k, m0 + t)][1];
    }
    const auto dx = smoothed_derivative(xs, spacing, options.half_window);
    const auto dz = smoothed_derivative(zs, spacing, options.half_window);
    const int last = options.trim_deep ? len - options.half_window : len;
    for (int t = 0; t < last; ++t) {
      const std::size_t i = one.index(k, m0 + t);
      if (t > 0 && zs[t] <= zs[t - 1]) {
        ++non_monotone;
        continue;
      }
      r.speed[i] = std::hypot(dx[t], dz[t]);
      r.mask[i] = r.speed[i] > 0.0;
    }
  }
  if (non_monotone > 0) r.diagnostic = std::to_string(non_monotone) + " non-monotone depth samples masked";
  r.grid = deposit(grid, r.positions, r.speed, r.mask);
  return r;
}

void write_portrait(const std::filesystem::path& dir, const std::string& stem, const Portrait& p) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  // Raster rows are delays (depth), columns are screen nodes.
  std::vector<double> raster(p.values.size());
  std::vector<unsigned char> mask(p.values.size());
  for (int m = 0; m < p.n_xi(); ++m) {
    for (int k = 0; k < p.n_gamma(); ++k) {
      raster[static_cast<std::size_t>(m) * p.n_gamma() + k] = p.at(k, m);
      mask[static_cast<std::size_t>(m) * p.n_gamma() + k] = p.mask[p.index(k, m)];
    }
  }
  write_csv_raster(dir / (stem + ".csv"), p.n_xi(), p.n_gamma(), raster);
  write_binary(dir / (stem + ".bin"), raster);
  write_pgm(dir / (stem + ".pgm"), p.n_xi(), p.n_gamma(), raster, mask);
  std::vector<double> mask_d(mask.begin(), mask.end());
  write_binary(dir / (stem + "_mask.bin"), mask_d);
  std::ostringstream g, x;
  for (std::size_t i = 0; i < p.gamma.size(); ++i) g << (i ? " " : "") << format_double(p.gamma[i]);
  for (std::size_t i = 0; i < p.xi_grid.size(); ++i) x << (i ? " " : "") << format_double(p.xi_grid[i]);
  write_manifest(dir / (stem + "_manifest.txt"), {{"format", "bcm-portrait-1"},
                                                  {"layout", "rows = xi, cols = gamma, float64 LE"},
                                                  {"rows", std::to_string(p.n_xi())},
                                                  {"cols", std::to_string(p.n_gamma())},
                                                  {"gamma", g.str()},
                                                  {"sigma_from", format_double(p.sigma_from)},
                                                  {"sigma_to", format_double(p.sigma_to)},
                                                  {"xi", x.str()},
                                                  {"sha256", sha256_hex(raster)}});
}

Portrait read_portrait(const std::filesystem::path& dir, const std::string& stem) {
  const auto m = read_manifest(dir / (stem + "_manifest.txt"));
  auto need = [&](const std::string& key) -> const std::string& {
    const auto it = m.find(key);
    if (it == m.end()) throw IoError("portrait manifest lacks '" + key + "'");
    return it->second;
  };
  if (need("format") != "bcm-portrait-1") throw IoError("unsupported portrait format");
  Portrait p;
  p.sigma_from = std::stod(need("sigma_from"));
  p.sigma_to = std::stod(need("sigma_to"));
  std::istringstream g(need("gamma")), x(need("xi"));
  for (double v; g >> v;) p.gamma.push_back(v);
  for (double v; x >> v;) p.xi_grid.push_back(v);
  const std::size_t n = p.gamma.size() * p.xi_grid.size();
  const auto raster = read_binary(dir / (stem + ".bin"), n);
  const auto mask = read_binary(dir / (stem + "_mask.bin"), n);
  p.values.resize(n);
  p.mask.resize(n);
  for (int mm = 0; mm < p.n_xi(); ++mm) {
    for (int k = 0; k < p.n_gamma(); ++k) {
      p.values[p.index(k, mm)] = raster[static_cast<std::size_t>(mm) * p.n_gamma() + k];
      p.mask[p.index(k, mm)] = mask[static_cast<std::size_t>(mm) * p.n_gamma() + k] != 0.0;
    }
  }
  return p;
}

void write_field(const std::filesystem::path& dir, const std::string& stem, const Grid& grid, const Field& values,
                 const std::vector<unsigned char>& mask) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  write_csv_raster(dir / (stem + ".csv"), grid.nz, grid.nx, values);
  write_binary(dir / (stem + ".bin"), values);
  write_pgm(dir / (stem + ".pgm"), grid.nz, grid.nx, values, mask);
  write_manifest(dir / (stem + "_manifest.txt"), {{"format", "bcm-field-1"},
                                                  {"layout", "rows = z, cols = x, float64 LE"},
                                                  {"rows", std::to_string(grid.nz)},
                                                  {"cols", std::to_string(grid.nx)},
                                                  {"origin_x", format_double(grid.x0)},
                                                  {"origin_z", format_double(grid.z0)},
                                                  {"spacing", format_double(grid.h)},
                                                  {"sha256", sha256_hex(values)}});
}

}  // namespace bcm
