#include "bcm/raster_io.hpp"

#include "bcm/errors.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace bcm {

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
  if (ctx_ == nullptr || EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 initialisation failed");
  }
}

Sha256::~Sha256() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void Sha256::update(const void* data, std::size_t bytes) {
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data, bytes);
}

void Sha256::update(std::span<const double> values) {
  update(values.data(), values.size_bytes());
}

void Sha256::update(const std::string& text) { update(text.data(), text.size()); }

std::string Sha256::hex_digest() {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), digest, &len);
  static const char* kHex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string sha256_hex(std::span<const double> values) {
  Sha256 sha;
  sha.update(values);
  return sha.hex_digest();
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv_raster(const std::filesystem::path& path, int rows, int cols,
                      std::span<const double> values) {
  if (values.size() != static_cast<std::size_t>(rows) * cols) {
    throw ValidationError("raster size mismatch for " + path.string());
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c) out << ',';
      double v = values[static_cast<std::size_t>(r) * cols + c];
      if (std::isfinite(v)) {
        out << format_double(v);
      } else {
        out << "nan";
      }
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

Raster read_csv_raster(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  Raster raster;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream row(line);
    std::string cell;
    int cols = 0;
    while (std::getline(row, cell, ',')) {
      try {
        raster.values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ValidationError("non-numeric CSV cell '" + cell + "' in " + path.string());
      }
      ++cols;
    }
    if (raster.rows == 0) {
      raster.cols = cols;
    } else if (cols != raster.cols) {
      throw ValidationError("ragged CSV raster " + path.string());
    }
    ++raster.rows;
  }
  return raster;
}

void write_pgm(const std::filesystem::path& path, int rows, int cols, std::span<const double> values,
               std::span<const unsigned char> mask) {
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  if (values.size() != n || (!mask.empty() && mask.size() != n)) {
    throw ValidationError("PGM size mismatch for " + path.string());
  }
  auto visible = [&](std::size_t k) {
    return std::isfinite(values[k]) && (mask.empty() || mask[k] != 0);
  };
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < n; ++k) {
    if (!visible(k)) continue;
    lo = std::min(lo, values[k]);
    hi = std::max(hi, values[k]);
  }
  const double span = (hi > lo) ? hi - lo : 1.0;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << cols << ' ' << rows << "\n255\n";
  for (std::size_t k = 0; k < n; ++k) {
    unsigned char px = 0;
    if (visible(k)) px = static_cast<unsigned char>(std::lround(255.0 * (values[k] - lo) / span));
    out.put(static_cast<char>(px));
  }
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xFF) << (8 * (7 - b));
    return r;
  }
}

}  // namespace

void write_binary(const std::filesystem::path& path, std::span<const double> values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (double v : values) {
    std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<double> read_binary(const std::filesystem::path& path, std::size_t expected_count) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot read " + path.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != expected_count * sizeof(double)) {
    throw IoError("unexpected size of " + path.string() + ": " + std::to_string(bytes) +
                  " bytes, expected " + std::to_string(expected_count * sizeof(double)));
  }
  in.seekg(0);
  std::vector<double> values(expected_count);
  for (auto& v : values) {
    std::uint64_t bits = 0;
    in.read(reinterpret_cast<char*>(&bits), sizeof bits);
    v = std::bit_cast<double>(to_little(bits));
  }
  if (!in) throw IoError("read failed for " + path.string());
  return values;
}

void write_manifest(const std::filesystem::path& path, const Manifest& entries) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::map<std::string, std::string> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::map<std::string, std::string> entries;
  std::string line;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("malformed manifest line in " + path.string() + ": " + line);
    entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return entries;
}

}  // namespace bcm
