#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bcm {

/// Incremental SHA-256 (OpenSSL backed).
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t bytes);
  void update(std::span<const double> values);
  void update(const std::string& text);
  std::string hex_digest();

 private:
  void* ctx_;
};

std::string sha256_hex(std::span<const double> values);

/// Raster of `rows` x `cols` values stored row-major.
struct Raster {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
};

void write_csv_raster(const std::filesystem::path& path, int rows, int cols,
                      std::span<const double> values);
Raster read_csv_raster(const std::filesystem::path& path);

/// 8-bit greyscale preview scaled to [min, max] of the finite values;
/// masked-out (or non-finite) pixels are written black.
void write_pgm(const std::filesystem::path& path, int rows, int cols, std::span<const double> values,
               std::span<const unsigned char> mask = {});

/// Little-endian IEEE-754 float64, no header.
void write_binary(const std::filesystem::path& path, std::span<const double> values);
std::vector<double> read_binary(const std::filesystem::path& path, std::size_t expected_count);

/// Ordered `key = value` text manifest.
using Manifest = std::vector<std::pair<std::string, std::string>>;
void write_manifest(const std::filesystem::path& path, const Manifest& entries);
std::map<std::string, std::string> read_manifest(const std::filesystem::path& path);

std::string format_double(double value);

}  // namespace bcm
