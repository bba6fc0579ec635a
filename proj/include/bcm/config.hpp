#pragma once

#include <boost/property_tree/ptree.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace bcm {

/// Sectioned key/value configuration (INI syntax). Keys are looked up as
/// "section" + "key"; a missing required key raises ValidationError.
class Config {
 public:
  Config() = default;
  explicit Config(boost::property_tree::ptree tree) : tree_(std::move(tree)) {}

  static Config from_file(const std::filesystem::path& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;

  void set(const std::string& section, const std::string& key, const std::string& value);
  void set(const std::string& section, const std::string& key, double value);

  std::string to_string() const;
  /// Directory the configuration was loaded from (for relative paths).
  const std::filesystem::path& base_dir() const { return base_dir_; }

 private:
  std::optional<std::string> raw(const std::string& section, const std::string& key) const;

  boost::property_tree::ptree tree_;
  std::filesystem::path base_dir_;
};

}  // namespace bcm
