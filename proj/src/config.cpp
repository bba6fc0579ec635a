#include "bcm/config.hpp"

#include "bcm/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>

#include <cstdio>
#include <sstream>

namespace bcm {

namespace pt = boost::property_tree;

namespace {

pt::ptree::path_type key_path(const std::string& section, const std::string& key) {
  // '/' never occurs in our keys, so dotted names stay literal.
  return pt::ptree::path_type(section + "/" + key, '/');
}

}  // namespace

Config Config::from_file(const std::filesystem::path& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw IoError("cannot read config '" + path.string() + "': " + e.message());
  }
  Config cfg(std::move(tree));
  cfg.base_dir_ = path.parent_path();
  return cfg;
}

Config Config::from_string(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError("malformed config: " + e.message());
  }
  return Config(std::move(tree));
}

std::optional<std::string> Config::raw(const std::string& section, const std::string& key) const {
  auto node = tree_.get_optional<std::string>(key_path(section, key));
  if (!node) return std::nullopt;
  return *node;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return raw(section, key).has_value();
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  auto v = raw(section, key);
  if (!v) throw ValidationError("missing config key [" + section + "] " + key);
  return *v;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  return raw(section, key).value_or(fallback);
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const std::string text = get_string(section, key);
  try {
    std::size_t used = 0;
    double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ValidationError("config key [" + section + "] " + key + " is not a number: '" + text + "'");
  }
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

int Config::get_int(const std::string& section, const std::string& key) const {
  const std::string text = get_string(section, key);
  try {
    std::size_t used = 0;
    int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ValidationError("config key [" + section + "] " + key + " is not an integer: '" + text + "'");
  }
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  tree_.put(key_path(section, key), value);
}

void Config::set(const std::string& section, const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  set(section, key, std::string(buf));
}

std::string Config::to_string() const {
  std::ostringstream out;
  pt::write_ini(out, tree_);
  return out.str();
}

}  // namespace bcm
