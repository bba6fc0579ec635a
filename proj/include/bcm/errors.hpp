#pragma once

#include <stdexcept>
#include <string>

namespace bcm {

/// Invalid input: bad configuration, violated precondition, mismatched grids.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem or serialization failure.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// A checked identity or invariant does not hold on the data.
class InvariantFailure : public std::runtime_error {
 public:
  explicit InvariantFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bcm
