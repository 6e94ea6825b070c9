#pragma once

#include <stdexcept>
#include <string>

namespace imtrack {

// Invalid configuration or malformed input data (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown inside an estimation operation: lost positive
// definiteness, failed factorization, non-positive innovation variance
// (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace imtrack
