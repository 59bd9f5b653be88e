#pragma once

#include <stdexcept>
#include <string>

namespace cfis {

/// Invalid operator configuration: mismatched channel counts, bad kernel
/// sizes, out-of-range hyperparameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed external input: tensor files, annotation files, CSV rows.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cfis
