// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace cfsense {

// CLI exit-code mapping: ConfigError -> 1, IoError -> 3, everything else
// (NumericalError, std::domain_error, ...) -> 2.

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cfsense
