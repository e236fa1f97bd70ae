// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace beltrami {

/// Raised when a solver fails to converge or produces unusable output.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by the CLI layer for malformed or inconsistent run configurations.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace beltrami
