// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "beltrami/config.hpp"

namespace beltrami::cli {

struct CommandResult {
  std::vector<std::filesystem::path> files;
};

/// Full pipeline: assemble, decompose, write spectrum.csv (index, eigenvalue,
/// leakage), per-mode sample grids with JSON sidecars, and solve.json.
CommandResult cmd_solve(const RunConfig& config, const std::filesystem::path& out_dir);

/// Spacing statistics: histogram.csv with reference curves and
/// classification.json with the KS decision.
CommandResult cmd_stats(const RunConfig& config, const std::filesystem::path& out_dir);

/// Eigenvalue sweeps over a V0 or N list; companion relative-error CSV when an
/// oracle is configured.
CommandResult cmd_convergence(const RunConfig& config, const std::filesystem::path& out_dir);

/// Expansion vs finite-difference eigenvalues side by side, plus the analytic
/// oracle column when the region has one.
CommandResult cmd_fd_compare(const RunConfig& config, const std::filesystem::path& out_dir);

/// Domain-fit score tau for each candidate host space.
CommandResult cmd_fit_score(const RunConfig& config, const std::filesystem::path& out_dir);

}  // namespace beltrami::cli
