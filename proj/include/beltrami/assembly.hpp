// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <array>
#include <filesystem>

#include "beltrami/geometry.hpp"
#include "beltrami/region.hpp"

namespace beltrami {

struct AssemblyOptions {
  /// Worker threads; 0 picks hardware concurrency capped by BELTRAMI_THREADS.
  int threads = 0;
  /// Quadrature nodes per evaluation chunk.
  int chunk = 1024;
  /// Forces single-threaded assembly. Output bits are identical either way:
  /// every matrix entry is reduced in a fixed order independent of threading.
  bool deterministic = false;
};

/// Discretized Schroedinger operator
///   H_nm = lambda_n(S) delta_nm + V0 sum_q w_q chi_{S\Omega}(x_q) phi_n(x_q) phi_m(x_q),
/// assembled on the lower triangle and mirrored, so it is symmetric bit-exactly.
struct HamiltonianMatrix {
  Eigen::MatrixXd entries;
  BasisSpec spec;
  Region region;
  double v0 = 0.0;
  std::array<int, 2> grid_resolution{};
};

HamiltonianMatrix assemble(const BasisSpec& spec, const Region& region, double v0,
                           const QuadratureGrid& grid, const AssemblyOptions& options = {});

/// Domain-fit score tau_Omega(S): the V0-independent sup over Omega-nodes of
/// the L2 projection of the complement indicator onto the truncated basis,
///   tau = max_{x_q in Omega} | sum_j c_j phi_j(x_q) |,  c_j = <phi_j, chi_{S\Omega}>.
/// Small tau means the potential that carves Omega out of S is well resolved.
double fit_score(const BasisSpec& spec, const Region& region, const QuadratureGrid& grid,
                 const AssemblyOptions& options = {});

/// Row-major 64-bit float dump with a small header (magic, version, N, V0,
/// geometry tag). See README for the exact layout.
void write_matrix_binary(const HamiltonianMatrix& h, const std::filesystem::path& path);

/// Plain CSV alternative: N rows of N entries at 17 significant digits.
void write_matrix_csv(const HamiltonianMatrix& h, const std::filesystem::path& path);

}  // namespace beltrami
