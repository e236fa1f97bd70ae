// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <span>

#include "beltrami/assembly.hpp"
#include "beltrami/errors.hpp"

namespace beltrami {

/// First K eigenpairs of H_N, ascending. Columns of `coefficients` are the
/// expansion coefficients c^(j); modes reconstruct as
///   psi_j(x) = sum_n coefficients(n, j) phi_n(x).
/// Sign convention: the first coefficient of significant magnitude is positive.
struct EigenSolution {
  Eigen::VectorXd eigenvalues;   // K, ascending
  Eigen::MatrixXd coefficients;  // N x K, orthonormal columns
  BasisSpec spec;
  double v0 = 0.0;
};

/// Dense symmetric eigendecomposition (Householder tridiagonalization with
/// implicit-shift QL, via Eigen). Throws NumericalError on convergence failure.
EigenSolution eigendecompose(const HamiltonianMatrix& h, int k);

/// Eigenvalues-only fast path for a symmetric matrix (full ascending spectrum).
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m);

/// psi_j evaluated at chart points. Out-of-chart points are rejected.
std::vector<double> sample_mode(const EigenSolution& sol, int j,
                                std::span<const Eigen::Vector2d> points);

struct ModeMass {
  double inside = 0.0;   // integral of psi^2 over Omega
  double outside = 0.0;  // integral of psi^2 over S \ Omega (the leakage)
};

/// Quadrature of |psi_j|^2 split by region membership; inside + outside ~ 1.
ModeMass mode_mass(const EigenSolution& sol, int j, const QuadratureGrid& grid,
                   const Region& region);

}  // namespace beltrami
