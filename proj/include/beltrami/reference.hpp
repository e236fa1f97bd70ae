// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "beltrami/geometry.hpp"
#include "beltrami/region.hpp"

namespace beltrami::reference {

/// One spectral line: an eigenvalue with its multiplicity.
struct SpectrumLine {
  double eigenvalue = 0.0;
  int multiplicity = 1;
};

/// Dirichlet spectrum of the unit-side equilateral triangle,
///   lambda_pq = (4 pi / 3)^2 (p^2 + q^2 - p q),  1 <= q <= p/2,
/// multiplicity 2 unless p = 2q. Returns the first `count` distinct levels
/// ascending (exact integer collisions merged).
std::vector<SpectrumLine> triangle_spectrum(int count);

/// Dirichlet box spectrum pi^2 (n1^2/a1^2 + n2^2/a2^2), ascending, with
/// degenerate values repeated.
std::vector<double> box_spectrum(double a1, double a2, int count);

/// Flat-torus spectrum 4 pi^2 |w|^2 over the dual lattice w in Z^2 B^-T,
/// first `count` distinct levels with multiplicities counted over all lattice
/// tags (so the zero mode has multiplicity 1 and generic levels at least 4
/// for B = I).
std::vector<SpectrumLine> torus_spectrum(const Eigen::Matrix2d& lattice_basis, int count);

/// Dirichlet-on-the-equator hemisphere spectrum: l(l+1) counted over
/// harmonics with l - |m| odd, i.e. multiplicity l for level l >= 1.
std::vector<SpectrumLine> hemisphere_spectrum(int count);

/// k-th eigenvalue of the relaxed interval problem (S = (0,2), Omega = (0,1),
/// finite well V0): the root of
///   sqrt(l) cot(sqrt(l)) = -sqrt(V0 - l) coth(sqrt(V0 - l))
/// in ((k - 1/2)^2 pi^2, k^2 pi^2), by bisection to 1e-12 relative.
/// Requires V0 > pi^2 k^2; converges to pi^2 k^2 from below as V0 grows.
double interval_relaxed_eigenvalue(double v0, int k);

/// Residual of the matching condition at lambda; near zero at the root.
double interval_matching_residual(double v0, double lambda);

// ---------------------------------------------------------------------------
// Finite-difference baseline
// ---------------------------------------------------------------------------

/// Second-order five-point operator -(I (x) D2_x + D2_y (x) I) + diag(v) on
/// the interior lattice x_i = i h1, y_j = j h2 (Dirichlet rows eliminated),
/// x index fastest. v holds the sampled potential V0 chi_{S\Omega}.
struct FdOperator {
  double h1 = 0.0, h2 = 0.0;
  int n1 = 0, n2 = 0;  // interior nodes per axis
  Eigen::VectorXd potential;

  int dim() const { return n1 * n2; }
  Eigen::MatrixXd matrix() const;
};

FdOperator fd_assemble(const AmbientGeometry& rectangle, const Region& region, double v0,
                       std::array<int, 2> interior_nodes);

/// First k eigenvalues of the FD operator, ascending.
Eigen::VectorXd fd_eigenvalues(const FdOperator& op, int k);

}  // namespace beltrami::reference
