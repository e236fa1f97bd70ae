// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#include "beltrami/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace beltrami {

EigenSolution eigendecompose(const HamiltonianMatrix& h, int k) {
  const int n = static_cast<int>(h.entries.rows());
  if (k < 1 || k > n) throw std::invalid_argument("eigendecompose: need 1 <= k <= N");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.entries);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigendecompose: tridiagonal QL iteration failed to converge (N = " +
                         std::to_string(n) + ")");

  EigenSolution sol{solver.eigenvalues().head(k), solver.eigenvectors().leftCols(k), h.spec, h.v0};

  // sign fix: first coefficient of significant magnitude positive
  for (int j = 0; j < k; ++j) {
    auto col = sol.coefficients.col(j);
    const double scale = col.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
      if (std::abs(col[i]) > 1e-12 * scale) {
        if (col[i] < 0.0) col = -col;
        break;
      }
    }
  }
  return sol;
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric_eigenvalues: QL iteration failed to converge (N = " +
                         std::to_string(m.rows()) + ")");
  return solver.eigenvalues();
}

std::vector<double> sample_mode(const EigenSolution& sol, int j,
                                std::span<const Eigen::Vector2d> points) {
  if (j < 0 || j >= sol.eigenvalues.size())
    throw std::out_of_range("sample_mode: mode index out of range");
  const int n = sol.spec.size();
  BasisEvaluator eval(sol.spec);
  std::vector<double> buf(n);
  std::vector<double> values;
  values.reserve(points.size());
  for (const auto& p : points) {
    if (!sol.spec.geometry.in_chart(p)) throw std::domain_error("sample_mode: point outside chart");
    eval.eval_all(p, buf);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += sol.coefficients(i, j) * buf[i];
    values.push_back(s);
  }
  return values;
}

ModeMass mode_mass(const EigenSolution& sol, int j, const QuadratureGrid& grid,
                   const Region& region) {
  if (j < 0 || j >= sol.eigenvalues.size())
    throw std::out_of_range("mode_mass: mode index out of range");
  if (!(sol.spec.geometry == grid.geometry))
    throw std::invalid_argument("mode_mass: solution and grid use different geometries");
  const int n = sol.spec.size();
  BasisEvaluator eval(sol.spec);
  std::vector<double> buf(n);
  ModeMass mass;
  for (int q = 0; q < static_cast<int>(grid.nodes.size()); ++q) {
    eval.eval_all(grid.nodes[q], buf);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += sol.coefficients(i, j) * buf[i];
    const double m = grid.weights[q] * s * s;
    if (region.contains(grid.geometry, grid.nodes[q]))
      mass.inside += m;
    else
      mass.outside += m;
  }
  return mass;
}

}  // namespace beltrami
