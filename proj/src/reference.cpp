// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#include "beltrami/reference.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "beltrami/eigensolve.hpp"

namespace beltrami::reference {

std::vector<SpectrumLine> triangle_spectrum(int count) {
  if (count < 1) throw std::invalid_argument("triangle_spectrum: count must be >= 1");
  const double scale = (4.0 * kPi / 3.0) * (4.0 * kPi / 3.0);
  // merge on the integer form value p^2 + q^2 - pq, so collisions are exact
  std::map<long, int> levels;
  int pmax = 8;
  while (true) {
    levels.clear();
    for (int p = 2; p <= pmax; ++p)
      for (int q = 1; 2 * q <= p; ++q) {
        const long v = static_cast<long>(p) * p + static_cast<long>(q) * q -
                       static_cast<long>(p) * q;
        levels[v] += (p == 2 * q) ? 1 : 2;
      }
    // all levels below the enumeration frontier (p = pmax contributes from
    // ~3/4 pmax^2 upward) are complete; keep only the safe prefix
    const long safe = static_cast<long>(pmax) * pmax * 3 / 4;
    int complete = 0;
    for (const auto& [v, mult] : levels)
      if (v < safe) ++complete;
    if (complete >= count) break;
    pmax *= 2;
  }
  std::vector<SpectrumLine> out;
  out.reserve(count);
  for (const auto& [v, mult] : levels) {
    out.push_back({scale * static_cast<double>(v), mult});
    if (static_cast<int>(out.size()) == count) break;
  }
  return out;
}

std::vector<double> box_spectrum(double a1, double a2, int count) {
  if (count < 1) throw std::invalid_argument("box_spectrum: count must be >= 1");
  if (!(a1 > 0.0 && a2 > 0.0)) throw std::invalid_argument("box_spectrum: sides must be positive");
  BasisSpec spec = enumerate_basis(AmbientGeometry::rectangle(a1, a2), count);
  return {spec.eigenvalues.data(), spec.eigenvalues.data() + count};
}

std::vector<SpectrumLine> torus_spectrum(const Eigen::Matrix2d& lattice_basis, int count) {
  if (count < 1) throw std::invalid_argument("torus_spectrum: count must be >= 1");
  const Eigen::Matrix2d inv_b = lattice_basis.inverse();
  const double sigma = std::sqrt(
      0.5 * (lattice_basis.squaredNorm() +
             std::sqrt(std::max(0.0, std::pow(lattice_basis.squaredNorm(), 2) -
                                         4.0 * std::pow(lattice_basis.determinant(), 2)))));
  std::vector<double> values;
  double cut = 16.0 * kPi * kPi * inv_b.squaredNorm() + 1.0;
  while (true) {
    values.clear();
    const int kmax = static_cast<int>(std::ceil(sigma * std::sqrt(cut) / (2.0 * kPi))) + 1;
    for (int k1 = -kmax; k1 <= kmax; ++k1)
      for (int k2 = -kmax; k2 <= kmax; ++k2) {
        const double lam =
            4.0 * kPi * kPi * (inv_b * Eigen::Vector2d(k1, k2)).squaredNorm();
        if (lam <= cut) values.push_back(lam);
      }
    std::sort(values.begin(), values.end());
    // count distinct levels strictly below the cut's safety margin
    int distinct = 0;
    for (size_t i = 0; i < values.size(); ++i)
      if (values[i] < cut / 2.0 && (i == 0 || values[i] > values[i - 1] * (1.0 + 1e-9) + 1e-12))
        ++distinct;
    if (distinct >= count) break;
    cut *= 2.0;
  }
  std::vector<SpectrumLine> out;
  for (double v : values) {
    if (!out.empty() && v <= out.back().eigenvalue * (1.0 + 1e-9) + 1e-12)
      out.back().multiplicity += 1;
    else if (static_cast<int>(out.size()) < count)
      out.push_back({v, 1});
    else
      break;
  }
  return out;
}

std::vector<SpectrumLine> hemisphere_spectrum(int count) {
  if (count < 1) throw std::invalid_argument("hemisphere_spectrum: count must be >= 1");
  std::vector<SpectrumLine> out;
  for (int l = 1; static_cast<int>(out.size()) < count; ++l) {
    int mult = 0;
    for (int m = -l; m <= l; ++m)
      if ((l - std::abs(m)) % 2 == 1) ++mult;  // P_l^m(0) = 0 iff l - m odd
    out.push_back({static_cast<double>(l) * (l + 1), mult});
  }
  return out;
}

double interval_matching_residual(double v0, double lambda) {
  const double sl = std::sqrt(lambda);
  const double sv = std::sqrt(v0 - lambda);
  return sl * std::cos(sl) / std::sin(sl) + sv / std::tanh(sv);
}

double interval_relaxed_eigenvalue(double v0, int k) {
  if (k < 1) throw std::invalid_argument("interval_relaxed_eigenvalue: k must be >= 1");
  const double mu = kPi * kPi * k * k;
  if (!(v0 > mu))
    throw std::invalid_argument(
        "interval_relaxed_eigenvalue: V0 too small to bracket the root (need V0 > pi^2 k^2)");
  double lo = (k - 0.5) * (k - 0.5) * kPi * kPi * (1.0 + 1e-12);
  double hi = mu * (1.0 - 1e-15);
  // residual is positive at lo (cot vanishes, coth term dominates) and
  // diverges to -inf at hi
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (interval_matching_residual(v0, mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    if ((hi - lo) <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

// --- finite differences -------------------------------------------------------

Eigen::MatrixXd FdOperator::matrix() const {
  const int n = dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const double ax = 1.0 / (h1 * h1), ay = 1.0 / (h2 * h2);
  auto id = [this](int i, int j) { return i + j * n1; };  // x fastest
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      const int q = id(i, j);
      m(q, q) = 2.0 * ax + 2.0 * ay + potential[q];
      if (i > 0) m(q, id(i - 1, j)) = -ax;
      if (i < n1 - 1) m(q, id(i + 1, j)) = -ax;
      if (j > 0) m(q, id(i, j - 1)) = -ay;
      if (j < n2 - 1) m(q, id(i, j + 1)) = -ay;
    }
  return m;
}

FdOperator fd_assemble(const AmbientGeometry& rectangle, const Region& region, double v0,
                       std::array<int, 2> interior_nodes) {
  if (rectangle.kind() != AmbientGeometry::Kind::rectangle)
    throw std::invalid_argument("fd_assemble: host space must be a rectangle");
  if (interior_nodes[0] < 3 || interior_nodes[1] < 3)
    throw std::invalid_argument("fd_assemble: need at least 3 interior nodes per axis");
  if (!(v0 >= 0.0)) throw std::invalid_argument("fd_assemble: V0 must be nonnegative");
  const auto& rect = rectangle.as_rectangle();
  FdOperator op;
  op.n1 = interior_nodes[0];
  op.n2 = interior_nodes[1];
  op.h1 = rect.a1 / (op.n1 + 1);
  op.h2 = rect.a2 / (op.n2 + 1);
  op.potential.resize(op.dim());
  for (int j = 0; j < op.n2; ++j)
    for (int i = 0; i < op.n1; ++i) {
      const Eigen::Vector2d node((i + 1) * op.h1, (j + 1) * op.h2);
      op.potential[i + j * op.n1] = region.contains(rectangle, node) ? 0.0 : v0;
    }
  return op;
}

Eigen::VectorXd fd_eigenvalues(const FdOperator& op, int k) {
  if (k < 1 || k > op.dim()) throw std::invalid_argument("fd_eigenvalues: need 1 <= k <= dim");
  return symmetric_eigenvalues(op.matrix()).head(k);
}

}  // namespace beltrami::reference
