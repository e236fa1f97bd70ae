// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <array>
#include <span>
#include <variant>
#include <vector>

namespace beltrami {

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Host spaces
//
// Three solvable ambient spaces carry an analytically known Laplace-Beltrami
// eigenbasis:
//   Rectangle (0,a1)x(0,a2)   Dirichlet sine products
//   UnitSphere                real spherical harmonics, chart (theta, phi)
//   FlatTorus R^2/Gamma_B     real Fourier modes indexed by the dual lattice
//
// Chart conventions: rectangle points are (x1,x2) in the open box; sphere
// points are (theta, phi) with colatitude theta in [0,pi] and phi in [0,2pi);
// torus points live in the fundamental cell {B^T t : t in [0,1)^2}, where the
// rows of B generate the lattice (Gamma_B = Z^2 B).
// ---------------------------------------------------------------------------

struct Rectangle {
  double a1 = 1.0;
  double a2 = 1.0;
};

struct UnitSphere {};

struct FlatTorus {
  Eigen::Matrix2d lattice_basis;  // rows are the lattice generators
};

class AmbientGeometry {
 public:
  enum class Kind { rectangle, unit_sphere, flat_torus };

  static AmbientGeometry rectangle(double a1, double a2);
  static AmbientGeometry unit_sphere();
  static AmbientGeometry flat_torus(const Eigen::Matrix2d& lattice_basis);

  Kind kind() const;
  const Rectangle& as_rectangle() const;
  const FlatTorus& as_flat_torus() const;

  /// Total measure of S: a1*a2, 4*pi, or |det B|.
  double area() const;

  /// True when p is a valid chart point for this space.
  bool in_chart(const Eigen::Vector2d& p) const;

  /// Torus: canonical representative of p in the fundamental cell.
  /// Identity for the other spaces.
  Eigen::Vector2d wrap(const Eigen::Vector2d& p) const;

  bool operator==(const AmbientGeometry& other) const;

 private:
  explicit AmbientGeometry(std::variant<Rectangle, UnitSphere, FlatTorus> v) : v_(std::move(v)) {}
  std::variant<Rectangle, UnitSphere, FlatTorus> v_;
};

// ---------------------------------------------------------------------------
// Basis indexing
// ---------------------------------------------------------------------------

struct RectIndex {
  int n1 = 1, n2 = 1;  // positive
  bool operator==(const RectIndex&) const = default;
};

struct SphereIndex {
  int l = 0, m = 0;  // |m| <= l
  bool operator==(const SphereIndex&) const = default;
};

enum class TorusParity { constant, cosine, sine };

struct TorusIndex {
  int k1 = 0, k2 = 0;  // dual-lattice tag; (0,0) only for the constant mode
  TorusParity parity = TorusParity::constant;
  bool operator==(const TorusIndex&) const = default;
};

using BasisIndex = std::variant<RectIndex, SphereIndex, TorusIndex>;

/// Truncated orthonormal eigenbasis of the host space, ordered by ascending
/// eigenvalue with a deterministic lexicographic tie-break.
struct BasisSpec {
  AmbientGeometry geometry;
  std::vector<BasisIndex> indices;
  Eigen::VectorXd eigenvalues;  // ascending, one per index

  int size() const { return static_cast<int>(indices.size()); }
};

/// First n basis indices by analytic eigenvalue. Ties break lexicographically
/// on the index tuple (cosine before sine on the torus).
BasisSpec enumerate_basis(const AmbientGeometry& geometry, int n);

/// Analytic eigenvalue of basis function i.
double basis_eigenvalue(const BasisSpec& spec, int i);

/// Value of the i-th real orthonormal basis function at a chart point.
/// Out-of-chart points are rejected with std::domain_error.
double basis_eval(const BasisSpec& spec, int i, const Eigen::Vector2d& point);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Tensor quadrature grid over S. Weights carry the volume form, so
/// sum(weights) == |S| and integrals need no extra metric factor.
struct QuadratureGrid {
  AmbientGeometry geometry;
  std::array<int, 2> resolution{};
  std::vector<Eigen::Vector2d> nodes;
  Eigen::VectorXd weights;
};

/// Midpoint tensor rule on rectangle/torus; Gauss-Legendre in cos(theta)
/// tensor uniform-in-phi on the sphere. Each resolution component must be >= 2.
QuadratureGrid quadrature(const AmbientGeometry& geometry, std::array<int, 2> resolution);

/// Default grid for a basis: 4 nodes per half-wavelength of the highest
/// retained mode per coordinate, which keeps all phi_n*phi_m products
/// alias-free with margin. On the sphere the theta count follows Gauss
/// exactness (> lmax) and the phi count the product Nyquist bound (> 2 mmax).
std::array<int, 2> default_resolution(const BasisSpec& spec);

// ---------------------------------------------------------------------------
// Bulk evaluation
// ---------------------------------------------------------------------------

/// Evaluates all N basis functions at one point per call. Each instance owns
/// scratch buffers, so share one instance per thread, not across threads.
class BasisEvaluator {
 public:
  explicit BasisEvaluator(const BasisSpec& spec);

  /// out[i] = phi_i(point); out.size() must equal spec.size().
  void eval_all(const Eigen::Vector2d& point, std::span<double> out) const;

 private:
  const BasisSpec& spec_;
  int max_n1_ = 0, max_n2_ = 0;      // rectangle
  int max_l_ = 0;                    // sphere
  int max_k1_ = 0, max_k2_ = 0;      // torus
  Eigen::Matrix2d cell_to_frac_;     // torus: chart -> fractional coords
  double inv_sqrt_cell_ = 1.0;       // torus normalization
  mutable std::vector<double> s1_, s2_;           // sine tables / trig scratch
  mutable std::vector<double> legendre_;          // flattened (m,l) table
  mutable std::vector<double> cos_m_, sin_m_;
};

namespace detail {
/// Normalized associated Legendre function Pbar_l^m(u) with Condon-Shortley
/// phase, scaled so the real spherical harmonics built from it are
/// L2(S^2)-orthonormal. Exposed for the reference module and tests.
double normalized_legendre(int l, int m, double u);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);
}  // namespace detail

}  // namespace beltrami
