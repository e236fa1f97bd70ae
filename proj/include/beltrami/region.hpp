// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "beltrami/geometry.hpp"

namespace beltrami {

// ---------------------------------------------------------------------------
// Region: the domain Omega as an immutable boolean shape tree.
//
// Boundary conventions (fixes determinism only; quadrature nodes almost never
// hit boundaries): half-planes and polygon edges are closed (<=), disk and cap
// rims are open (<), interval-style ranges are half-open [lo, hi).
//
// On the torus, membership first wraps the point into the fundamental cell,
// so contains(p) == contains(p + lattice vector) for every primitive.
// TorusHole additionally tests the 3x3 neighbouring lattice images of its base
// shape, so holes may straddle cell boundaries.
// ---------------------------------------------------------------------------

class Region;

namespace shape {

struct All {};

struct HalfPlane {
  Eigen::Vector2d normal;
  double offset;  // {p : normal . p <= offset}
};

struct Disk {
  Eigen::Vector2d center;
  double radius;  // {p : |p - center| < radius}
};

struct ConvexPolygon {
  std::vector<Eigen::Vector2d> vertices;  // stored counter-clockwise
};

struct SphericalCap {
  Eigen::Vector3d axis;  // unit vector
  double angle;          // geodesic angle from axis, in (0, pi)
};

struct SphericalLune {
  double theta_lo, theta_hi;  // [lo, hi) in [0, pi]
  double phi_lo, phi_hi;      // [lo, hi); wraps when lo > hi
};

struct TorusHole {
  std::shared_ptr<const Region> base;  // Disk or ConvexPolygon, repeated periodically
};

struct Union {
  std::vector<std::shared_ptr<const Region>> parts;
};

struct Intersection {
  std::vector<std::shared_ptr<const Region>> parts;
};

struct Complement {
  std::shared_ptr<const Region> operand;
};

using Node = std::variant<All, HalfPlane, Disk, ConvexPolygon, SphericalCap, SphericalLune,
                          TorusHole, Union, Intersection, Complement>;

}  // namespace shape

class Region {
 public:
  // primitives
  static Region all();
  static Region half_plane(const Eigen::Vector2d& normal, double offset);
  static Region disk(const Eigen::Vector2d& center, double radius);
  static Region convex_polygon(std::vector<Eigen::Vector2d> vertices);
  static Region spherical_cap(const Eigen::Vector3d& axis, double angle);
  static Region spherical_lune(double theta_lo, double theta_hi, double phi_lo, double phi_hi);
  static Region torus_hole(const Region& base);

  // combinators
  static Region union_of(std::vector<Region> parts);
  static Region intersection_of(std::vector<Region> parts);
  static Region complement_of(const Region& r);

  /// True iff the point belongs to Omega. Total and deterministic on the chart.
  bool contains(const AmbientGeometry& geometry, const Eigen::Vector2d& point) const;

  /// chi_{S \ Omega}(point): 1 - [contains(point)].
  int complement_indicator(const AmbientGeometry& geometry, const Eigen::Vector2d& point) const {
    return contains(geometry, point) ? 0 : 1;
  }

  const shape::Node& node() const { return *node_; }

 private:
  explicit Region(shape::Node n) : node_(std::make_shared<const shape::Node>(std::move(n))) {}
  std::shared_ptr<const shape::Node> node_;
};

/// A catalog entry: a named billiard domain together with its host space.
struct NamedDomain {
  std::string name;
  AmbientGeometry geometry;
  Region region;
  std::string note;
};

/// Built-in domains from the billiard catalog (L-shape, equilateral triangle,
/// desymmetrized Sinai, hemisphere, spherical octant/square, octant with hole,
/// periodic domains with holes). Hole radii have no canonical values; the
/// defaults here are conventional stand-ins.
const std::vector<NamedDomain>& builtin_domains();

/// Catalog lookup by name; throws std::invalid_argument for unknown names.
const NamedDomain& find_domain(const std::string& name);

}  // namespace beltrami
