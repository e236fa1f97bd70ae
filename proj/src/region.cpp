// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#include "beltrami/region.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beltrami {

namespace {

Eigen::Vector3d sphere_direction(const Eigen::Vector2d& p) {
  const double st = std::sin(p.x());
  return {st * std::cos(p.y()), st * std::sin(p.y()), std::cos(p.x())};
}

bool polygon_contains(const shape::ConvexPolygon& poly, const Eigen::Vector2d& p) {
  // counter-clockwise vertices; closed edges
  const size_t n = poly.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = poly.vertices[i];
    const Eigen::Vector2d& b = poly.vertices[(i + 1) % n];
    const double cross = (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
    if (cross < 0.0) return false;
  }
  return true;
}

bool in_half_open_angle(double phi, double lo, double hi) {
  // ranges may wrap through 2*pi
  const double two_pi = 2.0 * kPi;
  double x = phi - lo;
  x -= two_pi * std::floor(x / two_pi);
  double w = hi - lo;
  if (lo != hi) w -= two_pi * std::floor(w / two_pi);
  if (w == 0.0) w = two_pi;  // degenerate range read as the full circle
  return x < w;
}

struct ContainsVisitor {
  const AmbientGeometry& geometry;
  const Eigen::Vector2d& p;  // already wrapped for the torus

  bool operator()(const shape::All&) const { return true; }

  bool operator()(const shape::HalfPlane& h) const { return h.normal.dot(p) <= h.offset; }

  bool operator()(const shape::Disk& d) const { return (p - d.center).norm() < d.radius; }

  bool operator()(const shape::ConvexPolygon& poly) const { return polygon_contains(poly, p); }

  bool operator()(const shape::SphericalCap& cap) const {
    const double c = std::clamp(sphere_direction(p).dot(cap.axis), -1.0, 1.0);
    return std::acos(c) < cap.angle;
  }

  bool operator()(const shape::SphericalLune& lune) const {
    if (!(p.x() >= lune.theta_lo && p.x() < lune.theta_hi)) return false;
    return in_half_open_angle(p.y(), lune.phi_lo, lune.phi_hi);
  }

  bool operator()(const shape::TorusHole& hole) const {
    // the base shape, repeated over the lattice: test the 3x3 images around p
    const Eigen::Matrix2d bt = geometry.as_flat_torus().lattice_basis.transpose();
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        const Eigen::Vector2d image = p + bt * Eigen::Vector2d(di, dj);
        if (std::visit(ContainsVisitor{geometry, image}, hole.base->node())) return true;
      }
    return false;
  }

  bool operator()(const shape::Union& u) const {
    for (const auto& part : u.parts)
      if (std::visit(ContainsVisitor{geometry, p}, part->node())) return true;
    return false;
  }

  bool operator()(const shape::Intersection& s) const {
    for (const auto& part : s.parts)
      if (!std::visit(ContainsVisitor{geometry, p}, part->node())) return false;
    return true;
  }

  bool operator()(const shape::Complement& c) const {
    return !std::visit(ContainsVisitor{geometry, p}, c.operand->node());
  }
};

}  // namespace

// --- factories ---------------------------------------------------------------

Region Region::all() { return Region(shape::All{}); }

Region Region::half_plane(const Eigen::Vector2d& normal, double offset) {
  if (normal.norm() == 0.0) throw std::invalid_argument("half_plane: zero normal");
  return Region(shape::HalfPlane{normal, offset});
}

Region Region::disk(const Eigen::Vector2d& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("disk: radius must be positive");
  return Region(shape::Disk{center, radius});
}

Region Region::convex_polygon(std::vector<Eigen::Vector2d> vertices) {
  if (vertices.size() < 3) throw std::invalid_argument("convex_polygon: need at least 3 vertices");
  double twice_area = 0.0;
  for (size_t i = 0; i < vertices.size(); ++i) {
    const auto& a = vertices[i];
    const auto& b = vertices[(i + 1) % vertices.size()];
    twice_area += a.x() * b.y() - b.x() * a.y();
  }
  if (twice_area == 0.0) throw std::invalid_argument("convex_polygon: vertices are collinear");
  if (twice_area < 0.0) std::reverse(vertices.begin(), vertices.end());
  // convexity: no right turns once counter-clockwise
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const auto& a = vertices[i];
    const auto& b = vertices[(i + 1) % n];
    const auto& c = vertices[(i + 2) % n];
    const double cross = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
    if (cross < 0.0) throw std::invalid_argument("convex_polygon: vertices are not convex");
  }
  return Region(shape::ConvexPolygon{std::move(vertices)});
}

Region Region::spherical_cap(const Eigen::Vector3d& axis, double angle) {
  const double n = axis.norm();
  if (n == 0.0) throw std::invalid_argument("spherical_cap: zero axis");
  if (!(angle > 0.0 && angle < kPi))
    throw std::invalid_argument("spherical_cap: angular radius must lie in (0, pi)");
  return Region(shape::SphericalCap{axis / n, angle});
}

Region Region::spherical_lune(double theta_lo, double theta_hi, double phi_lo, double phi_hi) {
  if (!(theta_lo >= 0.0 && theta_hi <= kPi && theta_lo < theta_hi))
    throw std::invalid_argument("spherical_lune: need 0 <= theta_lo < theta_hi <= pi");
  return Region(shape::SphericalLune{theta_lo, theta_hi, phi_lo, phi_hi});
}

Region Region::torus_hole(const Region& base) {
  const bool ok = std::holds_alternative<shape::Disk>(base.node()) ||
                  std::holds_alternative<shape::ConvexPolygon>(base.node());
  if (!ok) throw std::invalid_argument("torus_hole: base must be a disk or a convex polygon");
  return Region(shape::TorusHole{std::make_shared<const Region>(base)});
}

Region Region::union_of(std::vector<Region> parts) {
  if (parts.empty()) throw std::invalid_argument("union_of: empty part list");
  shape::Union u;
  for (auto& r : parts) u.parts.push_back(std::make_shared<const Region>(std::move(r)));
  return Region(std::move(u));
}

Region Region::intersection_of(std::vector<Region> parts) {
  if (parts.empty()) throw std::invalid_argument("intersection_of: empty part list");
  shape::Intersection s;
  for (auto& r : parts) s.parts.push_back(std::make_shared<const Region>(std::move(r)));
  return Region(std::move(s));
}

Region Region::complement_of(const Region& r) {
  return Region(shape::Complement{std::make_shared<const Region>(r)});
}

bool Region::contains(const AmbientGeometry& geometry, const Eigen::Vector2d& point) const {
  const Eigen::Vector2d p = geometry.wrap(point);
  return std::visit(ContainsVisitor{geometry, p}, *node_);
}

// --- catalog ------------------------------------------------------------------

namespace {

std::vector<NamedDomain> make_catalog() {
  std::vector<NamedDomain> cat;
  const double s3 = std::sqrt(3.0);

  {
    // S = (0,2)^2, Omega = S \ [1,2)^2
    Region hole = Region::intersection_of(
        {Region::half_plane({-1.0, 0.0}, -1.0), Region::half_plane({0.0, -1.0}, -1.0)});
    cat.push_back({"l_shape", AmbientGeometry::rectangle(2.0, 2.0), Region::complement_of(hole),
                   "L-shaped domain, S = (0,2)^2 minus the quarter [1,2)^2"});
  }
  {
    // unit-side equilateral triangle inscribed in its bounding rectangle
    Region tri = Region::convex_polygon({{0.0, 0.0}, {1.0, 0.0}, {0.5, s3 / 2.0}});
    cat.push_back({"equilateral_triangle", AmbientGeometry::rectangle(1.0, s3 / 2.0), tri,
                   "side-1 equilateral triangle; analytic spectrum available"});
  }
  {
    // one eighth of the square Sinai billiard: unit square cut by the diagonal
    // y <= x with a quarter-disk of radius 1/2 removed at the corner
    Region r = Region::intersection_of(
        {Region::half_plane({-1.0, 1.0}, 0.0),
         Region::complement_of(Region::disk({0.0, 0.0}, 0.5))});
    cat.push_back({"desymmetrized_sinai", AmbientGeometry::rectangle(1.0, 1.0), r,
                   "fundamental eighth of the Sinai billiard, disk radius 0.5"});
  }
  {
    cat.push_back({"hemisphere", AmbientGeometry::unit_sphere(),
                   Region::spherical_cap({0.0, 0.0, 1.0}, kPi / 2.0), "northern hemisphere"});
  }
  {
    cat.push_back({"spherical_octant", AmbientGeometry::unit_sphere(),
                   Region::spherical_lune(0.0, kPi / 2.0, 0.0, kPi / 2.0),
                   "octant: theta, phi in [0, pi/2)"});
  }
  {
    cat.push_back({"spherical_square", AmbientGeometry::unit_sphere(),
                   Region::spherical_lune(kPi / 4.0, 3.0 * kPi / 4.0, 0.0, kPi / 2.0),
                   "equatorial square patch, pi/2 x pi/2"});
  }
  const Eigen::Vector3d octant_centroid = Eigen::Vector3d(1.0, 1.0, 1.0).normalized();
  {
    Region r = Region::intersection_of(
        {Region::spherical_lune(0.0, kPi / 2.0, 0.0, kPi / 2.0),
         Region::complement_of(Region::spherical_cap(octant_centroid, 0.3))});
    cat.push_back({"octant_with_hole", AmbientGeometry::unit_sphere(), r,
                   "octant minus a cap of angular radius 0.3 at its centroid"});
  }
  {
    Region r = Region::intersection_of(
        {Region::spherical_lune(0.0, kPi / 2.0, 0.0, kPi / 4.0),
         Region::complement_of(Region::spherical_cap(octant_centroid, 0.3))});
    cat.push_back({"desymmetrized_octant_with_hole", AmbientGeometry::unit_sphere(), r,
                   "octant-with-hole cut along its mirror plane phi = pi/4"});
  }
  {
    Region r = Region::complement_of(Region::torus_hole(Region::disk({0.5, 0.5}, 0.25)));
    cat.push_back({"torus_with_hole", AmbientGeometry::flat_torus(Eigen::Matrix2d::Identity()), r,
                   "unit torus minus a periodic disk of radius 0.25"});
  }
  {
    Region r = Region::complement_of(Region::union_of(
        {Region::torus_hole(Region::disk({0.3, 0.4}, 0.18)),
         Region::torus_hole(Region::disk({0.72, 0.76}, 0.12))}));
    cat.push_back({"torus_asymmetric_holes", AmbientGeometry::flat_torus(Eigen::Matrix2d::Identity()),
                   r, "unit torus minus two unequal periodic disks (no symmetry)"});
  }
  return cat;
}

}  // namespace

const std::vector<NamedDomain>& builtin_domains() {
  static const std::vector<NamedDomain> catalog = make_catalog();
  return catalog;
}

const NamedDomain& find_domain(const std::string& name) {
  for (const auto& d : builtin_domains())
    if (d.name == name) return d;
  throw std::invalid_argument("unknown builtin domain: " + name);
}

}  // namespace beltrami
