// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#include "beltrami/geometry.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace beltrami {

namespace {

int even_ceil(double x) {
  int n = static_cast<int>(std::ceil(x - 1e-12));
  return (n % 2 == 0) ? n : n + 1;
}

double spectral_norm_2x2(const Eigen::Matrix2d& b) {
  // sigma_max^2 of a 2x2 matrix from trace/determinant of B^T B.
  const double t = b.squaredNorm();
  const double d = std::abs(b.determinant());
  const double disc = std::max(0.0, t * t - 4.0 * d * d);
  return std::sqrt(0.5 * (t + std::sqrt(disc)));
}

bool index_lex_less(const BasisIndex& a, const BasisIndex& b) {
  if (const auto* ra = std::get_if<RectIndex>(&a)) {
    const auto& rb = std::get<RectIndex>(b);
    return std::tie(ra->n1, ra->n2) < std::tie(rb.n1, rb.n2);
  }
  if (const auto* sa = std::get_if<SphereIndex>(&a)) {
    const auto& sb = std::get<SphereIndex>(b);
    return std::tie(sa->l, sa->m) < std::tie(sb.l, sb.m);
  }
  const auto& ta = std::get<TorusIndex>(a);
  const auto& tb = std::get<TorusIndex>(b);
  return std::tie(ta.k1, ta.k2, ta.parity) < std::tie(tb.k1, tb.k2, tb.parity);
}

struct Candidate {
  double lambda;
  BasisIndex index;
};

void sort_and_trim(std::vector<Candidate>& cand, int n, BasisSpec& out) {
  std::sort(cand.begin(), cand.end(), [](const Candidate& x, const Candidate& y) {
    if (x.lambda != y.lambda) return x.lambda < y.lambda;
    return index_lex_less(x.index, y.index);
  });
  out.indices.reserve(n);
  out.eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) {
    out.indices.push_back(cand[i].index);
    out.eigenvalues[i] = cand[i].lambda;
  }
}

double torus_eigenvalue(const Eigen::Matrix2d& inv_b, int k1, int k2) {
  // w = B^-1 k in column convention; lambda = 4 pi^2 |w|^2.
  const Eigen::Vector2d w = inv_b * Eigen::Vector2d(k1, k2);
  return 4.0 * kPi * kPi * w.squaredNorm();
}

}  // namespace

// --- AmbientGeometry --------------------------------------------------------

AmbientGeometry AmbientGeometry::rectangle(double a1, double a2) {
  if (!(a1 > 0.0) || !(a2 > 0.0) || !std::isfinite(a1) || !std::isfinite(a2))
    throw std::invalid_argument("rectangle: side lengths must be positive and finite");
  return AmbientGeometry(Rectangle{a1, a2});
}

AmbientGeometry AmbientGeometry::unit_sphere() { return AmbientGeometry(UnitSphere{}); }

AmbientGeometry AmbientGeometry::flat_torus(const Eigen::Matrix2d& lattice_basis) {
  const double det = lattice_basis.determinant();
  if (!std::isfinite(det) || std::abs(det) < 1e-12 * std::max(1.0, lattice_basis.squaredNorm()))
    throw std::invalid_argument("flat_torus: lattice basis must be invertible");
  return AmbientGeometry(FlatTorus{lattice_basis});
}

AmbientGeometry::Kind AmbientGeometry::kind() const {
  if (std::holds_alternative<Rectangle>(v_)) return Kind::rectangle;
  if (std::holds_alternative<UnitSphere>(v_)) return Kind::unit_sphere;
  return Kind::flat_torus;
}

const Rectangle& AmbientGeometry::as_rectangle() const { return std::get<Rectangle>(v_); }
const FlatTorus& AmbientGeometry::as_flat_torus() const { return std::get<FlatTorus>(v_); }

double AmbientGeometry::area() const {
  switch (kind()) {
    case Kind::rectangle: {
      const auto& r = as_rectangle();
      return r.a1 * r.a2;
    }
    case Kind::unit_sphere:
      return 4.0 * kPi;
    case Kind::flat_torus:
      return std::abs(as_flat_torus().lattice_basis.determinant());
  }
  return 0.0;
}

bool AmbientGeometry::in_chart(const Eigen::Vector2d& p) const {
  switch (kind()) {
    case Kind::rectangle: {
      const auto& r = as_rectangle();
      return p.x() > 0.0 && p.x() < r.a1 && p.y() > 0.0 && p.y() < r.a2;
    }
    case Kind::unit_sphere:
      return p.x() >= 0.0 && p.x() <= kPi && p.y() >= 0.0 && p.y() < 2.0 * kPi;
    case Kind::flat_torus: {
      const Eigen::Matrix2d to_frac = as_flat_torus().lattice_basis.transpose().inverse();
      const Eigen::Vector2d t = to_frac * p;
      return t.x() >= 0.0 && t.x() < 1.0 && t.y() >= 0.0 && t.y() < 1.0;
    }
  }
  return false;
}

Eigen::Vector2d AmbientGeometry::wrap(const Eigen::Vector2d& p) const {
  if (kind() != Kind::flat_torus) return p;
  const Eigen::Matrix2d bt = as_flat_torus().lattice_basis.transpose();
  Eigen::Vector2d t = bt.inverse() * p;
  t.x() -= std::floor(t.x());
  t.y() -= std::floor(t.y());
  return bt * t;
}

bool AmbientGeometry::operator==(const AmbientGeometry& other) const {
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::rectangle:
      return as_rectangle().a1 == other.as_rectangle().a1 &&
             as_rectangle().a2 == other.as_rectangle().a2;
    case Kind::unit_sphere:
      return true;
    case Kind::flat_torus:
      return as_flat_torus().lattice_basis == other.as_flat_torus().lattice_basis;
  }
  return false;
}

// --- enumeration ------------------------------------------------------------

BasisSpec enumerate_basis(const AmbientGeometry& geometry, int n) {
  if (n < 1) throw std::invalid_argument("enumerate_basis: n must be >= 1");
  BasisSpec spec{geometry, {}, {}};

  switch (geometry.kind()) {
    case AmbientGeometry::Kind::rectangle: {
      const auto& r = geometry.as_rectangle();
      double cut = kPi * kPi * (1.0 / (r.a1 * r.a1) + 1.0 / (r.a2 * r.a2)) * 4.0;
      std::vector<Candidate> cand;
      while (true) {
        cand.clear();
        const int n1max = static_cast<int>(std::floor(r.a1 * std::sqrt(cut) / kPi)) + 1;
        const int n2max = static_cast<int>(std::floor(r.a2 * std::sqrt(cut) / kPi)) + 1;
        for (int n1 = 1; n1 <= n1max; ++n1)
          for (int n2 = 1; n2 <= n2max; ++n2) {
            const double lam =
                kPi * kPi * (double(n1) * n1 / (r.a1 * r.a1) + double(n2) * n2 / (r.a2 * r.a2));
            if (lam <= cut) cand.push_back({lam, RectIndex{n1, n2}});
          }
        if (static_cast<int>(cand.size()) >= n) break;
        cut *= 2.0;
      }
      sort_and_trim(cand, n, spec);
      break;
    }
    case AmbientGeometry::Kind::unit_sphere: {
      int lmax = 0;
      while ((lmax + 1) * (lmax + 1) < n) ++lmax;
      std::vector<Candidate> cand;
      for (int l = 0; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m)
          cand.push_back({double(l) * (l + 1), SphereIndex{l, m}});
      sort_and_trim(cand, n, spec);
      break;
    }
    case AmbientGeometry::Kind::flat_torus: {
      const Eigen::Matrix2d& b = geometry.as_flat_torus().lattice_basis;
      const Eigen::Matrix2d inv_b = b.inverse();
      const double bnorm = spectral_norm_2x2(b);
      double cut = torus_eigenvalue(inv_b, 1, 1) * 4.0 + 1.0;
      std::vector<Candidate> cand;
      while (true) {
        cand.clear();
        cand.push_back({0.0, TorusIndex{0, 0, TorusParity::constant}});
        const int kmax = static_cast<int>(std::ceil(bnorm * std::sqrt(cut) / (2.0 * kPi))) + 1;
        for (int k1 = 0; k1 <= kmax; ++k1)
          for (int k2 = (k1 == 0 ? 1 : -kmax); k2 <= kmax; ++k2) {
            const double lam = torus_eigenvalue(inv_b, k1, k2);
            if (lam <= cut) {
              cand.push_back({lam, TorusIndex{k1, k2, TorusParity::cosine}});
              cand.push_back({lam, TorusIndex{k1, k2, TorusParity::sine}});
            }
          }
        if (static_cast<int>(cand.size()) >= n) break;
        cut *= 2.0;
      }
      sort_and_trim(cand, n, spec);
      break;
    }
  }
  return spec;
}

double basis_eigenvalue(const BasisSpec& spec, int i) {
  if (i < 0 || i >= spec.size()) throw std::out_of_range("basis_eigenvalue: index out of range");
  // recomputed from the index, so it cross-checks the stored spectrum
  switch (spec.geometry.kind()) {
    case AmbientGeometry::Kind::rectangle: {
      const auto& r = spec.geometry.as_rectangle();
      const auto& idx = std::get<RectIndex>(spec.indices[i]);
      return kPi * kPi *
             (double(idx.n1) * idx.n1 / (r.a1 * r.a1) + double(idx.n2) * idx.n2 / (r.a2 * r.a2));
    }
    case AmbientGeometry::Kind::unit_sphere: {
      const auto& idx = std::get<SphereIndex>(spec.indices[i]);
      return double(idx.l) * (idx.l + 1);
    }
    case AmbientGeometry::Kind::flat_torus: {
      const auto& idx = std::get<TorusIndex>(spec.indices[i]);
      const Eigen::Matrix2d inv_b = spec.geometry.as_flat_torus().lattice_basis.inverse();
      return torus_eigenvalue(inv_b, idx.k1, idx.k2);
    }
  }
  return 0.0;
}

// --- pointwise evaluation ---------------------------------------------------

namespace detail {

double normalized_legendre(int l, int m, double u) {
  // Stable three-term recurrence for Pbar_l^m with Condon-Shortley phase,
  // normalized so that the derived real spherical harmonics are orthonormal.
  const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
  double pmm = std::sqrt(1.0 / (4.0 * kPi));
  for (int k = 1; k <= m; ++k) pmm *= -su * std::sqrt((2.0 * k + 1.0) / (2.0 * k));
  if (l == m) return pmm;
  double p_prev = pmm;
  double p = u * std::sqrt(2.0 * m + 3.0) * pmm;
  for (int ll = m + 2; ll <= l; ++ll) {
    const double a = std::sqrt((4.0 * ll * ll - 1.0) / (double(ll) * ll - double(m) * m));
    const double c =
        std::sqrt(((double(ll - 1) * (ll - 1) - double(m) * m)) / (4.0 * double(ll - 1) * (ll - 1) - 1.0));
    const double p_next = a * (u * p - c * p_prev);
    p_prev = p;
    p = p_next;
  }
  return p;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0, dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (t * p0 - p1) / (t * t - 1.0);
      const double dt = -p0 / dp;
      t += dt;
      if (std::abs(dt) < 1e-15) break;
    }
    nodes[i] = t;
    weights[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace detail

namespace {

double eval_rect(const Rectangle& r, const RectIndex& idx, const Eigen::Vector2d& p) {
  const double norm = std::sqrt(4.0 / (r.a1 * r.a2));
  return norm * std::sin(idx.n1 * kPi * p.x() / r.a1) * std::sin(idx.n2 * kPi * p.y() / r.a2);
}

double eval_sphere(const SphereIndex& idx, const Eigen::Vector2d& p) {
  const double u = std::cos(p.x());
  if (idx.m == 0) return detail::normalized_legendre(idx.l, 0, u);
  const int am = std::abs(idx.m);
  const double pb = detail::normalized_legendre(idx.l, am, u);
  const double ang = (idx.m > 0) ? std::cos(am * p.y()) : std::sin(am * p.y());
  return std::sqrt(2.0) * pb * ang;
}

double eval_torus(const FlatTorus& t, const TorusIndex& idx, const Eigen::Vector2d& p) {
  const double inv_sqrt_cell = 1.0 / std::sqrt(std::abs(t.lattice_basis.determinant()));
  if (idx.parity == TorusParity::constant) return inv_sqrt_cell;
  const Eigen::Vector2d frac = t.lattice_basis.transpose().inverse() * p;
  const double angle = 2.0 * kPi * (idx.k1 * frac.x() + idx.k2 * frac.y());
  const double val = (idx.parity == TorusParity::cosine) ? std::cos(angle) : std::sin(angle);
  return std::sqrt(2.0) * inv_sqrt_cell * val;
}

}  // namespace

double basis_eval(const BasisSpec& spec, int i, const Eigen::Vector2d& point) {
  if (i < 0 || i >= spec.size()) throw std::out_of_range("basis_eval: index out of range");
  if (!spec.geometry.in_chart(point)) throw std::domain_error("basis_eval: point outside chart");
  switch (spec.geometry.kind()) {
    case AmbientGeometry::Kind::rectangle:
      return eval_rect(spec.geometry.as_rectangle(), std::get<RectIndex>(spec.indices[i]), point);
    case AmbientGeometry::Kind::unit_sphere:
      return eval_sphere(std::get<SphereIndex>(spec.indices[i]), point);
    case AmbientGeometry::Kind::flat_torus:
      return eval_torus(spec.geometry.as_flat_torus(), std::get<TorusIndex>(spec.indices[i]), point);
  }
  return 0.0;
}

// --- quadrature -------------------------------------------------------------

QuadratureGrid quadrature(const AmbientGeometry& geometry, std::array<int, 2> resolution) {
  if (resolution[0] < 2 || resolution[1] < 2)
    throw std::invalid_argument("quadrature: resolution components must be >= 2");
  QuadratureGrid grid{geometry, resolution, {}, {}};
  const int r1 = resolution[0];
  const int r2 = resolution[1];
  grid.nodes.reserve(static_cast<size_t>(r1) * r2);
  grid.weights.resize(static_cast<Eigen::Index>(r1) * r2);

  switch (geometry.kind()) {
    case AmbientGeometry::Kind::rectangle: {
      const auto& r = geometry.as_rectangle();
      const double h1 = r.a1 / r1, h2 = r.a2 / r2;
      Eigen::Index q = 0;
      for (int i = 0; i < r1; ++i)
        for (int j = 0; j < r2; ++j) {
          grid.nodes.emplace_back((i + 0.5) * h1, (j + 0.5) * h2);
          grid.weights[q++] = h1 * h2;
        }
      break;
    }
    case AmbientGeometry::Kind::unit_sphere: {
      std::vector<double> u, gw;
      detail::gauss_legendre(r1, u, gw);
      const double wphi = 2.0 * kPi / r2;
      Eigen::Index q = 0;
      for (int i = 0; i < r1; ++i) {
        const double theta = std::acos(std::clamp(u[i], -1.0, 1.0));
        for (int j = 0; j < r2; ++j) {
          grid.nodes.emplace_back(theta, 2.0 * kPi * j / r2);
          grid.weights[q++] = gw[i] * wphi;  // cos(theta) substitution absorbs sin(theta)
        }
      }
      break;
    }
    case AmbientGeometry::Kind::flat_torus: {
      const Eigen::Matrix2d bt = geometry.as_flat_torus().lattice_basis.transpose();
      const double w = std::abs(bt.determinant()) / (double(r1) * r2);
      Eigen::Index q = 0;
      for (int i = 0; i < r1; ++i)
        for (int j = 0; j < r2; ++j) {
          grid.nodes.emplace_back(bt * Eigen::Vector2d((i + 0.5) / r1, (j + 0.5) / r2));
          grid.weights[q++] = w;
        }
      break;
    }
  }
  return grid;
}

std::array<int, 2> default_resolution(const BasisSpec& spec) {
  constexpr int kFloor = 16;
  switch (spec.geometry.kind()) {
    case AmbientGeometry::Kind::rectangle: {
      int w1 = 1, w2 = 1;
      for (const auto& bi : spec.indices) {
        const auto& r = std::get<RectIndex>(bi);
        w1 = std::max(w1, r.n1);
        w2 = std::max(w2, r.n2);
      }
      return {std::max(kFloor, 4 * w1), std::max(kFloor, 4 * w2)};
    }
    case AmbientGeometry::Kind::unit_sphere: {
      int lmax = 0, mmax = 0;
      for (const auto& bi : spec.indices) {
        const auto& s = std::get<SphereIndex>(bi);
        lmax = std::max(lmax, s.l);
        mmax = std::max(mmax, std::abs(s.m));
      }
      // Gauss rule is exact for Legendre products once r1 > lmax; phi products
      // need r2 > 2*mmax to stay alias-free.
      return {std::max(kFloor, even_ceil(1.05 * (lmax + 1))),
              std::max(kFloor, even_ceil(2.1 * (mmax + 1)))};
    }
    case AmbientGeometry::Kind::flat_torus: {
      int w1 = 1, w2 = 1;
      for (const auto& bi : spec.indices) {
        const auto& t = std::get<TorusIndex>(bi);
        w1 = std::max(w1, 2 * std::abs(t.k1));
        w2 = std::max(w2, 2 * std::abs(t.k2));
      }
      return {std::max(kFloor, 4 * w1), std::max(kFloor, 4 * w2)};
    }
  }
  return {kFloor, kFloor};
}

// --- bulk evaluator ---------------------------------------------------------

BasisEvaluator::BasisEvaluator(const BasisSpec& spec) : spec_(spec) {
  switch (spec.geometry.kind()) {
    case AmbientGeometry::Kind::rectangle:
      for (const auto& bi : spec.indices) {
        const auto& r = std::get<RectIndex>(bi);
        max_n1_ = std::max(max_n1_, r.n1);
        max_n2_ = std::max(max_n2_, r.n2);
      }
      s1_.resize(max_n1_ + 1);
      s2_.resize(max_n2_ + 1);
      break;
    case AmbientGeometry::Kind::unit_sphere:
      for (const auto& bi : spec.indices) max_l_ = std::max(max_l_, std::get<SphereIndex>(bi).l);
      legendre_.assign(static_cast<size_t>(max_l_ + 1) * (max_l_ + 1), 0.0);
      cos_m_.resize(max_l_ + 1);
      sin_m_.resize(max_l_ + 1);
      break;
    case AmbientGeometry::Kind::flat_torus: {
      const auto& t = spec.geometry.as_flat_torus();
      cell_to_frac_ = t.lattice_basis.transpose().inverse();
      inv_sqrt_cell_ = 1.0 / std::sqrt(std::abs(t.lattice_basis.determinant()));
      for (const auto& bi : spec.indices) {
        const auto& ti = std::get<TorusIndex>(bi);
        max_k1_ = std::max(max_k1_, std::abs(ti.k1));
        max_k2_ = std::max(max_k2_, std::abs(ti.k2));
      }
      s1_.resize(2 * (max_k1_ + 1));  // interleaved cos/sin tables
      s2_.resize(2 * (max_k2_ + 1));
      break;
    }
  }
}

void BasisEvaluator::eval_all(const Eigen::Vector2d& point, std::span<double> out) const {
  const int n = spec_.size();
  switch (spec_.geometry.kind()) {
    case AmbientGeometry::Kind::rectangle: {
      const auto& r = spec_.geometry.as_rectangle();
      const double norm = std::sqrt(4.0 / (r.a1 * r.a2));
      for (int k = 1; k <= max_n1_; ++k) s1_[k] = std::sin(k * kPi * point.x() / r.a1);
      for (int k = 1; k <= max_n2_; ++k) s2_[k] = std::sin(k * kPi * point.y() / r.a2);
      for (int i = 0; i < n; ++i) {
        const auto& idx = std::get<RectIndex>(spec_.indices[i]);
        out[i] = norm * s1_[idx.n1] * s2_[idx.n2];
      }
      break;
    }
    case AmbientGeometry::Kind::unit_sphere: {
      const double u = std::cos(point.x());
      const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
      const int lw = max_l_ + 1;
      auto tab = [&](int m, int l) -> double& { return legendre_[size_t(m) * lw + l]; };
      tab(0, 0) = std::sqrt(1.0 / (4.0 * kPi));
      for (int m = 1; m <= max_l_; ++m)
        tab(m, m) = -tab(m - 1, m - 1) * su * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
      for (int m = 0; m < max_l_; ++m) tab(m, m + 1) = tab(m, m) * u * std::sqrt(2.0 * m + 3.0);
      for (int m = 0; m <= max_l_; ++m)
        for (int l = m + 2; l <= max_l_; ++l) {
          const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
          const double c = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                                     (4.0 * double(l - 1) * (l - 1) - 1.0));
          tab(m, l) = a * (u * tab(m, l - 1) - c * tab(m, l - 2));
        }
      for (int m = 0; m <= max_l_; ++m) {
        cos_m_[m] = std::cos(m * point.y());
        sin_m_[m] = std::sin(m * point.y());
      }
      const double rt2 = std::sqrt(2.0);
      for (int i = 0; i < n; ++i) {
        const auto& idx = std::get<SphereIndex>(spec_.indices[i]);
        if (idx.m == 0)
          out[i] = tab(0, idx.l);
        else if (idx.m > 0)
          out[i] = rt2 * tab(idx.m, idx.l) * cos_m_[idx.m];
        else
          out[i] = rt2 * tab(-idx.m, idx.l) * sin_m_[-idx.m];
      }
      break;
    }
    case AmbientGeometry::Kind::flat_torus: {
      const Eigen::Vector2d frac = cell_to_frac_ * point;
      auto fill = [](std::vector<double>& table, int kmax, double t) {
        const double c = std::cos(2.0 * kPi * t), s = std::sin(2.0 * kPi * t);
        table[0] = 1.0;
        table[1] = 0.0;
        for (int k = 1; k <= kmax; ++k) {
          table[2 * k] = table[2 * k - 2] * c - table[2 * k - 1] * s;
          table[2 * k + 1] = table[2 * k - 2] * s + table[2 * k - 1] * c;
        }
      };
      fill(s1_, max_k1_, frac.x());
      fill(s2_, max_k2_, frac.y());
      const double rt2 = std::sqrt(2.0) * inv_sqrt_cell_;
      for (int i = 0; i < n; ++i) {
        const auto& idx = std::get<TorusIndex>(spec_.indices[i]);
        if (idx.parity == TorusParity::constant) {
          out[i] = inv_sqrt_cell_;
          continue;
        }
        const int ak1 = std::abs(idx.k1);
        const double c1 = s1_[2 * ak1];
        const double sn1 = (idx.k1 >= 0) ? s1_[2 * ak1 + 1] : -s1_[2 * ak1 + 1];
        const int ak2 = std::abs(idx.k2);
        const double c2 = s2_[2 * ak2];
        const double sn2 = (idx.k2 >= 0) ? s2_[2 * ak2 + 1] : -s2_[2 * ak2 + 1];
        // cos/sin(2 pi (k1 t1 + k2 t2)) by angle addition
        if (idx.parity == TorusParity::cosine)
          out[i] = rt2 * (c1 * c2 - sn1 * sn2);
        else
          out[i] = rt2 * (sn1 * c2 + c1 * sn2);
      }
      break;
    }
  }
}

}  // namespace beltrami
