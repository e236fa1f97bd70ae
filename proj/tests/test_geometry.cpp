// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "beltrami/geometry.hpp"

using namespace beltrami;

namespace {

const double PI2 = kPi * kPi;

Eigen::Matrix2d mat2(double a, double b, double c, double d) {
  Eigen::Matrix2d m;
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("enumerate_basis picks the smallest analytic eigenvalues") {
  SUBCASE("rectangle (2,2), first mode") {
    const auto spec = enumerate_basis(AmbientGeometry::rectangle(2, 2), 1);
    const auto& idx = std::get<RectIndex>(spec.indices[0]);
    CHECK(idx.n1 == 1);
    CHECK(idx.n2 == 1);
    // -Laplace applied to sin(pi x/2) sin(pi y/2) gives pi^2/2
    CHECK(spec.eigenvalues[0] == doctest::Approx(PI2 / 2).epsilon(1e-14));
  }
  SUBCASE("sphere, first mode is the constant") {
    const auto spec = enumerate_basis(AmbientGeometry::unit_sphere(), 1);
    const auto& idx = std::get<SphereIndex>(spec.indices[0]);
    CHECK(idx.l == 0);
    CHECK(idx.m == 0);
    CHECK(spec.eigenvalues[0] == 0.0);
  }
  SUBCASE("unit torus, constant plus the four |w| = 1 modes") {
    const auto spec = enumerate_basis(AmbientGeometry::flat_torus(Eigen::Matrix2d::Identity()), 5);
    CHECK(spec.eigenvalues[0] == 0.0);
    for (int i = 1; i < 5; ++i)
      CHECK(spec.eigenvalues[i] == doctest::Approx(4 * PI2).epsilon(1e-14));
  }
  SUBCASE("n = 0 rejected") {
    CHECK_THROWS_AS(enumerate_basis(AmbientGeometry::unit_sphere(), 0), std::invalid_argument);
  }
}

TEST_CASE("enumerate_basis tie-break is lexicographic") {
  const auto sph = enumerate_basis(AmbientGeometry::unit_sphere(), 4);
  CHECK(std::get<SphereIndex>(sph.indices[1]) == SphereIndex{1, -1});
  CHECK(std::get<SphereIndex>(sph.indices[2]) == SphereIndex{1, 0});
  CHECK(std::get<SphereIndex>(sph.indices[3]) == SphereIndex{1, 1});

  const auto tor = enumerate_basis(AmbientGeometry::flat_torus(Eigen::Matrix2d::Identity()), 5);
  CHECK(std::get<TorusIndex>(tor.indices[1]) == TorusIndex{0, 1, TorusParity::cosine});
  CHECK(std::get<TorusIndex>(tor.indices[2]) == TorusIndex{0, 1, TorusParity::sine});
  CHECK(std::get<TorusIndex>(tor.indices[3]) == TorusIndex{1, 0, TorusParity::cosine});
  CHECK(std::get<TorusIndex>(tor.indices[4]) == TorusIndex{1, 0, TorusParity::sine});
}

TEST_CASE("enumerate_basis ordering and uniqueness up to N = 200") {
  const std::vector<AmbientGeometry> geoms = {
      AmbientGeometry::rectangle(2, 2), AmbientGeometry::rectangle(1.0, 0.61803398874989484),
      AmbientGeometry::unit_sphere(), AmbientGeometry::flat_torus(mat2(1, 0, 0.3, 1.4))};
  for (const auto& g : geoms) {
    for (int n : {1, 7, 50, 200}) {
      const auto spec = enumerate_basis(g, n);
      REQUIRE(spec.size() == n);
      for (int i = 1; i < n; ++i) CHECK(spec.eigenvalues[i] >= spec.eigenvalues[i - 1]);
      std::set<std::string> seen;
      for (const auto& bi : spec.indices) {
        std::string key;
        std::visit(
            [&](const auto& v) {
              if constexpr (std::is_same_v<std::decay_t<decltype(v)>, RectIndex>)
                key = std::to_string(v.n1) + "," + std::to_string(v.n2);
              else if constexpr (std::is_same_v<std::decay_t<decltype(v)>, SphereIndex>)
                key = std::to_string(v.l) + "," + std::to_string(v.m);
              else
                key = std::to_string(v.k1) + "," + std::to_string(v.k2) + "," +
                      std::to_string(static_cast<int>(v.parity));
            },
            bi);
        CHECK(seen.insert(key).second);
      }
    }
  }
}

TEST_CASE("basis_eigenvalue matches the analytic formulas") {
  {
    auto spec = enumerate_basis(AmbientGeometry::unit_sphere(), 9);
    for (int i = 0; i < spec.size(); ++i)
      if (std::get<SphereIndex>(spec.indices[i]) == SphereIndex{2, -1})
        CHECK(basis_eigenvalue(spec, i) == doctest::Approx(6.0).epsilon(1e-14));
  }
  {
    auto spec = enumerate_basis(AmbientGeometry::rectangle(2, 2), 8);
    for (int i = 0; i < spec.size(); ++i)
      if (std::get<RectIndex>(spec.indices[i]) == RectIndex{2, 1})
        CHECK(basis_eigenvalue(spec, i) == doctest::Approx(5 * PI2 / 4).epsilon(1e-14));
  }
  {
    // B = diag(1,2): dual vector for tag (0,1) is (0, 1/2), eigenvalue pi^2
    auto spec = enumerate_basis(AmbientGeometry::flat_torus(mat2(1, 0, 0, 2)), 8);
    for (int i = 0; i < spec.size(); ++i) {
      const auto& t = std::get<TorusIndex>(spec.indices[i]);
      if (t.k1 == 0 && t.k2 == 1 && t.parity == TorusParity::cosine)
        CHECK(basis_eigenvalue(spec, i) == doctest::Approx(PI2).epsilon(1e-14));
    }
  }
  {
    auto spec = enumerate_basis(AmbientGeometry::unit_sphere(), 4);
    CHECK_THROWS_AS(basis_eigenvalue(spec, 4), std::out_of_range);
  }
}

TEST_CASE("stored eigenvalues agree with per-index recomputation") {
  const std::vector<AmbientGeometry> geoms = {AmbientGeometry::rectangle(1.7, 0.9),
                                              AmbientGeometry::unit_sphere(),
                                              AmbientGeometry::flat_torus(mat2(1, 0, 0.5, 2))};
  for (const auto& g : geoms) {
    const auto spec = enumerate_basis(g, 80);
    for (int i = 0; i < spec.size(); ++i)
      CHECK(spec.eigenvalues[i] == doctest::Approx(basis_eigenvalue(spec, i)).epsilon(1e-14));
  }
}

TEST_CASE("basis_eval values and chart validation") {
  {
    const auto spec = enumerate_basis(AmbientGeometry::rectangle(2, 2), 1);
    CHECK(basis_eval(spec, 0, {1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(basis_eval(spec, 0, {2.5, 1.0}), std::domain_error);
    CHECK_THROWS_AS(basis_eval(spec, 0, {-0.1, 1.0}), std::domain_error);
  }
  {
    const auto spec = enumerate_basis(AmbientGeometry::unit_sphere(), 1);
    CHECK(basis_eval(spec, 0, {0.7, 1.3}) ==
          doctest::Approx(1.0 / std::sqrt(4 * kPi)).epsilon(1e-14));
    CHECK_THROWS_AS(basis_eval(spec, 0, {3.5, 0.0}), std::domain_error);
  }
  {
    const auto spec = enumerate_basis(AmbientGeometry::flat_torus(Eigen::Matrix2d::Identity()), 1);
    CHECK(basis_eval(spec, 0, {0.25, 0.75}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(basis_eval(spec, 0, {1.25, 0.0}), std::domain_error);
  }
}

TEST_CASE("low-order spherical harmonics match their closed forms") {
  const auto spec = enumerate_basis(AmbientGeometry::unit_sphere(), 9);
  const double theta = 0.8, phi = 2.3;
  auto value_of = [&](int l, int m) {
    for (int i = 0; i < spec.size(); ++i)
      if (std::get<SphereIndex>(spec.indices[i]) == SphereIndex{l, m})
        return basis_eval(spec, i, {theta, phi});
    REQUIRE(false);
    return 0.0;
  };
  const double st = std::sin(theta), ct = std::cos(theta);
  CHECK(value_of(1, 0) == doctest::Approx(std::sqrt(3 / (4 * kPi)) * ct).epsilon(1e-13));
  // Condon-Shortley phase: the |m| = 1 pair carries a minus sign
  CHECK(value_of(1, 1) ==
        doctest::Approx(-std::sqrt(3 / (4 * kPi)) * st * std::cos(phi)).epsilon(1e-13));
  CHECK(value_of(1, -1) ==
        doctest::Approx(-std::sqrt(3 / (4 * kPi)) * st * std::sin(phi)).epsilon(1e-13));
  CHECK(value_of(2, 0) ==
        doctest::Approx(std::sqrt(5 / (16 * kPi)) * (3 * ct * ct - 1)).epsilon(1e-13));
  CHECK(value_of(2, 2) ==
        doctest::Approx(std::sqrt(15 / (16 * kPi)) * st * st * std::cos(2 * phi)).epsilon(1e-13));
}

TEST_CASE("bulk evaluator agrees with basis_eval") {
  std::mt19937 rng(7);
  const std::vector<AmbientGeometry> geoms = {AmbientGeometry::rectangle(2, 1.5),
                                              AmbientGeometry::unit_sphere(),
                                              AmbientGeometry::flat_torus(mat2(1, 0, 0.4, 1.2))};
  for (const auto& g : geoms) {
    const auto spec = enumerate_basis(g, 40);
    BasisEvaluator eval(spec);
    std::vector<double> buf(40);
    std::uniform_real_distribution<double> u01(0.05, 0.95);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::Vector2d p;
      switch (g.kind()) {
        case AmbientGeometry::Kind::rectangle:
          p = {u01(rng) * g.as_rectangle().a1, u01(rng) * g.as_rectangle().a2};
          break;
        case AmbientGeometry::Kind::unit_sphere:
          p = {u01(rng) * kPi, u01(rng) * 2 * kPi};
          break;
        case AmbientGeometry::Kind::flat_torus:
          p = g.as_flat_torus().lattice_basis.transpose() * Eigen::Vector2d(u01(rng), u01(rng));
          break;
      }
      eval.eval_all(p, buf);
      for (int i = 0; i < 40; ++i)
        CHECK(buf[i] == doctest::Approx(basis_eval(spec, i, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("quadrature weights integrate constants exactly") {
  {
    const auto grid = quadrature(AmbientGeometry::unit_sphere(), {32, 64});
    CHECK(grid.weights.sum() == doctest::Approx(4 * kPi).epsilon(1e-10));
    CHECK(grid.weights.minCoeff() > 0.0);
  }
  {
    const auto g = AmbientGeometry::rectangle(2, 2);
    const auto grid = quadrature(g, {100, 100});
    CHECK(grid.weights.sum() == doctest::Approx(4.0).epsilon(1e-12));
    // orthonormality integral of phi_(1,1); closed form is exactly 1
    const auto spec = enumerate_basis(g, 1);
    double acc = 0;
    for (size_t q = 0; q < grid.nodes.size(); ++q) {
      const double v = basis_eval(spec, 0, grid.nodes[q]);
      acc += grid.weights[q] * v * v;
    }
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-4));
  }
  {
    const auto g = AmbientGeometry::flat_torus(Eigen::Matrix2d::Identity());
    const auto grid = quadrature(g, {64, 64});
    CHECK(grid.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
    const auto spec = enumerate_basis(g, 5);
    // cosine and sine modes of the same dual vector are discretely orthogonal
    double acc = 0;
    for (size_t q = 0; q < grid.nodes.size(); ++q)
      acc += grid.weights[q] * basis_eval(spec, 1, grid.nodes[q]) *
             basis_eval(spec, 2, grid.nodes[q]);
    CHECK(std::abs(acc) < 1e-12);
  }
  CHECK_THROWS_AS(quadrature(AmbientGeometry::unit_sphere(), {1, 10}), std::invalid_argument);
}

TEST_CASE("Gram matrices are close to identity at default resolution") {
  const std::vector<AmbientGeometry> geoms = {AmbientGeometry::rectangle(2, 2),
                                              AmbientGeometry::rectangle(1.0, 2.7),
                                              AmbientGeometry::unit_sphere(),
                                              AmbientGeometry::flat_torus(mat2(1, 0, 0.2, 0.9))};
  for (const auto& g : geoms) {
    const int n = 25;
    const auto spec = enumerate_basis(g, n);
    const auto grid = quadrature(g, default_resolution(spec));
    BasisEvaluator eval(spec);
    std::vector<double> buf(n);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    for (size_t q = 0; q < grid.nodes.size(); ++q) {
      eval.eval_all(grid.nodes[q], buf);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) gram(i, j) += grid.weights[q] * buf[i] * buf[j];
    }
    double worst = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        worst = std::max(worst, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("basis functions satisfy the eigenfunction equation (FD stencil, second order)") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  auto stencil = [](const AmbientGeometry& g, const BasisSpec& spec, int i,
                    const Eigen::Vector2d& p, double h) {
    auto f = [&](double x, double y) {
      return basis_eval(spec, i, g.wrap(Eigen::Vector2d(x, y)));
    };
    const double fc = f(p.x(), p.y());
    const double fxx = (f(p.x() + h, p.y()) - 2 * fc + f(p.x() - h, p.y())) / (h * h);
    const double fyy = (f(p.x(), p.y() + h) - 2 * fc + f(p.x(), p.y() - h)) / (h * h);
    if (g.kind() == AmbientGeometry::Kind::unit_sphere) {
      const double ft = (f(p.x() + h, p.y()) - f(p.x() - h, p.y())) / (2 * h);
      const double st = std::sin(p.x());
      return fxx + ft * std::cos(p.x()) / st + fyy / (st * st);
    }
    return fxx + fyy;
  };

  const std::vector<AmbientGeometry> geoms = {AmbientGeometry::rectangle(2, 2),
                                              AmbientGeometry::unit_sphere(),
                                              AmbientGeometry::flat_torus(mat2(1, 0, 0, 1))};
  for (const auto& g : geoms) {
    const auto spec = enumerate_basis(g, 60);
    for (int rep = 0; rep < 10; ++rep) {
      const int i = static_cast<int>(u01(rng) * 60);
      const double lam = spec.eigenvalues[i];
      for (int pt = 0; pt < 2; ++pt) {
        Eigen::Vector2d p;
        switch (g.kind()) {
          case AmbientGeometry::Kind::rectangle:
            p = {0.1 + 1.8 * u01(rng), 0.1 + 1.8 * u01(rng)};
            break;
          case AmbientGeometry::Kind::unit_sphere:
            p = {0.4 + (kPi - 0.8) * u01(rng), 0.4 + (2 * kPi - 0.8) * u01(rng)};
            break;
          case AmbientGeometry::Kind::flat_torus:
            p = {u01(rng), u01(rng)};
            break;
        }
        const double target = -lam * basis_eval(spec, i, p);
        const double h1 = 1e-3, h2 = 5e-4;
        const double e1 = std::abs(stencil(g, spec, i, p, h1) - target);
        const double e2 = std::abs(stencil(g, spec, i, p, h2) - target);
        // second-order decay, with a small floor for round-off
        const double floor = 1e-6 * (1.0 + std::abs(target));
        CHECK(e2 <= e1 / 2.5 + floor);
      }
    }
  }
}

TEST_CASE("default resolution follows the per-axis half-wavelength rule") {
  const auto spec = enumerate_basis(AmbientGeometry::rectangle(2, 2), 225);
  const auto res = default_resolution(spec);
  CHECK(res[0] == 68);  // 4 nodes per half-wavelength, max index 17
  CHECK(res[1] == 68);
  const auto small = enumerate_basis(AmbientGeometry::rectangle(1, 1), 1);
  CHECK(default_resolution(small)[0] == 16);  // floor
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(AmbientGeometry::rectangle(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(AmbientGeometry::rectangle(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(AmbientGeometry::flat_torus(mat2(1, 2, 2, 4)), std::invalid_argument);
  CHECK(AmbientGeometry::rectangle(2, 2).area() == doctest::Approx(4.0));
  CHECK(AmbientGeometry::unit_sphere().area() == doctest::Approx(4 * kPi));
  CHECK(AmbientGeometry::flat_torus(mat2(1, 0, 0, 2)).area() == doctest::Approx(2.0));
}
