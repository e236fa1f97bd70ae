// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "beltrami/geometry.hpp"
#include "beltrami/reference.hpp"
#include "beltrami/stats.hpp"

using namespace beltrami;
using namespace beltrami::stats;

namespace {

/// Seeded levels with i.i.d. gaps drawn by inverse CDF.
std::vector<double> synthetic_levels(int gaps, unsigned seed, bool wigner) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> levels{0.0};
  for (int i = 0; i < gaps; ++i) {
    const double u = u01(rng);
    const double s = wigner ? std::sqrt(-(4.0 / kPi) * std::log1p(-u)) : -std::log1p(-u);
    levels.push_back(levels.back() + s);
  }
  return levels;
}

}  // namespace

TEST_CASE("spacings: normalization and validation") {
  {
    const std::vector<double> ev{1, 2, 3, 4};
    const auto s = spacings(ev, 3);
    CHECK(s.spacings == std::vector<double>{1, 1, 1});
    CHECK(s.source_count == 3);
  }
  {
    const std::vector<double> ev{0, 1, 3};
    const auto s = spacings(ev, 2);
    CHECK(s.spacings[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(s.spacings[1] == doctest::Approx(4.0 / 3).epsilon(1e-15));
  }
  {
    const std::vector<double> ev{0, 1};
    CHECK_THROWS_AS(spacings(ev, 2), std::invalid_argument);
    const std::vector<double> bad{1, 0.5};
    CHECK_THROWS_AS(spacings(bad, 1), std::invalid_argument);
  }
  {
    // mean is one to near machine precision
    const auto levels = synthetic_levels(500, 77, false);
    const auto s = spacings(levels, 500);
    const double mean = std::accumulate(s.spacings.begin(), s.spacings.end(), 0.0) / 500;
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-10));
    for (double v : s.spacings) CHECK(v >= 0.0);
  }
}

TEST_CASE("spacings are scale invariant") {
  const auto levels = synthetic_levels(100, 5, false);
  std::vector<double> scaled = levels;
  for (double& v : scaled) v *= 17.25;
  const auto a = spacings(levels, 100);
  const auto b = spacings(scaled, 100);
  for (int i = 0; i < 100; ++i)
    CHECK(a.spacings[i] == doctest::Approx(b.spacings[i]).epsilon(1e-12));
}

TEST_CASE("degenerate clusters merge only when requested") {
  const std::vector<double> ev{0.0, 1.0, 1.0, 1.0 + 1e-12, 2.0, 3.5};
  const auto kept = spacings(ev, 5);
  CHECK(kept.spacings.size() == 5);
  SpacingOptions drop;
  drop.drop_degenerate = true;
  const auto merged = spacings(ev, 3, drop);  // levels collapse to 0, 1, 2, 3.5
  CHECK(merged.spacings.size() == 3);
  // merged raw gaps (1, 1, 1.5) normalized by mean 7/6
  CHECK(merged.spacings[0] == doctest::Approx(6.0 / 7).epsilon(1e-12));
  CHECK(merged.spacings[2] == doctest::Approx(9.0 / 7).epsilon(1e-12));
}

TEST_CASE("local unfolding flattens a linear trend") {
  // gaps grow linearly; plain normalization leaves a trend, a local window
  // removes most of it
  std::vector<double> levels{0.0};
  for (int i = 1; i <= 400; ++i) levels.push_back(levels.back() + i);
  SpacingOptions unfold;
  unfold.unfold_window = 10;
  const auto s = spacings(levels, 400, unfold);
  const auto plain = spacings(levels, 400);
  auto spread = [](const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
  };
  CHECK(spread(s.spacings) < 0.5 * spread(plain.spacings));
}

TEST_CASE("reference densities") {
  CHECK(poisson_pdf(0.0) == 1.0);
  CHECK(goe_pdf(0.0) == 0.0);
  CHECK_THROWS_AS(poisson_pdf(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(goe_cdf(-1e-9), std::invalid_argument);

  // argmax of the Wigner surmise at sqrt(2/pi)
  const double peak = std::sqrt(2.0 / kPi);
  CHECK(goe_pdf(peak) > goe_pdf(peak - 1e-4));
  CHECK(goe_pdf(peak) > goe_pdf(peak + 1e-4));

  // normalization and unit mean by Simpson quadrature
  const int m = 20000;
  const double hi = 20.0, h = hi / m;
  double mass = 0, mean = 0;
  for (int i = 0; i <= m; ++i) {
    const double s = i * h;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    mass += w * goe_pdf(s);
    mean += w * s * goe_pdf(s);
  }
  mass *= h / 3;
  mean *= h / 3;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mean == doctest::Approx(1.0).epsilon(1e-6));

  // CDFs are the stated closed forms
  CHECK(poisson_cdf(0.7) == doctest::Approx(1 - std::exp(-0.7)).epsilon(1e-15));
  CHECK(goe_cdf(0.7) == doctest::Approx(1 - std::exp(-kPi * 0.49 / 4)).epsilon(1e-15));
}

TEST_CASE("ks distance: constructed cases") {
  {
    // sample at the reference quantiles: distance is 1/(2n) exactly
    const int n = 50;
    std::vector<double> q;
    for (int i = 0; i < n; ++i) q.push_back(-std::log(1.0 - (i + 0.5) / n));
    const SpacingSample sample{q, n};
    CHECK(ks_distance(sample, [](double s) { return poisson_cdf(s); }) <=
          1.0 / (2 * n) + 1e-12);
  }
  {
    const SpacingSample ones{{1.0, 1.0, 1.0}, 3};
    const double d = ks_distance(ones, [](double s) { return poisson_cdf(s); });
    CHECK(d == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-12));
  }
  {
    // permutation invariance
    const auto levels = synthetic_levels(200, 3, true);
    auto s = spacings(levels, 200);
    const double d1 = ks_distance(s, [](double x) { return goe_cdf(x); });
    std::mt19937 rng(8);
    std::shuffle(s.spacings.begin(), s.spacings.end(), rng);
    const double d2 = ks_distance(s, [](double x) { return goe_cdf(x); });
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-15));
  }
  CHECK_THROWS_AS(ks_distance(SpacingSample{}, [](double) { return 0.0; }),
                  std::invalid_argument);
}

TEST_CASE("seeded exponential sample passes the Poisson gate and fails the GOE one") {
  const auto levels = synthetic_levels(2000, 20240501, false);
  const auto s = spacings(levels, 2000);
  const double dp = ks_distance(s, [](double x) { return poisson_cdf(x); });
  const double dg = ks_distance(s, [](double x) { return goe_cdf(x); });
  CHECK(dp < 0.04);
  CHECK(dg > 0.1);
}

TEST_CASE("histogram densities") {
  {
    const SpacingSample ones{{1.0, 1.0, 1.0, 1.0}, 4};
    const auto bins = histogram(ones, 0.5, 4.0);
    REQUIRE(bins.size() == 8);
    CHECK(bins[2].density == doctest::Approx(1.0 / 0.5));  // all mass in [1, 1.5)
    for (size_t b = 0; b < bins.size(); ++b)
      if (b != 2) CHECK(bins[b].density == 0.0);
    double area = 0;
    for (const auto& bin : bins) area += bin.density * (bin.right - bin.left);
    CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    const auto levels = synthetic_levels(2000, 99, false);
    const auto s = spacings(levels, 2000);
    const double w = 0.25;
    const auto bins = histogram(s, w, 4.0);
    const double expected = (1 - std::exp(-w)) / w;
    CHECK(bins[0].density == doctest::Approx(expected).epsilon(0.12));
  }
  CHECK_THROWS_AS(histogram(SpacingSample{{1.0}, 1}, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("classification of seeded samples") {
  {
    const auto s = spacings(synthetic_levels(400, 17, false), 400);
    const auto c = classify(s);
    CHECK(c.label == SpectrumClass::poisson_like);
    CHECK(c.d_poisson < c.d_goe);
  }
  {
    const auto s = spacings(synthetic_levels(400, 17, true), 400);
    const auto c = classify(s);
    CHECK(c.label == SpectrumClass::goe_like);
  }
  {
    // tiny sample with nearly equal distances to the two references
    const SpacingSample tiny{{0.02, 1.98}, 2};
    const auto c = classify(tiny);
    CHECK(std::abs(c.d_poisson - c.d_goe) < 0.02);
    CHECK(c.label == SpectrumClass::inconclusive);
  }
}

TEST_CASE("integrable box spectrum has Poisson-like spacings") {
  // golden-ratio aspect keeps the two frequency ladders incommensurate
  const double aspect = 0.6180339887498949;
  const auto ev = reference::box_spectrum(1.0, aspect, 501);
  const auto s = spacings(ev, 500);
  const auto c = classify(s);
  CHECK(c.label == SpectrumClass::poisson_like);
  CHECK(c.d_poisson < 0.06);
}

TEST_CASE("analytic triangle spacings: exact degeneracies defeat the KS decision") {
  // With multiplicities kept, half the gaps vanish and both KS distances
  // equal the zero-gap fraction, so the rule is inconclusive by construction.
  // Dropping the degeneracies leaves the rigid gaps of an integer quadratic
  // form, which mimic level repulsion. The billiard heuristic therefore runs
  // on the computed (numerically split) spectrum; see the acceptance suite.
  std::vector<double> expanded;
  for (const auto& line : reference::triangle_spectrum(200))
    for (int i = 0; i < line.multiplicity; ++i) expanded.push_back(line.eigenvalue);
  expanded.resize(151);
  const auto kept = classify(spacings(expanded, 150));
  CHECK(kept.label == SpectrumClass::inconclusive);
  CHECK(kept.d_poisson == doctest::Approx(kept.d_goe).epsilon(1e-9));
}
