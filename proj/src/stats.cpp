// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#include "beltrami/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "beltrami/geometry.hpp"  // kPi

namespace beltrami::stats {

SpacingSample spacings(std::span<const double> eigenvalues, int n, const SpacingOptions& options) {
  if (n < 1) throw std::invalid_argument("spacings: need n >= 1");
  for (size_t i = 1; i < eigenvalues.size(); ++i)
    if (eigenvalues[i] < eigenvalues[i - 1])
      throw std::invalid_argument("spacings: eigenvalue list must be ascending");

  std::vector<double> levels(eigenvalues.begin(), eigenvalues.end());
  if (options.drop_degenerate && levels.size() > 1) {
    // merge clusters closer than 1e-8 of the mean gap into one level
    const double span = levels.back() - levels.front();
    const double tol = 1e-8 * span / static_cast<double>(levels.size() - 1);
    std::vector<double> merged{levels.front()};
    for (double v : levels)
      if (v - merged.back() > tol) merged.push_back(v);
    levels = std::move(merged);
  }
  if (static_cast<int>(levels.size()) < n + 1)
    throw std::invalid_argument("spacings: too few eigenvalues for the requested gap count");

  std::vector<double> gaps(n);
  for (int i = 0; i < n; ++i) gaps[i] = levels[i + 1] - levels[i];

  if (options.unfold_window > 0) {
    const int w = options.unfold_window;
    std::vector<double> unfolded(n);
    for (int i = 0; i < n; ++i) {
      const int lo = std::max(0, i - w);
      const int hi = std::min(n - 1, i + w);
      const double local =
          std::accumulate(gaps.begin() + lo, gaps.begin() + hi + 1, 0.0) / (hi - lo + 1);
      unfolded[i] = local > 0.0 ? gaps[i] / local : 0.0;
    }
    gaps = std::move(unfolded);
  }

  const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / n;
  if (!(mean > 0.0)) throw std::invalid_argument("spacings: degenerate spectrum, mean gap is zero");
  for (double& g : gaps) g /= mean;
  return {std::move(gaps), n};
}

double poisson_pdf(double s) {
  if (s < 0.0) throw std::invalid_argument("poisson_pdf: s must be nonnegative");
  return std::exp(-s);
}

double goe_pdf(double s) {
  if (s < 0.0) throw std::invalid_argument("goe_pdf: s must be nonnegative");
  return 0.5 * kPi * s * std::exp(-kPi * s * s / 4.0);
}

double poisson_cdf(double s) {
  if (s < 0.0) throw std::invalid_argument("poisson_cdf: s must be nonnegative");
  return 1.0 - std::exp(-s);
}

double goe_cdf(double s) {
  if (s < 0.0) throw std::invalid_argument("goe_cdf: s must be nonnegative");
  return 1.0 - std::exp(-kPi * s * s / 4.0);
}

double ks_distance(const SpacingSample& sample, const std::function<double(double)>& cdf) {
  if (sample.spacings.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::vector<double> sorted = sample.spacings;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

std::vector<HistogramBin> histogram(const SpacingSample& sample, double bin_width, double max_s) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("histogram: bin width must be positive");
  if (!(max_s > 0.0)) throw std::invalid_argument("histogram: max_s must be positive");
  const int bins = static_cast<int>(std::ceil(max_s / bin_width - 1e-12));
  std::vector<HistogramBin> out(bins);
  for (int b = 0; b < bins; ++b) {
    out[b].left = b * bin_width;
    out[b].right = (b + 1) * bin_width;
  }
  const double total = static_cast<double>(sample.spacings.size());
  for (double s : sample.spacings) {
    const int b = static_cast<int>(std::floor(s / bin_width));
    if (b >= 0 && b < bins) out[b].density += 1.0;
  }
  for (auto& bin : out) bin.density /= total * bin_width;
  return out;
}

Classification classify(const SpacingSample& sample) {
  Classification c;
  c.d_poisson = ks_distance(sample, [](double s) { return poisson_cdf(s); });
  c.d_goe = ks_distance(sample, [](double s) { return goe_cdf(s); });
  if (std::abs(c.d_poisson - c.d_goe) < 0.02)
    c.label = SpectrumClass::inconclusive;
  else
    c.label = c.d_poisson < c.d_goe ? SpectrumClass::poisson_like : SpectrumClass::goe_like;
  return c;
}

const char* to_string(SpectrumClass c) {
  switch (c) {
    case SpectrumClass::poisson_like:
      return "poisson_like";
    case SpectrumClass::goe_like:
      return "goe_like";
    case SpectrumClass::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace beltrami::stats
