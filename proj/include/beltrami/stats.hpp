// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace beltrami::stats {

/// Nearest-neighbour spacings of an ascending spectrum, normalized to unit
/// mean. The raw gap count feeding the sample is `source_count`.
struct SpacingSample {
  std::vector<double> spacings;
  int source_count = 0;
};

struct SpacingOptions {
  /// Merge degenerate clusters (gaps below 1e-8 of the mean gap count once)
  /// before taking spacings. Off by default: the usual remedy for symmetry
  /// degeneracies is desymmetrizing the domain, not filtering.
  bool drop_degenerate = false;
  /// Optional local-window unfolding: each gap is divided by the mean gap in
  /// a window of this many neighbours before the global normalization.
  /// 0 disables (plain mean normalization).
  int unfold_window = 0;
};

/// First n spacings s_i = (lambda_{i+1} - lambda_i) / mean. Requires an
/// ascending list with at least n + 1 entries (after any degeneracy merge).
SpacingSample spacings(std::span<const double> eigenvalues, int n, const SpacingOptions& = {});

// Reference spacing laws (unit mean).
double poisson_pdf(double s);  // e^{-s}
double goe_pdf(double s);      // (pi/2) s e^{-pi s^2 / 4}
double poisson_cdf(double s);
double goe_cdf(double s);

/// Kolmogorov-Smirnov distance between the sample and a reference CDF:
/// sup over the sorted sample of |empirical CDF - reference CDF|, both sides
/// of each jump.
double ks_distance(const SpacingSample& sample, const std::function<double(double)>& cdf);

struct HistogramBin {
  double left = 0.0, right = 0.0;
  double density = 0.0;  // count / (total * width); bin areas sum to the
                         // fraction of the sample below max_s
};

std::vector<HistogramBin> histogram(const SpacingSample& sample, double bin_width, double max_s);

enum class SpectrumClass { poisson_like, goe_like, inconclusive };

struct Classification {
  SpectrumClass label = SpectrumClass::inconclusive;
  double d_poisson = 0.0;
  double d_goe = 0.0;
};

/// Label by the smaller KS distance; inconclusive when the two distances
/// differ by less than 0.02 (heuristic threshold).
Classification classify(const SpacingSample& sample);

const char* to_string(SpectrumClass c);

}  // namespace beltrami::stats
