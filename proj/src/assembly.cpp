// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#include "beltrami/assembly.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace beltrami {

namespace {

int resolve_threads(const AssemblyOptions& options) {
  if (options.deterministic) return 1;
  int n = options.threads;
  if (n <= 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("BELTRAMI_THREADS")) {
      const int c = std::atoi(cap);
      if (c > 0) n = std::min(n, c);
    }
  }
  return std::max(1, n);
}

/// Indices of quadrature nodes lying in S \ Omega.
std::vector<int> complement_nodes(const Region& region, const QuadratureGrid& grid) {
  std::vector<int> idx;
  for (int q = 0; q < static_cast<int>(grid.nodes.size()); ++q)
    if (!region.contains(grid.geometry, grid.nodes[q])) idx.push_back(q);
  return idx;
}

/// Fills column c of phi with sqrt(w_q) * phi_i(x_q) for one chunk of nodes.
void fill_chunk(const BasisSpec& spec, const QuadratureGrid& grid, std::span<const int> nodes,
                Eigen::Ref<Eigen::MatrixXd> phi, int threads) {
  const int n = spec.size();
  const int cols = static_cast<int>(nodes.size());
  auto worker = [&](int t, int nt) {
    BasisEvaluator eval(spec);
    std::vector<double> buf(n);
    for (int c = t; c < cols; c += nt) {
      const int q = nodes[c];
      eval.eval_all(grid.nodes[q], buf);
      const double sw = std::sqrt(grid.weights[q]);
      for (int i = 0; i < n; ++i) phi(i, c) = buf[i] * sw;
    }
  };
  if (threads <= 1) {
    worker(0, 1);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
  for (auto& th : pool) th.join();
}

/// accum += phi * phi^T on the lower triangle, split over fixed-size row
/// bands. Each entry is produced by exactly one band with a contraction order
/// that depends only on the band layout, so the result is bit-identical for
/// every thread count.
void rank_update_lower(Eigen::MatrixXd& accum, const Eigen::Ref<const Eigen::MatrixXd>& phi,
                       int threads) {
  const int n = static_cast<int>(accum.rows());
  constexpr int kBandRows = 256;
  const int bands = (n + kBandRows - 1) / kBandRows;
  auto run_band = [&](int b) {
    const int r0 = b * kBandRows;
    const int r1 = std::min(n, r0 + kBandRows);
    accum.block(r0, 0, r1 - r0, r1).noalias() +=
        phi.middleRows(r0, r1 - r0) * phi.topRows(r1).transpose();
  };
  if (threads <= 1 || bands == 1) {
    for (int b = 0; b < bands; ++b) run_band(b);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int b = t; b < bands; b += threads) run_band(b);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

HamiltonianMatrix assemble(const BasisSpec& spec, const Region& region, double v0,
                           const QuadratureGrid& grid, const AssemblyOptions& options) {
  if (!(spec.geometry == grid.geometry))
    throw std::invalid_argument("assemble: spec and grid use different geometries");
  if (!(v0 > 0.0) || !std::isfinite(v0))
    throw std::invalid_argument("assemble: V0 must be positive and finite");

  const int n = spec.size();
  const int threads = resolve_threads(options);
  const int chunk = std::max(1, options.chunk);
  const std::vector<int> comp = complement_nodes(region, grid);

  Eigen::MatrixXd penalty = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd phi(n, chunk);
  for (size_t q0 = 0; q0 < comp.size(); q0 += chunk) {
    const int cols = static_cast<int>(std::min(comp.size() - q0, static_cast<size_t>(chunk)));
    fill_chunk(spec, grid, {comp.data() + q0, static_cast<size_t>(cols)}, phi.leftCols(cols),
               threads);
    rank_update_lower(penalty, phi.leftCols(cols), threads);
  }

  HamiltonianMatrix h{Eigen::MatrixXd(), spec, region, v0, grid.resolution};
  h.entries = (v0 * penalty).selfadjointView<Eigen::Lower>();
  for (int i = 0; i < n; ++i) h.entries(i, i) += spec.eigenvalues[i];
  return h;
}

double fit_score(const BasisSpec& spec, const Region& region, const QuadratureGrid& grid,
                 const AssemblyOptions& options) {
  if (!(spec.geometry == grid.geometry))
    throw std::invalid_argument("fit_score: spec and grid use different geometries");
  const int n = spec.size();
  const int threads = resolve_threads(options);

  // c_j = <phi_j, chi_{S\Omega}> by quadrature
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(n);
  std::vector<int> inside;
  {
    BasisEvaluator eval(spec);
    std::vector<double> buf(n);
    for (int q = 0; q < static_cast<int>(grid.nodes.size()); ++q) {
      if (region.contains(grid.geometry, grid.nodes[q])) {
        inside.push_back(q);
        continue;
      }
      eval.eval_all(grid.nodes[q], buf);
      for (int i = 0; i < n; ++i) coeff[i] += grid.weights[q] * buf[i];
    }
  }

  // sup over Omega-nodes of |sum_j c_j phi_j|
  double score = 0.0;
  std::vector<double> partial(threads, 0.0);
  auto worker = [&](int t, int nt) {
    BasisEvaluator eval(spec);
    std::vector<double> buf(n);
    double best = 0.0;
    for (size_t c = t; c < inside.size(); c += nt) {
      eval.eval_all(grid.nodes[inside[c]], buf);
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += coeff[i] * buf[i];
      best = std::max(best, std::abs(s));
    }
    partial[t] = best;
  };
  if (threads <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    for (auto& th : pool) th.join();
  }
  for (double b : partial) score = std::max(score, b);
  return score;
}

void write_matrix_binary(const HamiltonianMatrix& h, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  const char magic[4] = {'L', 'B', 'H', 'M'};
  const std::uint32_t version = 1;
  const std::uint64_t n = static_cast<std::uint64_t>(h.entries.rows());
  const double v0 = h.v0;
  const std::uint32_t geom_tag = static_cast<std::uint32_t>(h.spec.geometry.kind());
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&v0), sizeof v0);
  out.write(reinterpret_cast<const char*>(&geom_tag), sizeof geom_tag);
  for (Eigen::Index i = 0; i < h.entries.rows(); ++i)
    for (Eigen::Index j = 0; j < h.entries.cols(); ++j) {
      const double v = h.entries(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
}

void write_matrix_csv(const HamiltonianMatrix& h, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  char buf[32];
  for (Eigen::Index i = 0; i < h.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < h.entries.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", h.entries(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace beltrami
