// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#include "beltrami/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "beltrami/assembly.hpp"
#include "beltrami/eigensolve.hpp"
#include "beltrami/reference.hpp"
#include "beltrami/stats.hpp"

namespace beltrami::cli {

namespace fs = std::filesystem;

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  return out;
}

AssemblyOptions assembly_options(const RunConfig& c) {
  AssemblyOptions opt;
  opt.deterministic = c.deterministic;
  return opt;
}

QuadratureGrid make_grid(const RunConfig& c, const AmbientGeometry& g, const BasisSpec& spec) {
  const auto res = c.quadrature_resolution ? *c.quadrature_resolution : default_resolution(spec);
  return quadrature(g, res);
}

/// Sample points for mode dumps, plus the embedded coordinate columns.
struct SampleLayout {
  std::vector<Eigen::Vector2d> points;
  std::vector<std::array<double, 3>> coords;  // x,y[,z]; z used on the sphere
  bool has_z = false;
};

SampleLayout sample_layout(const AmbientGeometry& g, std::array<int, 2> res) {
  SampleLayout lay;
  const int r1 = res[0], r2 = res[1];
  lay.points.reserve(static_cast<size_t>(r1) * r2);
  lay.coords.reserve(static_cast<size_t>(r1) * r2);
  switch (g.kind()) {
    case AmbientGeometry::Kind::rectangle: {
      const auto& r = g.as_rectangle();
      for (int i = 0; i < r1; ++i)
        for (int j = 0; j < r2; ++j) {
          const Eigen::Vector2d p((i + 0.5) * r.a1 / r1, (j + 0.5) * r.a2 / r2);
          lay.points.push_back(p);
          lay.coords.push_back({p.x(), p.y(), 0.0});
        }
      break;
    }
    case AmbientGeometry::Kind::unit_sphere: {
      lay.has_z = true;
      for (int i = 0; i < r1; ++i)
        for (int j = 0; j < r2; ++j) {
          const double theta = (i + 0.5) * kPi / r1;
          const double phi = 2.0 * kPi * j / r2;
          lay.points.push_back({theta, phi});
          lay.coords.push_back({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                                std::cos(theta)});
        }
      break;
    }
    case AmbientGeometry::Kind::flat_torus: {
      const Eigen::Matrix2d bt = g.as_flat_torus().lattice_basis.transpose();
      for (int i = 0; i < r1; ++i)
        for (int j = 0; j < r2; ++j) {
          const Eigen::Vector2d p = bt * Eigen::Vector2d((i + 0.5) / r1, (j + 0.5) / r2);
          lay.points.push_back(p);
          lay.coords.push_back({p.x(), p.y(), 0.0});
        }
      break;
    }
  }
  return lay;
}

json region_json_of(const RunConfig& c, const ResolvedProblem& prob) {
  if (!c.region_name.empty()) return {{"name", c.region_name}};
  return region_to_json(prob.region);
}

json run_metadata(const RunConfig& c, const ResolvedProblem& prob, const BasisSpec& spec,
                  std::array<int, 2> grid_res) {
  json meta;
  meta["schema_version"] = 1;
  meta["n"] = spec.size();
  meta["v0"] = c.v0;
  meta["geometry"] = geometry_to_json(prob.geometry);
  meta["region"] = region_json_of(c, prob);
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(region_hash(prob.region)));
    meta["region_hash"] = buf;
  }
  meta["quadrature_resolution"] = {grid_res[0], grid_res[1]};
  meta["seed"] = c.seed;
  return meta;
}

/// Leakage (outside mass) for every kept mode, chunked over the grid.
std::vector<double> all_leakages(const EigenSolution& sol, const QuadratureGrid& grid,
                                 const Region& region) {
  const int n = sol.spec.size();
  const int k = static_cast<int>(sol.eigenvalues.size());
  const int q_total = static_cast<int>(grid.nodes.size());
  std::vector<double> outside(k, 0.0);
  const int chunk = 1024;
  Eigen::MatrixXd phi(n, chunk);
  BasisEvaluator eval(sol.spec);
  std::vector<double> buf(n);
  std::vector<char> in_omega(chunk);
  Eigen::VectorXd w(chunk);
  for (int q0 = 0; q0 < q_total; q0 += chunk) {
    const int cols = std::min(chunk, q_total - q0);
    for (int c = 0; c < cols; ++c) {
      const int q = q0 + c;
      eval.eval_all(grid.nodes[q], buf);
      for (int i = 0; i < n; ++i) phi(i, c) = buf[i];
      in_omega[c] = region.contains(grid.geometry, grid.nodes[q]) ? 1 : 0;
      w[c] = grid.weights[q];
    }
    const Eigen::MatrixXd psi = phi.leftCols(cols).transpose() * sol.coefficients;  // cols x k
    for (int c = 0; c < cols; ++c) {
      if (in_omega[c]) continue;
      for (int j = 0; j < k; ++j) outside[j] += w[c] * psi(c, j) * psi(c, j);
    }
  }
  return outside;
}

void write_histogram_csv(const fs::path& path, const std::vector<stats::HistogramBin>& bins) {
  auto out = open_out(path);
  out << "bin_left,bin_right,density,reference_poisson,reference_goe\n";
  for (const auto& b : bins) {
    const double mid = 0.5 * (b.left + b.right);
    out << g17(b.left) << ',' << g17(b.right) << ',' << g17(b.density) << ','
        << g17(stats::poisson_pdf(mid)) << ',' << g17(stats::goe_pdf(mid)) << '\n';
  }
}

}  // namespace

CommandResult cmd_solve(const RunConfig& config, const fs::path& out_dir) {
  CommandResult result;
  const ResolvedProblem prob = resolve_problem(config);
  const BasisSpec spec = enumerate_basis(prob.geometry, config.n);
  const QuadratureGrid grid = make_grid(config, prob.geometry, spec);
  const HamiltonianMatrix h = assemble(spec, prob.region, config.v0, grid, assembly_options(config));

  fs::create_directories(out_dir);
  if (config.dump_matrix == "binary") {
    const fs::path p = out_dir / "hamiltonian.bin";
    write_matrix_binary(h, p);
    result.files.push_back(p);
  } else if (config.dump_matrix == "csv") {
    const fs::path p = out_dir / "hamiltonian.csv";
    write_matrix_csv(h, p);
    result.files.push_back(p);
  }

  const int k = config.resolved_k();
  const EigenSolution sol = eigendecompose(h, k);
  const std::vector<double> leakage = all_leakages(sol, grid, prob.region);

  {
    const fs::path p = out_dir / "spectrum.csv";
    auto out = open_out(p);
    out << "index,eigenvalue,leakage\n";
    for (int j = 0; j < k; ++j)
      out << (j + 1) << ',' << g17(sol.eigenvalues[j]) << ',' << g17(leakage[j]) << '\n';
    result.files.push_back(p);
  }

  const json meta = run_metadata(config, prob, spec, grid.resolution);
  const SampleLayout lay = sample_layout(prob.geometry, config.sample_grid);
  const int modes = std::min(config.modes, k);
  for (int j = 0; j < modes; ++j) {
    const std::vector<double> values = sample_mode(sol, j, lay.points);
    char name[32];
    std::snprintf(name, sizeof name, "mode_%03d.csv", j);
    const fs::path p = out_dir / name;
    auto out = open_out(p);
    out << (lay.has_z ? "x,y,z,value\n" : "x,y,value\n");
    for (size_t q = 0; q < values.size(); ++q) {
      out << g17(lay.coords[q][0]) << ',' << g17(lay.coords[q][1]);
      if (lay.has_z) out << ',' << g17(lay.coords[q][2]);
      out << ',' << g17(values[q]) << '\n';
    }
    result.files.push_back(p);

    json side = meta;
    side["mode"] = j;
    side["eigenvalue"] = sol.eigenvalues[j];
    side["leakage"] = leakage[j];
    side["grid"] = {config.sample_grid[0], config.sample_grid[1]};
    if (config.mode_values_in_json) {
      json rows = json::array();
      for (int a = 0; a < config.sample_grid[0]; ++a) {
        json row = json::array();
        for (int b = 0; b < config.sample_grid[1]; ++b)
          row.push_back(values[static_cast<size_t>(a) * config.sample_grid[1] + b]);
        rows.push_back(row);
      }
      side["values"] = rows;
    }
    std::snprintf(name, sizeof name, "mode_%03d.json", j);
    const fs::path sp = out_dir / name;
    open_out(sp) << side.dump(2) << '\n';
    result.files.push_back(sp);
  }

  {
    json summary = meta;
    summary["command"] = "solve";
    summary["k"] = k;
    json ev = json::array();
    for (int j = 0; j < k; ++j) ev.push_back(sol.eigenvalues[j]);
    summary["eigenvalues"] = ev;
    const fs::path p = out_dir / "solve.json";
    open_out(p) << summary.dump(2) << '\n';
    result.files.push_back(p);
  }
  return result;
}

CommandResult cmd_stats(const RunConfig& config, const fs::path& out_dir) {
  CommandResult result;
  fs::create_directories(out_dir);

  std::vector<std::string> warnings;
  stats::SpacingSample sample;
  json origin;

  if (config.stats.synthetic != "none") {
    // seeded synthetic draw through the same normalization path
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> levels{0.0};
    for (int i = 0; i < config.stats.gaps; ++i) {
      const double u = uni(rng);
      const double s = config.stats.synthetic == "poisson"
                           ? -std::log1p(-u)
                           : std::sqrt(-(4.0 / kPi) * std::log1p(-u));
      levels.push_back(levels.back() + s);
    }
    sample = stats::spacings(levels, config.stats.gaps,
                             {config.stats.drop_degenerate, config.stats.unfold_window});
    origin = {{"synthetic", config.stats.synthetic}, {"seed", config.seed}};
  } else {
    const ResolvedProblem prob = resolve_problem(config);
    if (config.n < config.stats.gaps + 1)
      throw ConfigError("config.n: need at least stats.gaps + 1 basis functions");
    const BasisSpec spec = enumerate_basis(prob.geometry, config.n);
    if (prob.geometry.kind() == AmbientGeometry::Kind::unit_sphere) {
      int lmax = 0;
      for (const auto& bi : spec.indices)
        lmax = std::max(lmax, std::get<SphereIndex>(bi).l);
      if (config.n != (lmax + 1) * (lmax + 1))
        warnings.push_back(
            "basis truncation splits the top degenerate l-shell; raise n to a full shell "
            "(next complete value: " +
            std::to_string((lmax + 1) * (lmax + 1)) + ")");
    }
    const QuadratureGrid grid = make_grid(config, prob.geometry, spec);
    const HamiltonianMatrix h =
        assemble(spec, prob.region, config.v0, grid, assembly_options(config));
    const Eigen::VectorXd ev = symmetric_eigenvalues(h.entries);
    const std::vector<double> levels(ev.data(), ev.data() + config.stats.gaps + 1);
    sample = stats::spacings(levels, config.stats.gaps,
                             {config.stats.drop_degenerate, config.stats.unfold_window});
    origin = run_metadata(config, prob, spec, grid.resolution);
  }

  const stats::Classification cls = stats::classify(sample);
  const auto bins = stats::histogram(sample, config.stats.bin_width, config.stats.max_s);

  const fs::path hist_path = out_dir / "histogram.csv";
  write_histogram_csv(hist_path, bins);
  result.files.push_back(hist_path);

  json out;
  out["label"] = stats::to_string(cls.label);
  out["d_poisson"] = cls.d_poisson;
  out["d_goe"] = cls.d_goe;
  out["gaps"] = sample.source_count;
  out["drop_degenerate"] = config.stats.drop_degenerate;
  out["unfold_window"] = config.stats.unfold_window;
  out["warnings"] = warnings;
  out["origin"] = origin;
  const fs::path cls_path = out_dir / "classification.json";
  open_out(cls_path) << out.dump(2) << '\n';
  result.files.push_back(cls_path);
  return result;
}

namespace {

/// Oracle eigenvalue list for convergence/fd comparisons. Empty when no
/// oracle applies. `count` values, multiplicities expanded.
std::vector<double> oracle_values(ConvergenceOracle oracle, const AmbientGeometry& geometry,
                                  double v0, int count) {
  std::vector<double> out;
  switch (oracle) {
    case ConvergenceOracle::none:
      break;
    case ConvergenceOracle::triangle: {
      for (const auto& line : reference::triangle_spectrum(count)) {
        for (int i = 0; i < line.multiplicity && static_cast<int>(out.size()) < count; ++i)
          out.push_back(line.eigenvalue);
        if (static_cast<int>(out.size()) >= count) break;
      }
      break;
    }
    case ConvergenceOracle::box: {
      const auto& r = geometry.as_rectangle();
      out = reference::box_spectrum(r.a1, r.a2, count);
      break;
    }
    case ConvergenceOracle::interval_strip: {
      // separable oracle for Omega = (0,1) x (0,a2) inside S = (0,2) x (0,a2):
      // lambda_{ij}(V0) = root_i(V0) + (pi j / a2)^2
      const auto& r = geometry.as_rectangle();
      for (int i = 1; i <= count; ++i) {
        const double root = reference::interval_relaxed_eigenvalue(v0, i);
        for (int j = 1; j <= count; ++j)
          out.push_back(root + kPi * kPi * j * j / (r.a2 * r.a2));
      }
      std::sort(out.begin(), out.end());
      out.resize(count);
      break;
    }
  }
  return out;
}

}  // namespace

CommandResult cmd_convergence(const RunConfig& config, const fs::path& out_dir) {
  CommandResult result;
  const ResolvedProblem prob = resolve_problem(config);
  const bool sweep_v0 = !config.convergence.v0_list.empty();
  if (!sweep_v0 && config.convergence.n_list.empty())
    throw ConfigError("config.convergence: one of v0_list or n_list is required");

  const int k = std::min(10, config.n);
  std::vector<double> params;
  if (sweep_v0)
    params = config.convergence.v0_list;
  else
    for (int n : config.convergence.n_list) params.push_back(static_cast<double>(n));

  fs::create_directories(out_dir);
  const fs::path main_path = out_dir / "convergence.csv";
  auto out = open_out(main_path);
  out << (sweep_v0 ? "v0" : "n");
  for (int j = 1; j <= k; ++j) out << ",lambda_" << j;
  out << '\n';

  std::ofstream err_out;
  const bool with_oracle = config.convergence.oracle != ConvergenceOracle::none;
  const fs::path err_path = out_dir / "convergence_error.csv";
  if (with_oracle) {
    err_out = open_out(err_path);
    err_out << (sweep_v0 ? "v0" : "n");
    for (int j = 1; j <= k; ++j) err_out << ",rel_err_" << j;
    err_out << '\n';
  }

  for (double param : params) {
    const int n = sweep_v0 ? config.n : static_cast<int>(param);
    const double v0 = sweep_v0 ? param : config.v0;
    const BasisSpec spec = enumerate_basis(prob.geometry, n);
    const QuadratureGrid grid = make_grid(config, prob.geometry, spec);
    const HamiltonianMatrix h = assemble(spec, prob.region, v0, grid, assembly_options(config));
    const Eigen::VectorXd ev = symmetric_eigenvalues(h.entries);

    out << g17(param);
    for (int j = 0; j < k; ++j) out << ',' << g17(ev[j]);
    out << '\n';

    if (with_oracle) {
      const auto oracle = oracle_values(config.convergence.oracle, prob.geometry, v0, k);
      err_out << g17(param);
      for (int j = 0; j < k; ++j)
        err_out << ',' << g17(std::abs(ev[j] - oracle[j]) / std::abs(oracle[j]));
      err_out << '\n';
    }
  }
  result.files.push_back(main_path);
  if (with_oracle) result.files.push_back(err_path);
  return result;
}

CommandResult cmd_fd_compare(const RunConfig& config, const fs::path& out_dir) {
  CommandResult result;
  const ResolvedProblem prob = resolve_problem(config);
  if (prob.geometry.kind() != AmbientGeometry::Kind::rectangle)
    throw ConfigError("config.geometry: fd-compare requires a rectangle host space");

  const BasisSpec spec = enumerate_basis(prob.geometry, config.n);
  const QuadratureGrid grid = make_grid(config, prob.geometry, spec);
  const HamiltonianMatrix h = assemble(spec, prob.region, config.v0, grid, assembly_options(config));
  const Eigen::VectorXd exp_ev = symmetric_eigenvalues(h.entries);

  const reference::FdOperator op =
      reference::fd_assemble(prob.geometry, prob.region, config.v0, config.fd.nodes);
  const int k = std::min({config.resolved_k(), spec.size(), op.dim()});
  const Eigen::VectorXd fd_ev = reference::fd_eigenvalues(op, k);

  const auto oracle = oracle_values(config.convergence.oracle, prob.geometry, config.v0, k);

  fs::create_directories(out_dir);
  const fs::path p = out_dir / "fd_compare.csv";
  auto out = open_out(p);
  out << "index,expansion,fd";
  if (!oracle.empty()) out << ",oracle";
  out << '\n';
  for (int j = 0; j < k; ++j) {
    out << (j + 1) << ',' << g17(exp_ev[j]) << ',' << g17(fd_ev[j]);
    if (!oracle.empty()) out << ',' << g17(oracle[j]);
    out << '\n';
  }
  result.files.push_back(p);
  return result;
}

CommandResult cmd_fit_score(const RunConfig& config, const fs::path& out_dir) {
  CommandResult result;
  const ResolvedProblem prob = resolve_problem(config);
  std::vector<AmbientGeometry> candidates = config.fit_candidates;
  if (candidates.empty()) candidates.push_back(prob.geometry);

  fs::create_directories(out_dir);
  const fs::path p = out_dir / "fit_score.csv";
  auto out = open_out(p);
  out << "geometry,tau\n";
  for (const auto& g : candidates) {
    const BasisSpec spec = enumerate_basis(g, config.n);
    const QuadratureGrid grid = make_grid(config, g, spec);
    const double tau = fit_score(spec, prob.region, grid, assembly_options(config));
    out << geometry_label(g) << ',' << g17(tau) << '\n';
  }
  result.files.push_back(p);
  return result;
}

}  // namespace beltrami::cli
