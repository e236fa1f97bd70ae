// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "beltrami/errors.hpp"
#include "beltrami/geometry.hpp"
#include "beltrami/region.hpp"

namespace beltrami::cli {

using nlohmann::json;

struct StatsConfig {
  int gaps = 150;
  double bin_width = 0.1;
  double max_s = 4.0;
  bool drop_degenerate = false;
  int unfold_window = 0;
  std::string synthetic = "none";  // none | poisson | goe: seeded sample instead of a solve
};

enum class ConvergenceOracle { none, triangle, box, interval_strip };

struct ConvergenceConfig {
  std::vector<double> v0_list;  // exactly one of v0_list / n_list may be nonempty
  std::vector<int> n_list;
  ConvergenceOracle oracle = ConvergenceOracle::none;
};

struct FdConfig {
  std::array<int, 2> nodes{50, 50};  // interior nodes per axis
};

/// One batch run. The schema is versioned JSON; see README for the layout.
struct RunConfig {
  int schema_version = 1;
  std::optional<AmbientGeometry> geometry;  // may come from the catalog entry
  std::optional<Region> region_tree;
  std::string region_name;  // catalog name; exclusive with region_tree
  int n = 225;
  double v0 = 2.1e5;
  int k = 0;  // modes to keep; 0 means min(n, 120)
  std::optional<std::array<int, 2>> quadrature_resolution;
  std::array<int, 2> sample_grid{64, 64};
  int modes = 6;  // mode grids to write
  bool mode_values_in_json = false;
  std::string dump_matrix = "none";  // none | binary | csv
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  StatsConfig stats;
  ConvergenceConfig convergence;
  FdConfig fd;
  std::vector<AmbientGeometry> fit_candidates;
  bool deterministic = false;  // normally set by the --deterministic flag

  int resolved_k() const { return k > 0 ? std::min(k, n) : std::min(n, 120); }
};

json geometry_to_json(const AmbientGeometry& g);
AmbientGeometry geometry_from_json(const json& j, const std::string& path);

json region_to_json(const Region& r);
Region region_from_json(const json& j, const std::string& path);

/// FNV-1a over the canonical serialized region tree.
std::uint64_t region_hash(const Region& r);

json to_json(const RunConfig& c);
RunConfig config_from_json(const json& j);
RunConfig load_config_file(const std::filesystem::path& path);

/// Geometry and region with catalog names resolved and consistency checked.
struct ResolvedProblem {
  AmbientGeometry geometry;
  Region region;
};
ResolvedProblem resolve_problem(const RunConfig& c);

/// Short human-readable geometry tag for CSV output.
std::string geometry_label(const AmbientGeometry& g);

}  // namespace beltrami::cli
