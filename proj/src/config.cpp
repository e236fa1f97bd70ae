// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0

#include "beltrami/config.hpp"

#include <fstream>
#include <sstream>

namespace beltrami::cli {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

Eigen::Vector2d get_vec2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
  return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]")};
}

Eigen::Vector3d get_vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected [x, y, z]");
  return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]"),
          get_number(j[2], path + "[2]")};
}

std::array<int, 2> get_res(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [r1, r2]");
  return {get_int(j[0], path + "[0]"), get_int(j[1], path + "[1]")};
}

}  // namespace

json geometry_to_json(const AmbientGeometry& g) {
  switch (g.kind()) {
    case AmbientGeometry::Kind::rectangle: {
      const auto& r = g.as_rectangle();
      return {{"type", "rectangle"}, {"a1", r.a1}, {"a2", r.a2}};
    }
    case AmbientGeometry::Kind::unit_sphere:
      return {{"type", "unit_sphere"}};
    case AmbientGeometry::Kind::flat_torus: {
      const auto& b = g.as_flat_torus().lattice_basis;
      return {{"type", "flat_torus"},
              {"lattice_basis", {{b(0, 0), b(0, 1)}, {b(1, 0), b(1, 1)}}}};
    }
  }
  return {};
}

AmbientGeometry geometry_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type")) fail(path, "expected a geometry object with 'type'");
  const std::string type = j["type"].get<std::string>();
  try {
    if (type == "rectangle")
      return AmbientGeometry::rectangle(get_number(j.at("a1"), path + ".a1"),
                                        get_number(j.at("a2"), path + ".a2"));
    if (type == "unit_sphere") return AmbientGeometry::unit_sphere();
    if (type == "flat_torus") {
      const json& b = j.at("lattice_basis");
      if (!b.is_array() || b.size() != 2) fail(path + ".lattice_basis", "expected two rows");
      Eigen::Matrix2d m;
      for (int r = 0; r < 2; ++r) {
        const auto row = get_vec2(b[r], path + ".lattice_basis[" + std::to_string(r) + "]");
        m(r, 0) = row.x();
        m(r, 1) = row.y();
      }
      return AmbientGeometry::flat_torus(m);
    }
  } catch (const json::exception& e) {
    fail(path, e.what());
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path, "unknown geometry type '" + type + "'");
}

namespace {

struct RegionToJson {
  json operator()(const shape::All&) const { return {{"shape", "all"}}; }
  json operator()(const shape::HalfPlane& h) const {
    return {{"shape", "half_plane"}, {"normal", {h.normal.x(), h.normal.y()}}, {"offset", h.offset}};
  }
  json operator()(const shape::Disk& d) const {
    return {{"shape", "disk"}, {"center", {d.center.x(), d.center.y()}}, {"radius", d.radius}};
  }
  json operator()(const shape::ConvexPolygon& p) const {
    json verts = json::array();
    for (const auto& v : p.vertices) verts.push_back({v.x(), v.y()});
    return {{"shape", "convex_polygon"}, {"vertices", verts}};
  }
  json operator()(const shape::SphericalCap& c) const {
    return {{"shape", "spherical_cap"},
            {"axis", {c.axis.x(), c.axis.y(), c.axis.z()}},
            {"angle", c.angle}};
  }
  json operator()(const shape::SphericalLune& l) const {
    return {{"shape", "spherical_lune"},
            {"theta", {l.theta_lo, l.theta_hi}},
            {"phi", {l.phi_lo, l.phi_hi}}};
  }
  json operator()(const shape::TorusHole& t) const {
    return {{"shape", "torus_hole"}, {"base", region_to_json(*t.base)}};
  }
  json operator()(const shape::Union& u) const {
    json parts = json::array();
    for (const auto& p : u.parts) parts.push_back(region_to_json(*p));
    return {{"shape", "union"}, {"parts", parts}};
  }
  json operator()(const shape::Intersection& s) const {
    json parts = json::array();
    for (const auto& p : s.parts) parts.push_back(region_to_json(*p));
    return {{"shape", "intersection"}, {"parts", parts}};
  }
  json operator()(const shape::Complement& c) const {
    return {{"shape", "complement"}, {"of", region_to_json(*c.operand)}};
  }
};

}  // namespace

json region_to_json(const Region& r) { return std::visit(RegionToJson{}, r.node()); }

Region region_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a region object");
  if (j.contains("name")) {
    try {
      return find_domain(j["name"].get<std::string>()).region;
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
  if (!j.contains("shape")) fail(path, "expected 'shape' or 'name'");
  const std::string shape = j["shape"].get<std::string>();
  try {
    if (shape == "all") return Region::all();
    if (shape == "half_plane")
      return Region::half_plane(get_vec2(j.at("normal"), path + ".normal"),
                                get_number(j.at("offset"), path + ".offset"));
    if (shape == "disk")
      return Region::disk(get_vec2(j.at("center"), path + ".center"),
                          get_number(j.at("radius"), path + ".radius"));
    if (shape == "convex_polygon") {
      const json& verts = j.at("vertices");
      if (!verts.is_array()) fail(path + ".vertices", "expected an array");
      std::vector<Eigen::Vector2d> v;
      for (size_t i = 0; i < verts.size(); ++i)
        v.push_back(get_vec2(verts[i], path + ".vertices[" + std::to_string(i) + "]"));
      return Region::convex_polygon(std::move(v));
    }
    if (shape == "spherical_cap")
      return Region::spherical_cap(get_vec3(j.at("axis"), path + ".axis"),
                                   get_number(j.at("angle"), path + ".angle"));
    if (shape == "spherical_lune") {
      const json& th = j.at("theta");
      const json& ph = j.at("phi");
      if (!th.is_array() || th.size() != 2) fail(path + ".theta", "expected [lo, hi]");
      if (!ph.is_array() || ph.size() != 2) fail(path + ".phi", "expected [lo, hi]");
      return Region::spherical_lune(get_number(th[0], path + ".theta[0]"),
                                    get_number(th[1], path + ".theta[1]"),
                                    get_number(ph[0], path + ".phi[0]"),
                                    get_number(ph[1], path + ".phi[1]"));
    }
    if (shape == "torus_hole")
      return Region::torus_hole(region_from_json(j.at("base"), path + ".base"));
    if (shape == "union" || shape == "intersection") {
      const json& parts = j.at("parts");
      if (!parts.is_array() || parts.empty()) fail(path + ".parts", "expected a nonempty array");
      std::vector<Region> rs;
      for (size_t i = 0; i < parts.size(); ++i)
        rs.push_back(region_from_json(parts[i], path + ".parts[" + std::to_string(i) + "]"));
      return shape == "union" ? Region::union_of(std::move(rs))
                              : Region::intersection_of(std::move(rs));
    }
    if (shape == "complement")
      return Region::complement_of(region_from_json(j.at("of"), path + ".of"));
  } catch (const json::exception& e) {
    fail(path, e.what());
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path, "unknown shape '" + shape + "'");
}

std::uint64_t region_hash(const Region& r) {
  const std::string s = region_to_json(r).dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  if (c.geometry) j["geometry"] = geometry_to_json(*c.geometry);
  if (!c.region_name.empty())
    j["region"] = {{"name", c.region_name}};
  else if (c.region_tree)
    j["region"] = region_to_json(*c.region_tree);
  j["n"] = c.n;
  j["v0"] = c.v0;
  if (c.k > 0) j["k"] = c.k;
  if (c.quadrature_resolution)
    j["quadrature_resolution"] = {(*c.quadrature_resolution)[0], (*c.quadrature_resolution)[1]};
  j["sample_grid"] = {c.sample_grid[0], c.sample_grid[1]};
  j["modes"] = c.modes;
  j["mode_values_in_json"] = c.mode_values_in_json;
  j["dump_matrix"] = c.dump_matrix;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  j["stats"] = {{"gaps", c.stats.gaps},
                {"bin_width", c.stats.bin_width},
                {"max_s", c.stats.max_s},
                {"drop_degenerate", c.stats.drop_degenerate},
                {"unfold_window", c.stats.unfold_window},
                {"synthetic", c.stats.synthetic}};
  json conv;
  if (!c.convergence.v0_list.empty()) conv["v0_list"] = c.convergence.v0_list;
  if (!c.convergence.n_list.empty()) conv["n_list"] = c.convergence.n_list;
  switch (c.convergence.oracle) {
    case ConvergenceOracle::none:
      conv["oracle"] = "none";
      break;
    case ConvergenceOracle::triangle:
      conv["oracle"] = "triangle";
      break;
    case ConvergenceOracle::box:
      conv["oracle"] = "box";
      break;
    case ConvergenceOracle::interval_strip:
      conv["oracle"] = "interval_strip";
      break;
  }
  j["convergence"] = conv;
  j["fd"] = {{"nodes", {c.fd.nodes[0], c.fd.nodes[1]}}};
  if (!c.fit_candidates.empty()) {
    json cands = json::array();
    for (const auto& g : c.fit_candidates) cands.push_back(geometry_to_json(g));
    j["fit_candidates"] = cands;
  }
  return j;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  RunConfig c;
  if (!j.contains("schema_version")) fail("config.schema_version", "missing (must be 1)");
  c.schema_version = get_int(j["schema_version"], "config.schema_version");
  if (c.schema_version != 1) fail("config.schema_version", "unsupported schema version");

  if (j.contains("geometry")) c.geometry = geometry_from_json(j["geometry"], "config.geometry");
  if (j.contains("region")) {
    const json& r = j["region"];
    if (r.is_object() && r.contains("name")) {
      c.region_name = r["name"].get<std::string>();
      try {
        find_domain(c.region_name);
      } catch (const std::invalid_argument& e) {
        fail("config.region", e.what());
      }
    } else {
      c.region_tree = region_from_json(r, "config.region");
    }
  }
  if (j.contains("n")) c.n = get_int(j["n"], "config.n");
  if (c.n < 1) fail("config.n", "must be >= 1");
  if (j.contains("v0")) c.v0 = get_number(j["v0"], "config.v0");
  if (!(c.v0 > 0.0)) fail("config.v0", "must be positive");
  if (j.contains("k")) {
    c.k = get_int(j["k"], "config.k");
    if (c.k < 1 || c.k > c.n) fail("config.k", "must satisfy 1 <= k <= n");
  }
  if (j.contains("quadrature_resolution")) {
    c.quadrature_resolution = get_res(j["quadrature_resolution"], "config.quadrature_resolution");
    if ((*c.quadrature_resolution)[0] < 2 || (*c.quadrature_resolution)[1] < 2)
      fail("config.quadrature_resolution", "components must be >= 2");
  }
  if (j.contains("sample_grid")) {
    c.sample_grid = get_res(j["sample_grid"], "config.sample_grid");
    if (c.sample_grid[0] < 1 || c.sample_grid[1] < 1)
      fail("config.sample_grid", "components must be >= 1");
  }
  if (j.contains("modes")) {
    c.modes = get_int(j["modes"], "config.modes");
    if (c.modes < 0) fail("config.modes", "must be >= 0");
  }
  if (j.contains("mode_values_in_json")) c.mode_values_in_json = j["mode_values_in_json"].get<bool>();
  if (j.contains("dump_matrix")) {
    c.dump_matrix = j["dump_matrix"].get<std::string>();
    if (c.dump_matrix != "none" && c.dump_matrix != "binary" && c.dump_matrix != "csv")
      fail("config.dump_matrix", "must be one of none|binary|csv");
  }
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();

  if (j.contains("stats")) {
    const json& s = j["stats"];
    if (s.contains("gaps")) c.stats.gaps = get_int(s["gaps"], "config.stats.gaps");
    if (c.stats.gaps < 1) fail("config.stats.gaps", "must be >= 1");
    if (s.contains("bin_width")) c.stats.bin_width = get_number(s["bin_width"], "config.stats.bin_width");
    if (!(c.stats.bin_width > 0.0)) fail("config.stats.bin_width", "must be positive");
    if (s.contains("max_s")) c.stats.max_s = get_number(s["max_s"], "config.stats.max_s");
    if (!(c.stats.max_s > 0.0)) fail("config.stats.max_s", "must be positive");
    if (s.contains("drop_degenerate")) c.stats.drop_degenerate = s["drop_degenerate"].get<bool>();
    if (s.contains("unfold_window"))
      c.stats.unfold_window = get_int(s["unfold_window"], "config.stats.unfold_window");
    if (c.stats.unfold_window < 0) fail("config.stats.unfold_window", "must be >= 0");
    if (s.contains("synthetic")) {
      c.stats.synthetic = s["synthetic"].get<std::string>();
      if (c.stats.synthetic != "none" && c.stats.synthetic != "poisson" && c.stats.synthetic != "goe")
        fail("config.stats.synthetic", "must be one of none|poisson|goe");
    }
  }
  if (j.contains("convergence")) {
    const json& v = j["convergence"];
    if (v.contains("v0_list"))
      for (const auto& x : v["v0_list"]) c.convergence.v0_list.push_back(x.get<double>());
    if (v.contains("n_list"))
      for (const auto& x : v["n_list"]) c.convergence.n_list.push_back(x.get<int>());
    if (v.contains("oracle")) {
      const std::string o = v["oracle"].get<std::string>();
      if (o == "none")
        c.convergence.oracle = ConvergenceOracle::none;
      else if (o == "triangle")
        c.convergence.oracle = ConvergenceOracle::triangle;
      else if (o == "box")
        c.convergence.oracle = ConvergenceOracle::box;
      else if (o == "interval_strip")
        c.convergence.oracle = ConvergenceOracle::interval_strip;
      else
        fail("config.convergence.oracle", "unknown oracle '" + o + "'");
    }
    if (!c.convergence.v0_list.empty() && !c.convergence.n_list.empty())
      fail("config.convergence", "v0_list and n_list are mutually exclusive");
  }
  if (j.contains("fd")) {
    const json& f = j["fd"];
    if (f.contains("nodes")) c.fd.nodes = get_res(f["nodes"], "config.fd.nodes");
    if (c.fd.nodes[0] < 3 || c.fd.nodes[1] < 3) fail("config.fd.nodes", "need >= 3 per axis");
  }
  if (j.contains("fit_candidates")) {
    const json& cands = j["fit_candidates"];
    if (!cands.is_array()) fail("config.fit_candidates", "expected an array");
    for (size_t i = 0; i < cands.size(); ++i)
      c.fit_candidates.push_back(
          geometry_from_json(cands[i], "config.fit_candidates[" + std::to_string(i) + "]"));
  }
  return c;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

ResolvedProblem resolve_problem(const RunConfig& c) {
  if (!c.region_name.empty()) {
    const NamedDomain* d = nullptr;
    try {
      d = &find_domain(c.region_name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config.region: ") + e.what());
    }
    if (c.geometry && !(*c.geometry == d->geometry))
      throw ConfigError("config.region: catalog domain '" + c.region_name +
                        "' does not live in config.geometry");
    return {d->geometry, d->region};
  }
  if (!c.geometry) throw ConfigError("config.geometry: required when region is not a catalog name");
  if (c.region_tree) return {*c.geometry, *c.region_tree};
  return {*c.geometry, Region::all()};
}

std::string geometry_label(const AmbientGeometry& g) {
  std::ostringstream os;
  switch (g.kind()) {
    case AmbientGeometry::Kind::rectangle:
      os << "rectangle(" << g.as_rectangle().a1 << "x" << g.as_rectangle().a2 << ")";
      break;
    case AmbientGeometry::Kind::unit_sphere:
      os << "unit_sphere";
      break;
    case AmbientGeometry::Kind::flat_torus: {
      const auto& b = g.as_flat_torus().lattice_basis;
      os << "flat_torus([" << b(0, 0) << "," << b(0, 1) << ";" << b(1, 0) << "," << b(1, 1) << "])";
      break;
    }
  }
  return os.str();
}

}  // namespace beltrami::cli
