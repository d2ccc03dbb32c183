#include "uavcov/scenario.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "uavcov/errors.hpp"

namespace uavcov {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ValidationError(path + key, "missing");
  return obj.at(key);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ParseError(field + ": expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  return number(obj.at(key), path + key);
}

int integer_or(const json& obj, const char* key, const std::string& path, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ParseError(path + key + ": expected an integer");
  return v.get<int>();
}

Point2 point(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) throw ParseError(field + ": expected [x, y]");
  return {number(v[0], field + "[0]"), number(v[1], field + "[1]")};
}

QualityModel parse_quality(const json& q) {
  if (!q.is_object()) throw ParseError("quality: expected an object");
  QualityModel m;
  const json& variant = require(q, "variant", "quality.");
  if (!variant.is_string()) throw ParseError("quality.variant: expected a string");
  const std::string v = variant.get<std::string>();
  if (v == "uniform") {
    m.variant = QualityVariant::Uniform;
  } else if (v == "paraboloid") {
    m.variant = QualityVariant::Paraboloid;
    m.edge_ratio_b = number(require(q, "b", "quality."), "quality.b");
  } else {
    throw ValidationError("quality.variant", "must be \"uniform\" or \"paraboloid\"");
  }
  const double deg = number(require(q, "half_angle_deg", "quality."), "quality.half_angle_deg");
  if (!(deg > 0.0 && deg < 90.0)) throw ValidationError("quality.half_angle_deg", "must lie in (0, 90)");
  m.half_angle = deg * geom::kPi / 180.0;
  m.z_min = number(require(q, "z_min", "quality."), "quality.z_min");
  m.z_max = number(require(q, "z_max", "quality."), "quality.z_max");
  try {
    m.validate();
  } catch (const ValidationError& e) {
    throw ValidationError("quality." + e.field(), e.what());
  }
  return m;
}

geom::ConvexPolygon parse_omega(const json& o) {
  if (!o.is_array()) throw ParseError("omega: expected an array of [x, y] vertices");
  std::vector<Point2> pts;
  for (std::size_t k = 0; k < o.size(); ++k) pts.push_back(point(o[k], "omega[" + std::to_string(k) + "]"));
  try {
    return geom::ConvexPolygon(pts);
  } catch (const GeometryError& e) {
    throw ValidationError("omega", e.what());
  }
}

std::vector<NodeState> parse_nodes(const json& n, const QualityModel& m, const geom::ConvexPolygon& omega,
                                   std::uint64_t seed) {
  std::vector<NodeState> out;
  if (n.is_array()) {
    for (std::size_t k = 0; k < n.size(); ++k) {
      const std::string path = "nodes[" + std::to_string(k) + "].";
      const json& e = n[k];
      if (!e.is_object()) throw ParseError("nodes[" + std::to_string(k) + "]: expected an object");
      NodeState s;
      s.id = integer_or(e, "id", path, static_cast<int>(k));
      s.q = {number(require(e, "x", path), path + "x"), number(require(e, "y", path), path + "y")};
      s.z = number(require(e, "z", path), path + "z");
      out.push_back(s);
    }
    return out;
  }
  if (!n.is_object() || !n.contains("random")) {
    throw ParseError("nodes: expected an array or {\"random\": {...}}");
  }
  // Seeded random layout: ground positions uniform in a square around
  // `center` (kept inside omega), altitudes uniform in z_range.
  const json& r = n.at("random");
  const std::string path = "nodes.random.";
  const int count = integer_or(r, "count", path, 0);
  if (count < 0) throw ValidationError(path + "count", "must be non-negative");
  const Point2 c = point(require(r, "center", path), path + "center");
  const double spread = number(require(r, "spread", path), path + "spread");
  if (!(spread > 0.0)) throw ValidationError(path + "spread", "must be positive");
  Point2 zr{m.z_min, m.z_max};
  if (r.contains("z_range")) zr = point(r.at("z_range"), path + "z_range");
  if (!(zr.x >= m.z_min && zr.y <= m.z_max && zr.x <= zr.y)) {
    throw ValidationError(path + "z_range", "must lie inside [z_min, z_max]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(c.x - spread, c.x + spread);
  std::uniform_real_distribution<double> uy(c.y - spread, c.y + spread);
  std::uniform_real_distribution<double> uz(zr.x, zr.y);
  for (int k = 0; k < count; ++k) {
    Point2 q{ux(rng), uy(rng)};
    q = omega.project(q);
    out.push_back({k, q, uz(rng)});
  }
  return out;
}

SimConfig parse_sim(const json& s) {
  SimConfig cfg;
  if (s.is_null()) return cfg;
  if (!s.is_object()) throw ParseError("sim: expected an object");
  const std::string p = "sim.";
  cfg.dt = number_or(s, "dt", p, cfg.dt);
  cfg.steps = integer_or(s, "steps", p, cfg.steps);
  cfg.gains.alpha_q = number_or(s, "alpha_q", p, cfg.gains.alpha_q);
  cfg.gains.alpha_z = number_or(s, "alpha_z", p, cfg.gains.alpha_z);
  cfg.record_every = integer_or(s, "record_every", p, cfg.record_every);
  cfg.convergence_tol = number_or(s, "convergence_tol", p, cfg.convergence_tol);
  cfg.quad.boundary_order = integer_or(s, "boundary_order", p, cfg.quad.boundary_order);
  cfg.quad.grid_resolution = integer_or(s, "grid_resolution", p, cfg.quad.grid_resolution);
  if (s.contains("interior")) {
    const json& v = s.at("interior");
    if (!v.is_string()) throw ParseError("sim.interior: expected a string");
    if (v == "exact") {
      cfg.quad.interior = InteriorMethod::Exact;
    } else if (v == "grid") {
      cfg.quad.interior = InteriorMethod::Grid;
    } else {
      throw ValidationError("sim.interior", "must be \"exact\" or \"grid\"");
    }
  }
  cfg.max_form_every = integer_or(s, "max_form_every", p, cfg.max_form_every);
  cfg.max_form_resolution = integer_or(s, "max_form_resolution", p, cfg.max_form_resolution);
  cfg.max_form_depth = integer_or(s, "max_form_depth", p, cfg.max_form_depth);
  if (s.contains("seed")) {
    const json& v = s.at("seed");
    if (!v.is_number_unsigned()) throw ParseError("sim.seed: expected a non-negative integer");
    cfg.seed = v.get<std::uint64_t>();
  }
  if (!(cfg.convergence_tol > 0.0)) throw ValidationError("sim.convergence_tol", "must be positive");
  cfg.validate();
  return cfg;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& name,
                             std::optional<std::uint64_t> seed) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ParseError(name + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError(name + ": top level must be an object");
  try {
    SimConfig sim = parse_sim(doc.contains("sim") ? doc.at("sim") : json());
    if (seed) sim.seed = *seed;
    const QualityModel m = parse_quality(require(doc, "quality", ""));
    const geom::ConvexPolygon omega = parse_omega(require(doc, "omega", ""));
    std::vector<NodeState> nodes = parse_nodes(require(doc, "nodes", ""), m, omega, sim.seed);
    Scenario sc{name, SwarmState{std::move(nodes), m, omega}, sim, ""};
    if (doc.contains("name")) {
      if (!doc.at("name").is_string()) throw ParseError("name: expected a string");
      sc.name = doc.at("name").get<std::string>();
    }
    sc.output_dir = "out/" + sc.name;
    if (doc.contains("output_dir")) {
      if (!doc.at("output_dir").is_string()) throw ParseError("output_dir: expected a string");
      sc.output_dir = doc.at("output_dir").get<std::string>();
    }
    sc.state.validate();
    return sc;
  } catch (const json::exception& e) {
    throw ParseError(name + ": " + e.what());
  }
}

Scenario parse_scenario(const std::filesystem::path& path, std::optional<std::uint64_t> seed) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path.stem().string(), seed);
}

std::filesystem::path bundled_scenario_dir() { return UAVCOV_SCENARIO_DIR; }

std::filesystem::path resolve_scenario(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(name_or_path)) return name_or_path;
  for (const fs::path& candidate : {bundled_scenario_dir() / name_or_path,
                                   bundled_scenario_dir() / (name_or_path + ".json")}) {
    if (fs::is_regular_file(candidate)) return candidate;
  }
  throw IoError("no scenario file or bundled scenario named " + name_or_path);
}

}  // namespace uavcov
