#include "uavcov/uavcov.h"

#include <cmath>
#include <string>

#include "uavcov/errors.hpp"
#include "uavcov/io.hpp"
#include "uavcov/scenario.hpp"

struct uavcov_scenario {
  uavcov::Scenario scenario;
};

struct uavcov_trajectory {
  uavcov::TrajectoryLog log;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_field;

uavcov_status fail(uavcov_status code, const std::string& what, const std::string& field = "") {
  last_error = what;
  last_field = field;
  return code;
}

// Runs body and maps exceptions onto status codes.
template <typename F>
uavcov_status guarded(F&& body) {
  last_error.clear();
  last_field.clear();
  try {
    body();
    return UAVCOV_OK;
  } catch (const uavcov::ValidationError& e) {
    return fail(UAVCOV_ERR_VALIDATION, e.what(), e.field());
  } catch (const uavcov::ParseError& e) {
    return fail(UAVCOV_ERR_PARSE, e.what());
  } catch (const uavcov::IoError& e) {
    return fail(UAVCOV_ERR_IO, e.what());
  } catch (const uavcov::GeometryError& e) {
    return fail(UAVCOV_ERR_GEOMETRY, e.what());
  } catch (const uavcov::AltitudeOutOfBand& e) {
    return fail(UAVCOV_ERR_ALTITUDE, e.what());
  } catch (const uavcov::StaleCells& e) {
    return fail(UAVCOV_ERR_STALE, e.what());
  } catch (const std::exception& e) {
    return fail(UAVCOV_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(UAVCOV_ERR_INTERNAL, "unknown error");
  }
}

uavcov_node to_c(const uavcov::NodeState& n) { return {n.id, n.q.x, n.q.y, n.z}; }

}  // namespace

#define UAVCOV_ARGCHECK(cond, msg) \
  do {                             \
    if (!(cond)) return fail(UAVCOV_ERR_ARGUMENT, msg); \
  } while (0)

extern "C" {

const char* uavcov_version(void) { return "1.0.0"; }
const char* uavcov_last_error(void) { return last_error.c_str(); }
const char* uavcov_last_error_field(void) { return last_field.c_str(); }

uavcov_status uavcov_scenario_load(const char* name_or_path, const uint64_t* seed, uavcov_scenario** out) {
  UAVCOV_ARGCHECK(name_or_path && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::optional<std::uint64_t> s;
    if (seed) s = *seed;
    auto sc = uavcov::parse_scenario(uavcov::resolve_scenario(name_or_path), s);
    *out = new uavcov_scenario{std::move(sc)};
  });
}

uavcov_status uavcov_scenario_from_json(const char* json_text, const char* name, const uint64_t* seed,
                                        uavcov_scenario** out) {
  UAVCOV_ARGCHECK(json_text && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::optional<std::uint64_t> s;
    if (seed) s = *seed;
    auto sc = uavcov::parse_scenario_text(json_text, name ? name : "scenario", s);
    *out = new uavcov_scenario{std::move(sc)};
  });
}

void uavcov_scenario_free(uavcov_scenario* scenario) { delete scenario; }

const char* uavcov_scenario_name(const uavcov_scenario* scenario) {
  return scenario ? scenario->scenario.name.c_str() : "";
}

const char* uavcov_scenario_output_dir(const uavcov_scenario* scenario) {
  return scenario ? scenario->scenario.output_dir.c_str() : "";
}

size_t uavcov_scenario_node_count(const uavcov_scenario* scenario) {
  return scenario ? scenario->scenario.state.nodes.size() : 0;
}

uavcov_status uavcov_scenario_nodes(const uavcov_scenario* scenario, uavcov_node* out, size_t capacity) {
  UAVCOV_ARGCHECK(scenario && out, "null argument");
  const auto& nodes = scenario->scenario.state.nodes;
  UAVCOV_ARGCHECK(capacity >= nodes.size(), "output buffer too small");
  for (std::size_t k = 0; k < nodes.size(); ++k) out[k] = to_c(nodes[k]);
  return UAVCOV_OK;
}

uavcov_status uavcov_scenario_set_nodes(uavcov_scenario* scenario, const uavcov_node* nodes, size_t count) {
  UAVCOV_ARGCHECK(scenario && (nodes || count == 0), "null argument");
  return guarded([&] {
    uavcov::SwarmState next = scenario->scenario.state;
    next.nodes.clear();
    for (std::size_t k = 0; k < count; ++k) next.nodes.push_back({nodes[k].id, {nodes[k].x, nodes[k].y}, nodes[k].z});
    next.validate();
    scenario->scenario.state = std::move(next);
  });
}

uavcov_status uavcov_scenario_settings(const uavcov_scenario* scenario, uavcov_sim_settings* out) {
  UAVCOV_ARGCHECK(scenario && out, "null argument");
  const auto& c = scenario->scenario.sim;
  *out = {c.dt,
          c.steps,
          c.record_every,
          c.gains.alpha_q,
          c.gains.alpha_z,
          c.convergence_tol,
          c.quad.boundary_order,
          c.quad.grid_resolution,
          c.quad.interior == uavcov::InteriorMethod::Grid ? 1 : 0,
          c.max_form_every,
          c.max_form_resolution,
          c.max_form_depth,
          c.seed};
  return UAVCOV_OK;
}

uavcov_status uavcov_scenario_set_settings(uavcov_scenario* scenario, const uavcov_sim_settings* s) {
  UAVCOV_ARGCHECK(scenario && s, "null argument");
  return guarded([&] {
    uavcov::SimConfig c;
    c.dt = s->dt;
    c.steps = s->steps;
    c.record_every = s->record_every;
    c.gains = {s->alpha_q, s->alpha_z};
    c.convergence_tol = s->convergence_tol;
    c.quad.boundary_order = s->boundary_order;
    c.quad.grid_resolution = s->grid_resolution;
    c.quad.interior = s->interior_grid ? uavcov::InteriorMethod::Grid : uavcov::InteriorMethod::Exact;
    c.max_form_every = s->max_form_every;
    c.max_form_resolution = s->max_form_resolution;
    c.max_form_depth = s->max_form_depth;
    c.seed = s->seed;
    c.validate();
    if (!(c.convergence_tol > 0.0)) throw uavcov::ValidationError("sim.convergence_tol", "must be positive");
    scenario->scenario.sim = c;
  });
}

uavcov_status uavcov_optimal_altitude(const uavcov_scenario* scenario, double* z_opt, int* interior_root,
                                      double* h_opt) {
  UAVCOV_ARGCHECK(scenario && z_opt, "null argument");
  return guarded([&] {
    const auto& st = scenario->scenario.state;
    const auto o = uavcov::optimal_altitude(st.model);
    *z_opt = o.z;
    if (interior_root) *interior_root = o.interior_root ? 1 : 0;
    if (h_opt) *h_opt = uavcov::h_opt(st.model, static_cast<int>(st.nodes.size()));
  });
}

uavcov_status uavcov_criterion(const uavcov_scenario* scenario, double* H) {
  UAVCOV_ARGCHECK(scenario && H, "null argument");
  return guarded([&] {
    const auto& st = scenario->scenario.state;
    *H = uavcov::evaluate_criterion(st, uavcov::compute_all_cells(st), scenario->scenario.sim.quad);
  });
}

uavcov_status uavcov_criterion_max_form(const uavcov_scenario* scenario, int resolution, int depth,
                                        double* value, double* error_bound) {
  UAVCOV_ARGCHECK(scenario && value, "null argument");
  UAVCOV_ARGCHECK(resolution >= 1 && depth >= 0, "resolution must be >= 1 and depth >= 0");
  return guarded([&] {
    const auto mf = uavcov::evaluate_criterion_max_form(scenario->scenario.state, resolution, depth);
    *value = mf.value;
    if (error_bound) *error_bound = mf.error_bound;
  });
}

uavcov_status uavcov_cell_areas(const uavcov_scenario* scenario, double* out, size_t capacity) {
  UAVCOV_ARGCHECK(scenario && out, "null argument");
  UAVCOV_ARGCHECK(capacity >= scenario->scenario.state.nodes.size(), "output buffer too small");
  return guarded([&] {
    const auto cells = uavcov::compute_all_cells(scenario->scenario.state);
    for (std::size_t k = 0; k < cells.size(); ++k) out[k] = uavcov::geom::region_area(cells[k].region);
  });
}

uavcov_status uavcov_control_inputs(const uavcov_scenario* scenario, uavcov_control* out, size_t capacity) {
  UAVCOV_ARGCHECK(scenario && out, "null argument");
  UAVCOV_ARGCHECK(capacity >= scenario->scenario.state.nodes.size(), "output buffer too small");
  return guarded([&] {
    const auto& sc = scenario->scenario;
    const auto cells = uavcov::compute_all_cells(sc.state);
    const auto u = uavcov::all_control_inputs(sc.state, cells, sc.sim.gains, sc.sim.quad);
    for (std::size_t k = 0; k < u.size(); ++k) {
      const auto& t = u[k].terms;
      out[k] = {u[k].u_q.x,           u[k].u_q.y,           u[k].u_z,
                t.own_boundary_q.x,   t.own_boundary_q.y,   t.own_boundary_z,
                t.interior_q.x,       t.interior_q.y,       t.interior_z,
                t.neighbor_q.x,       t.neighbor_q.y,       t.neighbor_z};
    }
  });
}

uavcov_status uavcov_stable_altitude(const uavcov_scenario* scenario, size_t index, double* z) {
  UAVCOV_ARGCHECK(scenario && z, "null argument");
  UAVCOV_ARGCHECK(index < scenario->scenario.state.nodes.size(), "node index out of range");
  return guarded([&] {
    *z = uavcov::stable_altitude(scenario->scenario.state, static_cast<int>(index), scenario->scenario.sim.quad);
  });
}

uavcov_status uavcov_check_gradient(const uavcov_scenario* scenario, double* max_rel_error) {
  UAVCOV_ARGCHECK(scenario && max_rel_error, "null argument");
  return guarded([&] {
    *max_rel_error = uavcov::check_gradient(scenario->scenario.state, scenario->scenario.sim.quad).max_rel_error;
  });
}

uavcov_status uavcov_criterion_from_csv(const uavcov_scenario* scenario, const char* csv_path, double* H) {
  UAVCOV_ARGCHECK(scenario && csv_path && H, "null argument");
  return guarded([&] {
    uavcov::SwarmState st = scenario->scenario.state;
    st.nodes = uavcov::final_nodes_from_csv(csv_path);
    *H = uavcov::evaluate_criterion(st, uavcov::compute_all_cells(st), scenario->scenario.sim.quad);
  });
}

uavcov_status uavcov_run(const uavcov_scenario* scenario, uavcov_trajectory** out) {
  UAVCOV_ARGCHECK(scenario && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto log = uavcov::run(scenario->scenario.state, scenario->scenario.sim);
    *out = new uavcov_trajectory{std::move(log)};
  });
}

void uavcov_trajectory_free(uavcov_trajectory* trajectory) { delete trajectory; }

uavcov_status uavcov_trajectory_summary(const uavcov_trajectory* trajectory, uavcov_run_summary* out) {
  UAVCOV_ARGCHECK(trajectory && out, "null argument");
  const auto& l = trajectory->log;
  *out = {l.h_opt, l.converged ? 1 : 0, l.steps_taken, l.clamp_activations, l.projections};
  return UAVCOV_OK;
}

size_t uavcov_trajectory_record_count(const uavcov_trajectory* trajectory) {
  return trajectory ? trajectory->log.records.size() : 0;
}

uavcov_status uavcov_trajectory_record(const uavcov_trajectory* trajectory, size_t index, uavcov_record* out) {
  UAVCOV_ARGCHECK(trajectory && out, "null argument");
  UAVCOV_ARGCHECK(index < trajectory->log.records.size(), "record index out of range");
  const auto& r = trajectory->log.records[index];
  *out = {r.step, r.t, r.H, r.H_max_form, r.H_max_form_bound, r.covered_area_ratio};
  return UAVCOV_OK;
}

uavcov_status uavcov_trajectory_nodes(const uavcov_trajectory* trajectory, size_t index, uavcov_node* out,
                                      size_t capacity) {
  UAVCOV_ARGCHECK(trajectory && out, "null argument");
  UAVCOV_ARGCHECK(index < trajectory->log.records.size(), "record index out of range");
  const auto& nodes = trajectory->log.records[index].nodes;
  UAVCOV_ARGCHECK(capacity >= nodes.size(), "output buffer too small");
  for (std::size_t k = 0; k < nodes.size(); ++k) out[k] = to_c(nodes[k]);
  return UAVCOV_OK;
}

uavcov_status uavcov_write_trajectory_csv(const uavcov_trajectory* trajectory, const char* path) {
  UAVCOV_ARGCHECK(trajectory && path, "null argument");
  return guarded([&] { uavcov::write_trajectory_csv(trajectory->log, path); });
}

uavcov_status uavcov_write_metrics_json(const uavcov_trajectory* trajectory, const char* path) {
  UAVCOV_ARGCHECK(trajectory && path, "null argument");
  return guarded([&] { uavcov::write_metrics_json(trajectory->log, path); });
}

uavcov_status uavcov_write_snapshot_svg(const uavcov_scenario* scenario, const uavcov_trajectory* trajectory,
                                        size_t record_index, const char* path) {
  UAVCOV_ARGCHECK(scenario && trajectory && path, "null argument");
  UAVCOV_ARGCHECK(record_index < trajectory->log.records.size(), "record index out of range");
  return guarded([&] {
    uavcov::SwarmState st = scenario->scenario.state;
    st.nodes = trajectory->log.records[record_index].nodes;
    uavcov::write_snapshot_svg(st, uavcov::compute_all_cells(st), path);
  });
}

}  // extern "C"
