#include "uavcov/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "log.hpp"
#include "uavcov/errors.hpp"

namespace uavcov {

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw ValidationError("sim.dt", "must be positive");
  if (steps < 1) throw ValidationError("sim.steps", "must be at least 1");
  if (!(gains.alpha_q > 0.0)) throw ValidationError("sim.alpha_q", "must be positive");
  if (!(gains.alpha_z > 0.0)) throw ValidationError("sim.alpha_z", "must be positive");
  if (record_every < 1) throw ValidationError("sim.record_every", "must be at least 1");
  if (quad.boundary_order < 1) throw ValidationError("sim.boundary_order", "must be at least 1");
  if (quad.grid_resolution < 1) throw ValidationError("sim.grid_resolution", "must be at least 1");
  if (max_form_resolution < 1) throw ValidationError("sim.max_form_resolution", "must be at least 1");
  if (max_form_depth < 0) throw ValidationError("sim.max_form_depth", "must be non-negative");
}

double evaluate_criterion(const SwarmState& s, const std::vector<Cell>& cells,
                          const QuadratureConfig& quad) {
  double H = 0.0;
  for (std::size_t i = 0; i < s.nodes.size() && i < cells.size(); ++i) {
    const Cell& cell = cells[i];
    if (cell.region.empty()) continue;
    const NodeState& n = s.nodes[i];
    if (quad.interior == InteriorMethod::Grid) {
      H += geom::region_area_integral(
          cell.region, [&](Point2 q) { return eval_quality_extended(s.model, n, q); },
          quad.grid_resolution);
      continue;
    }
    const double A = altitude_factor(s.model, n.z);
    if (s.model.variant == QualityVariant::Uniform) {
      H += A * geom::region_area(cell.region);
    } else {
      const auto mom = geom::region_moments(cell.region, n.q, quad.boundary_order);
      const double r = s.model.radius(n.z);
      H += A * (mom.area - (1.0 - s.model.edge_ratio_b) / (r * r) * mom.polar);
    }
  }
  return H;
}

namespace {

struct MaxFormIntegrator {
  const SwarmState& s;
  int max_depth;
  std::vector<double> radius, peak, curv, lipschitz;
  double value = 0.0;
  double bound = 0.0;

  explicit MaxFormIntegrator(const SwarmState& st, int depth) : s(st), max_depth(depth) {
    const bool para = s.model.variant == QualityVariant::Paraboloid;
    for (const auto& n : s.nodes) {
      const double r = s.model.radius(n.z);
      const double A = altitude_factor(s.model, n.z);
      const double c = para ? (1.0 - s.model.edge_ratio_b) / (r * r) : 0.0;
      radius.push_back(r);
      peak.push_back(A);
      curv.push_back(c);
      lipschitz.push_back(2.0 * A * c * r);
    }
  }

  void cell(Point2 c, double hx, double hy, int depth) {
    const double hd = 0.5 * std::hypot(hx, hy);
    const double sd = s.omega.signed_distance(c);
    if (sd >= hd) return;
    bool crossed = sd > -hd;
    double local_peak = 0.0;
    double best = 0.0, second = 0.0, best_curv = 0.0, lip = 0.0;
    int covering = 0;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
      const double d = geom::distance(c, s.nodes[i].q);
      if (d >= radius[i] + hd) continue;
      local_peak = std::max(local_peak, peak[i]);
      if (d > radius[i] - hd) {
        crossed = true;
        continue;
      }
      ++covering;
      lip = std::max(lip, lipschitz[i]);
      const double f = peak[i] * (1.0 - curv[i] * d * d);
      if (f > best) {
        second = best;
        best = f;
        best_curv = peak[i] * curv[i];
      } else if (f > second) {
        second = f;
      }
    }
    // Two competing paraboloids may trade places inside the cell.
    if (!crossed && covering >= 2 && lip > 0.0 && best - second <= 2.0 * lip * hd) crossed = true;
    const double area = hx * hy;
    if (crossed && depth < max_depth) {
      for (int sy = 0; sy < 2; ++sy) {
        for (int sx = 0; sx < 2; ++sx) {
          cell({c.x + (sx - 0.5) * 0.5 * hx, c.y + (sy - 0.5) * 0.5 * hy}, 0.5 * hx, 0.5 * hy,
               depth + 1);
        }
      }
      return;
    }
    if (crossed) {
      double g = 0.0;
      if (sd <= 0.0) {
        for (const auto& n : s.nodes) g = std::max(g, eval_quality(s.model, n, c));
      }
      value += area * g;
      bound += area * local_peak;
      return;
    }
    // The winning quadratic is integrated exactly over the rectangle.
    value += area * (best - best_curv * (hx * hx + hy * hy) / 12.0);
  }
};

}  // namespace

MaxFormValue evaluate_criterion_max_form(const SwarmState& s, int resolution, int depth) {
  if (s.nodes.empty() || resolution < 1) return {};
  const geom::Box box = s.omega.bounds();
  const double hx = box.width() / resolution;
  const double hy = box.height() / resolution;
  MaxFormIntegrator integ(s, depth);
  for (int iy = 0; iy < resolution; ++iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      integ.cell({box.lo.x + (ix + 0.5) * hx, box.lo.y + (iy + 0.5) * hy}, hx, hy, 0);
    }
  }
  // Summation round-off, far below the discretization term.
  return {integ.value, integ.bound + 1e-12 * std::abs(integ.value)};
}

double h_opt(const QualityModel& m, int n) {
  if (n <= 0) return 0.0;
  const double z = optimal_altitude(m).z;
  const double r = m.radius(z);
  const double disk = geom::kPi * r * r;
  const double A = altitude_factor(m, z);
  const double single =
      m.variant == QualityVariant::Uniform ? A * disk : A * disk * 0.5 * (1.0 + m.edge_ratio_b);
  return n * single;
}

double covered_area_ratio(const SwarmState& s, const std::vector<Cell>& cells) {
  double covered = 0.0;
  for (const auto& c : cells) covered += geom::region_area(c.region);
  return covered / s.omega.area();
}

StepResult step_detailed(const SwarmState& s, const SimConfig& cfg) {
  StepResult out{s, compute_all_cells(s), {}, 0, 0};
  out.inputs = all_control_inputs(s, out.cells, cfg.gains, cfg.quad);
  const double eps = 1e-9;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    NodeState& n = out.next.nodes[i];
    const ControlInput& u = out.inputs[i];
    Point2 q = n.q + u.u_q * cfg.dt;
    if (!s.omega.contains(q)) {
      q = s.omega.project(q);
      ++out.projections;
    }
    n.q = q;
    if (u.u_z == 0.0) continue;
    double z = n.z + u.u_z * cfg.dt;
    const double lo = s.model.z_min + eps;
    const double hi = s.model.z_max - eps;
    if (z < lo || z > hi) {
      z = std::clamp(z, lo, hi);
      ++out.clamp_activations;
    }
    n.z = z;
  }
  return out;
}

SwarmState step(const SwarmState& s, const SimConfig& cfg) { return step_detailed(s, cfg).next; }

TrajectoryLog run(const SwarmState& initial, const SimConfig& cfg) {
  cfg.validate();
  initial.validate();
  TrajectoryLog log;
  if (initial.nodes.empty()) {
    log.converged = true;
    log.records.push_back({0, 0.0, {}, {}, 0.0, 0.0, 0.0, 0.0});
    return log;
  }
  for (const auto& [inner, outer] : contained_pairs(initial)) {
    log::get().warn("sensing disk of node {} lies inside that of node {}; the pair may never separate",
                    initial.nodes[inner].id, initial.nodes[outer].id);
  }
  log.h_opt = h_opt(initial.model, static_cast<int>(initial.nodes.size()));

  auto record = [&](int k, const SwarmState& s, const StepResult& r, bool final_record) {
    RecordedStep rec;
    rec.step = k;
    rec.t = k * cfg.dt;
    rec.nodes = s.nodes;
    rec.inputs = r.inputs;
    rec.H = evaluate_criterion(s, r.cells, cfg.quad);
    rec.covered_area_ratio = covered_area_ratio(s, r.cells);
    const bool max_form = final_record || (cfg.max_form_every > 0 && k % cfg.max_form_every == 0);
    if (max_form) {
      const auto mf = evaluate_criterion_max_form(s, cfg.max_form_resolution, cfg.max_form_depth);
      rec.H_max_form = mf.value;
      rec.H_max_form_bound = mf.error_bound;
    } else {
      rec.H_max_form = std::numeric_limits<double>::quiet_NaN();
      rec.H_max_form_bound = std::numeric_limits<double>::quiet_NaN();
    }
    log.records.push_back(std::move(rec));
  };

  SwarmState s = initial;
  for (int k = 0;; ++k) {
    StepResult r = step_detailed(s, cfg);
    double worst = 0.0;
    for (const auto& u : r.inputs) worst = std::max(worst, u.magnitude());
    const bool converged = worst < cfg.convergence_tol;
    const bool last = converged || k == cfg.steps;
    if (last || k % cfg.record_every == 0) record(k, s, r, last);
    if (last) {
      log.converged = converged;
      log.steps_taken = k;
      break;
    }
    log.clamp_activations += r.clamp_activations;
    log.projections += r.projections;
    s = std::move(r.next);
    log::get().debug("step {} max |u| = {:.3e}", k, worst);
  }
  log::get().info("run finished after {} steps, converged = {}", log.steps_taken, log.converged);
  return log;
}

GradientCheck check_gradient(const SwarmState& s, const QuadratureConfig& quad, double h, double floor) {
  GradientCheck out;
  const auto cells = compute_all_cells(s);
  const auto inputs = all_control_inputs(s, cells, Gains{}, quad);
  auto H = [&](const SwarmState& p) { return evaluate_criterion(p, compute_all_cells(p), quad); };
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      SwarmState plus = s, minus = s;
      auto bump = [&](NodeState& n, double d) {
        if (c == 0) n.q.x += d;
        if (c == 1) n.q.y += d;
        if (c == 2) n.z += d;
      };
      bump(plus.nodes[i], h);
      bump(minus.nodes[i], -h);
      const double fd = (H(plus) - H(minus)) / (2.0 * h);
      const double an = c == 0 ? inputs[i].u_q.x : c == 1 ? inputs[i].u_q.y : inputs[i].u_z;
      const double err = std::abs(an - fd) / std::max(std::abs(fd), floor);
      if (err >= out.max_rel_error) {
        out = {err, static_cast<int>(i), c, an, fd};
      }
    }
  }
  return out;
}

}  // namespace uavcov
