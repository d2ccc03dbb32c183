#pragma once

// Forward-Euler integration of the swarm under the control law and the
// coverage-quality criterion H in both its cell form and its max form.

#include <cstdint>
#include <vector>

#include "uavcov/control.hpp"

namespace uavcov {

struct SimConfig {
  double dt = 0.01;
  int steps = 1000;
  Gains gains;
  QuadratureConfig quad;
  std::uint64_t seed = 0;
  int record_every = 1;
  // Converged once every node's input norm drops below this.
  double convergence_tol = 1e-6;
  // Max-form H is evaluated at records whose step is a multiple of this
  // (0 disables it) and always at the final record.
  int max_form_every = 0;
  int max_form_resolution = 100;
  int max_form_depth = 4;

  void validate() const;
};

struct RecordedStep {
  int step = 0;
  double t = 0.0;
  std::vector<NodeState> nodes;
  std::vector<ControlInput> inputs;
  double H = 0.0;
  // NaN when not evaluated at this record.
  double H_max_form = 0.0;
  double H_max_form_bound = 0.0;
  double covered_area_ratio = 0.0;
};

struct TrajectoryLog {
  std::vector<RecordedStep> records;
  double h_opt = 0.0;
  bool converged = false;
  int steps_taken = 0;
  int clamp_activations = 0;
  int projections = 0;
};

// Sum over cells of the integral of f_i over W_i.
double evaluate_criterion(const SwarmState& s, const std::vector<Cell>& cells,
                          const QuadratureConfig& quad = {});

struct MaxFormValue {
  double value = 0.0;
  // Guaranteed bound on |value - exact|.
  double error_bound = 0.0;
};
// Integral over omega of max_i f_i by adaptive grid quadrature: cells of a
// resolution x resolution grid on omega's bounding box that meet a
// discontinuity are split up to `depth` times.
MaxFormValue evaluate_criterion_max_form(const SwarmState& s, int resolution = 200, int depth = 4);

// Criterion with n disjoint nodes at the optimal altitude.
double h_opt(const QualityModel& m, int n);

// Total cell area over the area of omega.
double covered_area_ratio(const SwarmState& s, const std::vector<Cell>& cells);

struct StepResult {
  SwarmState next;
  std::vector<Cell> cells;
  std::vector<ControlInput> inputs;
  int clamp_activations = 0;
  int projections = 0;
};
StepResult step_detailed(const SwarmState& s, const SimConfig& cfg);
SwarmState step(const SwarmState& s, const SimConfig& cfg);

TrajectoryLog run(const SwarmState& initial, const SimConfig& cfg);

// Control inputs (with unit gains) against central differences of H with
// step h in every node coordinate. The relative error of a coordinate is
// |u - fd| / max(|fd|, floor).
struct GradientCheck {
  double max_rel_error = 0.0;
  int worst_node = -1;    // index
  int worst_coord = -1;   // 0 = x, 1 = y, 2 = z
  double worst_analytic = 0.0;
  double worst_fd = 0.0;
};
GradientCheck check_gradient(const SwarmState& s, const QuadratureConfig& quad = {}, double h = 1e-5,
                             double floor = 1e-6);

}  // namespace uavcov
