#pragma once

// Gradient control law for the coverage-quality criterion: the planar
// input u_q and the altitude input u_z of every node, evaluated as boundary
// plus interior integrals over its cell.

#include <vector>

#include "uavcov/partition.hpp"

namespace uavcov {

struct Gains {
  double alpha_q = 1.0;
  double alpha_z = 1.0;
};

enum class InteriorMethod {
  Exact,  // closed-form moments through Green's theorem
  Grid,   // grid quadrature of the analytic gradients
};

struct QuadratureConfig {
  int boundary_order = 16;
  int grid_resolution = 200;
  InteriorMethod interior = InteriorMethod::Exact;
};

struct ControlTerms {
  Point2 own_boundary_q;
  Point2 interior_q;
  Point2 neighbor_q;
  double own_boundary_z = 0.0;
  double interior_z = 0.0;
  double neighbor_z = 0.0;
};

struct ControlInput {
  Point2 u_q;
  double u_z = 0.0;
  ControlTerms terms;

  double magnitude() const { return std::sqrt(geom::dot(u_q, u_q) + u_z * u_z); }
};

// Jacobian data of a boundary piece of W_i with respect to node i's pose:
// upsilon is a multiple of the 2x2 identity, nu_dot_n the altitude rate.
struct JacobianData {
  double upsilon = 0.0;
  double nu_dot_n = 0.0;
};
// Only node i's own sensing circle moves with (q_i, z_i).
JacobianData jacobian_data_on_arc(const QualityModel& m, const geom::BoundaryPiece& piece);

// Input of the node at index i. `cells` must come from compute_all_cells
// on this same state; otherwise StaleCells is thrown.
ControlInput control_input(const SwarmState& s, int i, const std::vector<Cell>& cells,
                           const Gains& gains, const QuadratureConfig& quad = {});
// Same, for a cell computed on its own.
ControlInput control_input(const SwarmState& s, int i, const Cell& cell, const Gains& gains,
                           const QuadratureConfig& quad = {});
std::vector<ControlInput> all_control_inputs(const SwarmState& s, const std::vector<Cell>& cells,
                                             const Gains& gains, const QuadratureConfig& quad = {});

// Altitude where u_z of node i vanishes with every other node held fixed.
// Returns z_min when u_z <= 0 at z_min and z_max when u_z never turns
// negative inside the band.
double stable_altitude(const SwarmState& s, int i, const QuadratureConfig& quad = {});

struct OptimalAltitude {
  double z = 0.0;
  // False when u_z of an isolated node has no sign change inside the band;
  // z is then the band endpoint it drifts to.
  bool interior_root = true;
};
OptimalAltitude optimal_altitude(const QualityModel& m);

}  // namespace uavcov
