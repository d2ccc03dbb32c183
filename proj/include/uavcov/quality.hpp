#pragma once

// Coverage-quality functions of a downward-looking conic sensor, their
// derivatives with respect to the node pose, and the pairwise dominance
// boundaries f_i = f_j.

#include "uavcov/geom.hpp"

namespace uavcov {

using geom::Point2;

struct NodeState {
  int id = 0;
  Point2 q;
  double z = 0.0;
};

enum class QualityVariant { Uniform, Paraboloid };

struct QualityModel {
  double half_angle = 0.0;  // radians
  double z_min = 0.0;
  double z_max = 0.0;
  QualityVariant variant = QualityVariant::Uniform;
  double edge_ratio_b = 0.0;  // only used by Paraboloid

  static QualityModel uniform(double half_angle, double z_min, double z_max);
  static QualityModel paraboloid(double half_angle, double z_min, double z_max, double b);

  // Throws ValidationError naming the offending field.
  void validate() const;

  double tan_a() const { return std::tan(half_angle); }
  double radius(double z) const { return z * tan_a(); }
  geom::Disk sensing_disk(const NodeState& n) const { return {n.q, radius(n.z)}; }
  bool in_band(double z, double tol = 1e-12) const {
    return z >= z_min - tol && z <= z_max + tol;
  }
};

// Peak quality at altitude z (the uniform quality value):
// ((z - z_min)^2 - D^2)^2 / D^4 with D = z_max - z_min.
double altitude_factor(const QualityModel& m, double z);
double altitude_factor_dz(const QualityModel& m, double z);

// f_i(q). Zero outside the closed sensing disk; on its boundary the inside
// value is returned. Throws AltitudeOutOfBand.
double eval_quality(const QualityModel& m, const NodeState& node, Point2 q);
// f_i extended past the disk by its inside formula (may be negative for
// the paraboloid).
double eval_quality_extended(const QualityModel& m, const NodeState& node, Point2 q);
// Partial derivatives of f_i(q) with respect to q_i and z_i, inside the disk.
Point2 quality_grad_q(const QualityModel& m, const NodeState& node, Point2 q);
double quality_grad_z(const QualityModel& m, const NodeState& node, Point2 q);

// Altitudes closer than this are treated as a tie.
inline constexpr double kAltitudeTieTolerance = 1e-9;

// Where node i beats node j (f_i >= f_j), restricted to C_i.
//   Everywhere: all of C_i (i is lower).
//   Nowhere:    none of C_i n C_j (i is higher, uniform quality).
//   Circle:     the disk `circle` is won by winner_at_center, its
//               complement by the other node.
//   Bisector:   the half-plane `bisector` (q_i's side) is won by i.
struct DominanceBoundary {
  enum class Kind { Circle, Bisector, Everywhere, Nowhere };
  Kind kind = Kind::Everywhere;
  geom::Disk circle;
  geom::HalfPlane bisector;
  int winner_at_center = -1;
};

DominanceBoundary dominance_boundary(const QualityModel& m, const NodeState& i, const NodeState& j);

}  // namespace uavcov
