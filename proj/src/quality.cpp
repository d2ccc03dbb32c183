#include "uavcov/quality.hpp"

#include <cmath>
#include <sstream>

#include "uavcov/errors.hpp"

namespace uavcov {

QualityModel QualityModel::uniform(double half_angle, double z_min, double z_max) {
  QualityModel m{half_angle, z_min, z_max, QualityVariant::Uniform, 0.0};
  m.validate();
  return m;
}

QualityModel QualityModel::paraboloid(double half_angle, double z_min, double z_max, double b) {
  QualityModel m{half_angle, z_min, z_max, QualityVariant::Paraboloid, b};
  m.validate();
  return m;
}

void QualityModel::validate() const {
  if (!(half_angle > 0.0 && half_angle < geom::kPi / 2.0)) {
    throw ValidationError("half_angle", "must lie in (0, 90) degrees");
  }
  if (!(z_min > 0.0)) throw ValidationError("z_min", "must be positive");
  if (!(z_max > z_min)) throw ValidationError("z_max", "must exceed z_min");
  if (variant == QualityVariant::Paraboloid && !(edge_ratio_b > 0.0 && edge_ratio_b < 1.0)) {
    throw ValidationError("b", "must lie in (0, 1)");
  }
}

namespace {

void check_band(const QualityModel& m, double z) {
  if (!m.in_band(z)) {
    std::ostringstream os;
    os << "altitude " << z << " outside [" << m.z_min << ", " << m.z_max << "]";
    throw AltitudeOutOfBand(os.str());
  }
}

// Curvature c of the paraboloid 1 - c rho^2.
double curvature(const QualityModel& m, double z) {
  const double r = m.radius(z);
  return (1.0 - m.edge_ratio_b) / (r * r);
}

}  // namespace

double altitude_factor(const QualityModel& m, double z) {
  const double d = z - m.z_min;
  const double D = m.z_max - m.z_min;
  const double t = d * d - D * D;
  return t * t / (D * D * D * D);
}

double altitude_factor_dz(const QualityModel& m, double z) {
  const double d = z - m.z_min;
  const double D = m.z_max - m.z_min;
  return 4.0 * d * (d * d - D * D) / (D * D * D * D);
}

double eval_quality_extended(const QualityModel& m, const NodeState& node, Point2 q) {
  check_band(m, node.z);
  const double A = altitude_factor(m, node.z);
  if (m.variant == QualityVariant::Uniform) return A;
  const Point2 d = q - node.q;
  return A * (1.0 - curvature(m, node.z) * geom::dot(d, d));
}

double eval_quality(const QualityModel& m, const NodeState& node, Point2 q) {
  check_band(m, node.z);
  // Points rounded off the rim still count as on it.
  if (geom::distance(q, node.q) > m.radius(node.z) * (1.0 + 1e-12)) return 0.0;
  return eval_quality_extended(m, node, q);
}

Point2 quality_grad_q(const QualityModel& m, const NodeState& node, Point2 q) {
  check_band(m, node.z);
  if (m.variant == QualityVariant::Uniform) return {0.0, 0.0};
  const double A = altitude_factor(m, node.z);
  return (q - node.q) * (2.0 * A * curvature(m, node.z));
}

double quality_grad_z(const QualityModel& m, const NodeState& node, Point2 q) {
  check_band(m, node.z);
  const double dA = altitude_factor_dz(m, node.z);
  if (m.variant == QualityVariant::Uniform) return dA;
  const double A = altitude_factor(m, node.z);
  const double c = curvature(m, node.z);
  const Point2 d = q - node.q;
  const double rho2 = geom::dot(d, d);
  return dA * (1.0 - c * rho2) + 2.0 * A * c * rho2 / node.z;
}

DominanceBoundary dominance_boundary(const QualityModel& m, const NodeState& i, const NodeState& j) {
  check_band(m, i.z);
  check_band(m, j.z);
  DominanceBoundary out;
  if (std::abs(i.z - j.z) <= kAltitudeTieTolerance) {
    out.kind = DominanceBoundary::Kind::Bisector;
    out.bisector = geom::HalfPlane{(i.q + j.q) * 0.5, j.q - i.q};
    out.winner_at_center = i.id;
    return out;
  }
  if (m.variant == QualityVariant::Uniform) {
    out.kind = i.z < j.z ? DominanceBoundary::Kind::Everywhere : DominanceBoundary::Kind::Nowhere;
    out.winner_at_center = i.z < j.z ? i.id : j.id;
    return out;
  }

  // f_i - f_j = k |q|^2 + 2 q.w + e = k |q - c|^2 + (e - |w|^2 / k), c = -w / k.
  const double ai = altitude_factor(m, i.z) * curvature(m, i.z);
  const double aj = altitude_factor(m, j.z) * curvature(m, j.z);
  const double k = aj - ai;
  const Point2 w = i.q * ai - j.q * aj;
  const double e = altitude_factor(m, i.z) - altitude_factor(m, j.z) - ai * geom::dot(i.q, i.q) +
                   aj * geom::dot(j.q, j.q);
  const Point2 center = w * (-1.0 / k);
  const double r2 = (geom::dot(w, w) / k - e) / k;
  if (!(r2 > 0.0)) {
    // f_i - f_j keeps the sign of k everywhere.
    out.kind = k > 0.0 ? DominanceBoundary::Kind::Everywhere : DominanceBoundary::Kind::Nowhere;
    out.winner_at_center = k > 0.0 ? i.id : j.id;
    return out;
  }
  out.kind = DominanceBoundary::Kind::Circle;
  out.circle = geom::Disk{center, std::sqrt(r2)};
  out.winner_at_center = k < 0.0 ? i.id : j.id;
  return out;
}

}  // namespace uavcov
