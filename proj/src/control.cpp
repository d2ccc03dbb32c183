#include "uavcov/control.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "uavcov/errors.hpp"

namespace uavcov {

using geom::Arc;
using geom::BoundaryPiece;
using geom::Disk;
using geom::LabelKind;

JacobianData jacobian_data_on_arc(const QualityModel& m, const BoundaryPiece& piece) {
  if (piece.label.kind != LabelKind::OwnSensingCircle || !piece.arc()) return {};
  return {1.0, m.tan_a()};
}

namespace {

void line_circle(const geom::HalfPlane& line, const Disk& c, std::vector<Point2>& out) {
  const Point2 n = line.normal / geom::norm(line.normal);
  const double h = geom::dot(c.center - line.anchor, n);
  if (std::abs(h) >= c.radius) return;
  const Point2 foot = c.center - n * h;
  const double w = std::sqrt(c.radius * c.radius - h * h);
  out.push_back(foot + geom::perp(n) * w);
  out.push_back(foot - geom::perp(n) * w);
}

// Points of the circle of node i where the best competing quality
// max_j f_j can stop being smooth: crossings with the neighbors' circles
// and with the curves where two neighbors trade places.
std::vector<Point2> kink_points(const SwarmState& s, int i, const std::vector<int>& nbrs) {
  const Disk ci = s.model.sensing_disk(s.nodes[i]);
  std::vector<Point2> pts;
  auto add_circle = [&](const Disk& d) {
    try {
      const auto p = geom::circle_circle_intersection(ci, d);
      pts.insert(pts.end(), p.begin(), p.end());
    } catch (const DegenerateOverlap&) {
    }
  };
  for (int j : nbrs) add_circle(s.model.sensing_disk(s.nodes[j]));
  for (std::size_t a = 0; a < nbrs.size(); ++a) {
    for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
      const NodeState& nj = s.nodes[nbrs[a]];
      const NodeState& nk = s.nodes[nbrs[b]];
      if (geom::distance(nj.q, nk.q) <= geom::kTolerance) continue;
      const DominanceBoundary db = dominance_boundary(s.model, nj, nk);
      if (db.kind == DominanceBoundary::Kind::Circle) add_circle(db.circle);
      if (db.kind == DominanceBoundary::Kind::Bisector) line_circle(db.bisector, ci, pts);
    }
  }
  return pts;
}

struct BoundarySums {
  Point2 own_q, nbr_q;
  double own_z = 0.0, nbr_z = 0.0;
};

BoundarySums own_arc_integrals(const SwarmState& s, int i, const Cell& cell, int order) {
  const auto& m = s.model;
  const NodeState& ni = s.nodes[i];
  std::vector<int> nbrs;
  for (int id : cell.neighbor_ids) nbrs.push_back(s.index_of(id));
  const auto kinks = kink_points(s, i, nbrs);
  const GaussLegendre& rule = gauss_legendre(order);

  auto f_out = [&](Point2 q) {
    double best = 0.0;
    for (int j : nbrs) best = std::max(best, eval_quality(m, s.nodes[j], q));
    return best;
  };

  BoundarySums sums;
  cell.region.for_each_piece([&](const BoundaryPiece& piece) {
    const JacobianData jac = jacobian_data_on_arc(m, piece);
    if (jac.upsilon == 0.0) return;
    const Arc& arc = *piece.arc();
    std::vector<double> cuts{0.0, 1.0};
    for (Point2 p : kinks) {
      if (auto t = piece.parameter_of(p, 1e-8); t && *t > 1e-12 && *t < 1.0 - 1e-12) {
        cuts.push_back(*t);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    const double len = piece.length();
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double s0 = cuts[c], s1 = cuts[c + 1];
      if (s1 - s0 < 1e-14) continue;
      const bool bordering_neutral = f_out(piece.at(0.5 * (s0 + s1))) == 0.0;
      const int panels = std::max(
          1, static_cast<int>(std::ceil(std::abs(arc.sweep) * (s1 - s0) / geom::kMaxPanelAngle)));
      Point2 vq;
      double vz = 0.0;
      for (int p = 0; p < panels; ++p) {
        const double a = s0 + (s1 - s0) * p / panels;
        const double b = s0 + (s1 - s0) * (p + 1) / panels;
        for (std::size_t g = 0; g < rule.nodes().size(); ++g) {
          const double sp = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes()[g];
          const double w = 0.5 * (b - a) * rule.weights()[g] * len;
          const Point2 q = piece.at(sp);
          const double jump = eval_quality_extended(m, ni, q) - (bordering_neutral ? 0.0 : f_out(q));
          vq += piece.outward_normal(sp) * (jac.upsilon * jump * w);
          vz += jac.nu_dot_n * jump * w;
        }
      }
      if (bordering_neutral) {
        sums.own_q += vq;
        sums.own_z += vz;
      } else {
        sums.nbr_q += vq;
        sums.nbr_z += vz;
      }
    }
  });
  return sums;
}

void interior_integrals(const SwarmState& s, int i, const Cell& cell, const QuadratureConfig& quad,
                        Point2& iq, double& iz) {
  const auto& m = s.model;
  const NodeState& ni = s.nodes[i];
  if (quad.interior == InteriorMethod::Grid) {
    struct Acc {
      Point2 q;
      double z = 0.0;
      Acc operator+(const Acc& o) const { return {q + o.q, z + o.z}; }
      Acc operator*(double w) const { return {q * w, z * w}; }
    };
    const Acc acc = geom::region_area_integral(
        cell.region,
        [&](Point2 q) { return Acc{quality_grad_q(m, ni, q), quality_grad_z(m, ni, q)}; },
        quad.grid_resolution);
    iq = acc.q;
    iz = acc.z;
    return;
  }
  const auto mom = geom::region_moments(cell.region, ni.q, quad.boundary_order);
  const double A = altitude_factor(m, ni.z);
  const double dA = altitude_factor_dz(m, ni.z);
  if (m.variant == QualityVariant::Uniform) {
    iq = {0.0, 0.0};
    iz = dA * mom.area;
    return;
  }
  const double r = m.radius(ni.z);
  const double c = (1.0 - m.edge_ratio_b) / (r * r);
  iq = mom.first * (2.0 * A * c);
  iz = dA * (mom.area - c * mom.polar) + 2.0 * A * c * mom.polar / ni.z;
}

}  // namespace

ControlInput control_input(const SwarmState& s, int i, const Cell& cell, const Gains& gains,
                           const QuadratureConfig& quad) {
  const NodeState& ni = s.nodes.at(i);
  if (cell.owner != ni.id) throw StaleCells("cell belongs to a different node");
  ControlInput out;
  if (cell.region.empty()) return out;
  const BoundarySums b = own_arc_integrals(s, i, cell, quad.boundary_order);
  interior_integrals(s, i, cell, quad, out.terms.interior_q, out.terms.interior_z);
  out.terms.own_boundary_q = b.own_q;
  out.terms.neighbor_q = b.nbr_q;
  out.terms.own_boundary_z = b.own_z;
  out.terms.neighbor_z = b.nbr_z;
  out.u_q = (out.terms.own_boundary_q + out.terms.interior_q + out.terms.neighbor_q) * gains.alpha_q;
  out.u_z = (out.terms.own_boundary_z + out.terms.interior_z + out.terms.neighbor_z) * gains.alpha_z;
  return out;
}

ControlInput control_input(const SwarmState& s, int i, const std::vector<Cell>& cells,
                           const Gains& gains, const QuadratureConfig& quad) {
  if (cells.size() != s.nodes.size()) throw StaleCells("cell count does not match node count");
  const Cell& cell = cells.at(i);
  if (cell.state_fingerprint != s.fingerprint()) {
    throw StaleCells("cells were computed for a different swarm state");
  }
  return control_input(s, i, cell, gains, quad);
}

std::vector<ControlInput> all_control_inputs(const SwarmState& s, const std::vector<Cell>& cells,
                                             const Gains& gains, const QuadratureConfig& quad) {
  if (cells.size() != s.nodes.size()) throw StaleCells("cell count does not match node count");
  const auto fp = s.fingerprint();
  for (const auto& c : cells) {
    if (c.state_fingerprint != fp) throw StaleCells("cells were computed for a different swarm state");
  }
  std::vector<ControlInput> out(s.nodes.size());
  detail::parallel_for(static_cast<int>(s.nodes.size()),
                       [&](int i) { out[i] = control_input(s, i, cells[i], gains, quad); });
  return out;
}

namespace {

struct RootResult {
  double z;
  bool interior;
};

// Stable zero of a function that is positive below it and negative above.
template <typename F>
RootResult stable_root(F&& u, double lo, double hi, double tol) {
  const int samples = 32;
  if (u(lo) <= 0.0) return {lo, false};
  double a = lo;
  double b = hi;
  bool found = false;
  for (int k = 1; k <= samples; ++k) {
    const double z = lo + (hi - lo) * k / samples;
    if (u(z) < 0.0) {
      b = z;
      found = true;
      break;
    }
    a = z;
  }
  if (!found) return {hi, false};
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    if (u(mid) > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return {0.5 * (a + b), true};
}

// Top of the band used by the root searches. Quality and its z-derivative
// both vanish at z_max, so the sign of u_z is read just below it.
double search_top(const QualityModel& m) { return m.z_max - 1e-9 * (m.z_max - m.z_min); }

}  // namespace

double stable_altitude(const SwarmState& s, int i, const QuadratureConfig& quad) {
  SwarmState probe = s;
  auto u = [&](double z) {
    probe.nodes[i].z = z;
    const Cell cell = compute_cell(probe, i);
    return control_input(probe, i, cell, Gains{}, quad).u_z;
  };
  const auto r = stable_root(u, s.model.z_min, search_top(s.model), 1e-10);
  if (!r.interior && r.z != s.model.z_min) return s.model.z_max;
  return r.z;
}

OptimalAltitude optimal_altitude(const QualityModel& m) {
  const double half = 2.0 * m.radius(m.z_max) + 1.0;
  const geom::ConvexPolygon box({{-half, -half}, {half, -half}, {half, half}, {-half, half}});
  SwarmState s{{NodeState{0, {0.0, 0.0}, m.z_min}}, m, box};
  auto u = [&](double z) {
    s.nodes[0].z = z;
    const Cell cell = compute_cell(s, 0);
    return control_input(s, 0, cell, Gains{}).u_z;
  };
  const auto r = stable_root(u, m.z_min, search_top(m), 1e-10);
  if (!r.interior && r.z != m.z_min) return {m.z_max, false};
  return {r.z, r.interior};
}

}  // namespace uavcov
