#include <algorithm>
#include <cmath>

#include "uavcov/geom.hpp"

namespace uavcov::geom {

RadialMoments region_moments(const ArcRegion& r, Point2 center, int order) {
  // Green's theorem with potentials F(u, v) satisfying dF/du = g:
  //   g = u          -> F = u^2 / 2
  //   g = v          -> F = u v
  //   g = u^2 + v^2  -> F = u^3 / 3 + u v^2
  // integrated as the closed line integral of F dy.
  struct Acc {
    double mu = 0.0;
    double mv = 0.0;
    double polar = 0.0;
    Acc operator+(const Acc& o) const { return {mu + o.mu, mv + o.mv, polar + o.polar}; }
    Acc operator*(double s) const { return {mu * s, mv * s, polar * s}; }
  };
  const GaussLegendre& rule = gauss_legendre(order);
  Acc total;
  r.for_each_piece([&](const BoundaryPiece& piece) {
    int panels = 1;
    if (const Arc* a = piece.arc()) {
      panels = std::max(1, static_cast<int>(std::ceil(std::abs(a->sweep) / kMaxPanelAngle)));
    }
    auto integrand = [&](double s) {
      const Point2 q = piece.at(s);
      double dy_ds = 0.0;
      if (const Arc* a = piece.arc()) {
        dy_ds = a->radius * std::cos(a->k_start + s * a->sweep) * a->sweep;
      } else {
        const Segment& g = *piece.segment();
        dy_ds = g.b.y - g.a.y;
      }
      const double u = q.x - center.x;
      const double v = q.y - center.y;
      return Acc{0.5 * u * u * dy_ds, u * v * dy_ds, (u * u * u / 3.0 + u * v * v) * dy_ds};
    };
    for (int p = 0; p < panels; ++p) {
      total = total + rule.integrate(integrand, static_cast<double>(p) / panels,
                                     static_cast<double>(p + 1) / panels);
    }
  });
  return RadialMoments{region_area(r), {total.mu, total.mv}, total.polar};
}

std::vector<WeightedPoint> grid_quadrature_points(const ArcRegion& r, int resolution, int refine) {
  std::vector<WeightedPoint> out;
  if (r.empty() || resolution < 1) return out;
  const Box box = r.bounds();
  const double hx = box.width() / resolution;
  const double hy = box.height() / resolution;
  if (!(hx > 0.0) || !(hy > 0.0)) return out;
  const double half_diag = 0.5 * std::hypot(hx, hy);
  const double cell_area = hx * hy;
  const int m = std::max(refine, 1);
  const double sub_area = cell_area / (m * m);
  for (int iy = 0; iy < resolution; ++iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      const Point2 c{box.lo.x + (ix + 0.5) * hx, box.lo.y + (iy + 0.5) * hy};
      if (distance_to_boundary(r, c) > half_diag) {
        if (point_in_region(r, c)) out.push_back({c, cell_area});
        continue;
      }
      for (int sy = 0; sy < m; ++sy) {
        for (int sx = 0; sx < m; ++sx) {
          const Point2 p{box.lo.x + (ix + (sx + 0.5) / m) * hx, box.lo.y + (iy + (sy + 0.5) / m) * hy};
          if (point_in_region(r, p)) out.push_back({p, sub_area});
        }
      }
    }
  }
  return out;
}

}  // namespace uavcov::geom
