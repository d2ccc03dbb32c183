#include "uavcov/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uavcov/errors.hpp"

namespace uavcov::geom {

double wrap_angle(double k) {
  double w = std::remainder(k, kTwoPi);  // [-pi, pi]
  if (w <= -kPi) w += kTwoPi;
  return w;
}

namespace {

// Non-negative remainder in [0, 2*pi).
double positive_angle(double k) {
  double w = std::fmod(k, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double segment_distance(Point2 a, Point2 b, Point2 p) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(a, p);
  const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return distance(a + d * t, p);
}

Point2 segment_closest(Point2 a, Point2 b, Point2 p) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return a + d * t;
}

}  // namespace

// --- Box -------------------------------------------------------------------

void Box::include(Point2 p) {
  lo.x = std::min(lo.x, p.x);
  lo.y = std::min(lo.y, p.y);
  hi.x = std::max(hi.x, p.x);
  hi.y = std::max(hi.y, p.y);
}

void Box::include(const Box& b) {
  if (!b.valid()) return;
  include(b.lo);
  include(b.hi);
}

Box Box::expanded(double margin) const {
  Box out = *this;
  out.lo.x -= margin;
  out.lo.y -= margin;
  out.hi.x += margin;
  out.hi.y += margin;
  return out;
}

bool Box::overlaps(const Box& o) const {
  return valid() && o.valid() && lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y &&
         o.lo.y <= hi.y;
}

// --- ConvexPolygon ---------------------------------------------------------

ConvexPolygon::ConvexPolygon(std::vector<Point2> ccw_vertices) : vertices_(std::move(ccw_vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw GeometryError("convex polygon needs at least 3 vertices");
  for (const auto& v : vertices_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw GeometryError("convex polygon has a non-finite vertex");
    }
  }
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices_[i];
    const Point2 b = vertices_[(i + 1) % n];
    const Point2 c = vertices_[(i + 2) % n];
    const Point2 e1 = b - a;
    const Point2 e2 = c - b;
    if (cross(e1, e2) <= 0.0) {
      throw GeometryError("convex polygon vertices must be counterclockwise and strictly convex");
    }
    turning += std::atan2(cross(e1, e2), dot(e1, e2));
  }
  // A star polygon turns by a multiple of 2*pi larger than one.
  if (std::abs(turning - kTwoPi) > 1e-6) {
    throw GeometryError("convex polygon is self-intersecting");
  }
}

double ConvexPolygon::area() const {
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    twice += cross(vertex(i), vertex(i + 1));
  }
  return 0.5 * twice;
}

Box ConvexPolygon::bounds() const {
  Box b;
  for (const auto& v : vertices_) b.include(v);
  return b;
}

bool ConvexPolygon::contains(Point2 p, double slack) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Point2 a = vertex(i);
    const Point2 e = vertex(i + 1) - a;
    if (cross(e, p - a) / norm(e) < -slack) return false;
  }
  return true;
}

double ConvexPolygon::signed_distance(Point2 p) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    best = std::min(best, segment_distance(vertex(i), vertex(i + 1), p));
  }
  return contains(p) ? -best : best;
}

Point2 ConvexPolygon::project(Point2 p) const {
  if (contains(p)) return p;
  Point2 best_point = vertices_.front();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Point2 c = segment_closest(vertex(i), vertex(i + 1), p);
    const double d = distance(c, p);
    if (d < best) {
      best = d;
      best_point = c;
    }
  }
  return best_point;
}

// --- Arc / labels ----------------------------------------------------------

Arc Arc::full_circle(Point2 center, double radius, Orientation o) {
  if (!(radius > 0.0)) throw GeometryError("circle radius must be positive");
  return Arc{center, radius, kPi, o == Orientation::Ccw ? kTwoPi : -kTwoPi};
}

const char* to_string(LabelKind kind) {
  switch (kind) {
    case LabelKind::OwnSensingCircle: return "own";
    case LabelKind::WorldBoundary: return "world";
    case LabelKind::DominanceVs: return "dominance";
    case LabelKind::TieBisectorVs: return "tie";
  }
  return "?";
}

// --- BoundaryPiece -----------------------------------------------------------

double BoundaryPiece::length() const {
  if (const Arc* a = arc()) return a->radius * std::abs(a->sweep);
  const Segment& s = std::get<Segment>(geometry);
  return distance(s.a, s.b);
}

Point2 BoundaryPiece::at(double s) const {
  if (const Arc* a = arc()) return a->point_at_angle(a->k_start + s * a->sweep);
  const Segment& g = std::get<Segment>(geometry);
  return g.a + (g.b - g.a) * s;
}

Point2 BoundaryPiece::tangent(double s) const {
  if (const Arc* a = arc()) {
    const double k = a->k_start + s * a->sweep;
    const double dir = a->sweep >= 0.0 ? 1.0 : -1.0;
    return {-dir * std::sin(k), dir * std::cos(k)};
  }
  const Segment& g = std::get<Segment>(geometry);
  return (g.b - g.a) / distance(g.a, g.b);
}

Point2 BoundaryPiece::outward_normal(double s) const {
  const Point2 t = tangent(s);
  return {t.y, -t.x};
}

BoundaryPiece BoundaryPiece::sub(double s0, double s1) const {
  if (const Arc* a = arc()) {
    Arc out = *a;
    out.k_start = wrap_angle(a->k_start + s0 * a->sweep);
    out.sweep = (s1 - s0) * a->sweep;
    return {out, label};
  }
  return {Segment{at(s0), at(s1)}, label};
}

BoundaryPiece BoundaryPiece::reversed() const {
  if (const Arc* a = arc()) {
    Arc out = *a;
    out.k_start = wrap_angle(a->k_start + a->sweep);
    out.sweep = -a->sweep;
    return {out, label};
  }
  const Segment& g = std::get<Segment>(geometry);
  return {Segment{g.b, g.a}, label};
}

Box BoundaryPiece::bounds() const {
  Box b;
  b.include(start());
  b.include(end());
  if (const Arc* a = arc()) {
    // Axis-extreme points that fall inside the swept range.
    const double lo = std::min(a->k_start, a->k_start + a->sweep);
    const double hi = std::max(a->k_start, a->k_start + a->sweep);
    for (int q = -8; q <= 8; ++q) {
      const double k = q * kPi / 2.0;
      if (k >= lo && k <= hi) b.include(a->point_at_angle(k));
    }
  }
  return b;
}

double BoundaryPiece::distance_to(Point2 p) const {
  if (const Arc* a = arc()) {
    const Point2 d = p - a->center;
    const double rho = norm(d);
    if (rho == 0.0) return a->radius;
    const double k = std::atan2(d.y, d.x);
    const double delta =
        a->sweep >= 0.0 ? positive_angle(k - a->k_start) : positive_angle(a->k_start - k);
    if (delta <= std::abs(a->sweep)) return std::abs(rho - a->radius);
    return std::min(distance(p, start()), distance(p, end()));
  }
  const Segment& g = std::get<Segment>(geometry);
  return segment_distance(g.a, g.b, p);
}

std::optional<double> BoundaryPiece::parameter_of(Point2 p, double tol) const {
  if (const Arc* a = arc()) {
    const Point2 d = p - a->center;
    if (std::abs(norm(d) - a->radius) > tol) return std::nullopt;
    const double k = std::atan2(d.y, d.x);
    const double span = std::abs(a->sweep);
    const double delta =
        a->sweep >= 0.0 ? positive_angle(k - a->k_start) : positive_angle(a->k_start - k);
    const double angular_tol = tol / a->radius;
    if (delta <= span + angular_tol) return std::min(delta / span, 1.0);
    if (kTwoPi - delta <= angular_tol) return 0.0;
    return std::nullopt;
  }
  const Segment& g = std::get<Segment>(geometry);
  const Point2 e = g.b - g.a;
  const double len = norm(e);
  if (len == 0.0) return distance(p, g.a) <= tol ? std::optional<double>(0.0) : std::nullopt;
  if (std::abs(cross(e, p - g.a)) / len > tol) return std::nullopt;
  const double along = dot(p - g.a, e) / len;
  if (along < -tol || along > len + tol) return std::nullopt;
  return std::clamp(along / len, 0.0, 1.0);
}

double BoundaryPiece::area_term() const {
  if (const Arc* a = arc()) {
    const double k0 = a->k_start;
    const double k1 = a->k_start + a->sweep;
    const double r = a->radius;
    return 0.5 * (r * r * a->sweep + a->center.x * r * (std::sin(k1) - std::sin(k0)) -
                  a->center.y * r * (std::cos(k1) - std::cos(k0)));
  }
  const Segment& g = std::get<Segment>(geometry);
  return 0.5 * cross(g.a, g.b);
}

// --- ArcRegion ---------------------------------------------------------------

ArcRegion ArcRegion::from_disk(const Disk& d, Label label) {
  return ArcRegion({Loop{BoundaryPiece(Arc::full_circle(d.center, d.radius), label)}});
}

ArcRegion ArcRegion::from_polygon(const ConvexPolygon& poly, Label label) {
  Loop loop;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    loop.emplace_back(Segment{poly.vertex(i), poly.vertex(i + 1)}, label);
  }
  return ArcRegion({std::move(loop)});
}

std::size_t ArcRegion::piece_count() const {
  std::size_t n = 0;
  for (const auto& l : loops_) n += l.size();
  return n;
}

Box ArcRegion::bounds() const {
  Box b;
  for_each_piece([&](const BoundaryPiece& p) { b.include(p.bounds()); });
  return b;
}

// --- free functions ------------------------------------------------------------

std::vector<Point2> circle_circle_intersection(const Disk& d1, const Disk& d2) {
  const Point2 delta = d2.center - d1.center;
  const double d = norm(delta);
  const double r1 = d1.radius;
  const double r2 = d2.radius;
  if (d <= kTolerance && std::abs(r1 - r2) <= kTolerance) {
    throw DegenerateOverlap("circles coincide");
  }
  if (d > r1 + r2 + kTolerance) return {};
  if (d < std::abs(r1 - r2) - kTolerance) return {};
  if (d == 0.0) return {};
  const Point2 u = delta / d;
  const double a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
  if (std::abs(d - (r1 + r2)) <= kTolerance || std::abs(d - std::abs(r1 - r2)) <= kTolerance) {
    return {d1.center + u * std::clamp(a, -r1, r1)};
  }
  const double h = std::sqrt(std::max(r1 * r1 - a * a, 0.0));
  const Point2 base = d1.center + u * a;
  return {base + perp(u) * h, base - perp(u) * h};
}

ArcRegion clip_disk_to_polygon(const Disk& d, const ConvexPolygon& omega, Label arc_label) {
  if (!(d.radius > 0.0)) throw GeometryError("disk radius must be positive");
  const double sd = omega.signed_distance(d.center);
  if (sd >= d.radius - kTolerance) return {};
  if (sd <= -d.radius) return ArcRegion::from_disk(d, arc_label);
  return region_boolean(BooleanOp::Intersect, ArcRegion::from_disk(d, arc_label),
                        ArcRegion::from_polygon(omega, Label::world()));
}

double region_area(const ArcRegion& r) {
  double a = 0.0;
  r.for_each_piece([&](const BoundaryPiece& p) { a += p.area_term(); });
  return a;
}

double boundary_length(const ArcRegion& r) {
  double len = 0.0;
  r.for_each_piece([&](const BoundaryPiece& p) { len += p.length(); });
  return len;
}

int winding_number(const ArcRegion& r, Point2 p) {
  double total = 0.0;
  r.for_each_piece([&](const BoundaryPiece& piece) {
    const Point2 s = piece.start() - p;
    const Point2 e = piece.end() - p;
    double subtended = std::atan2(cross(s, e), dot(s, e));
    if (const Arc* a = piece.arc()) {
      if (distance(p, a->center) < a->radius) {
        // Seen from inside the circle the direction turns monotonically
        // with the sweep.
        if (a->sweep > 0.0 && subtended <= 0.0) subtended += kTwoPi;
        if (a->sweep < 0.0 && subtended >= 0.0) subtended -= kTwoPi;
      }
    }
    total += subtended;
  });
  return static_cast<int>(std::lround(total / kTwoPi));
}

bool point_in_region(const ArcRegion& r, Point2 p) { return winding_number(r, p) != 0; }

double distance_to_boundary(const ArcRegion& r, Point2 p) {
  double best = std::numeric_limits<double>::infinity();
  r.for_each_piece([&](const BoundaryPiece& piece) { best = std::min(best, piece.distance_to(p)); });
  return best;
}

double max_chain_gap(const ArcRegion& r) {
  double gap = 0.0;
  for (const auto& loop : r.loops()) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
      gap = std::max(gap, distance(loop[i].end(), loop[(i + 1) % loop.size()].start()));
    }
  }
  return gap;
}

}  // namespace uavcov::geom
