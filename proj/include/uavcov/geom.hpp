#pragma once

// Geometry kernel for planar regions bounded by circular arcs and line
// segments: disks clipped to a convex polygon, boolean cuts by disks and
// half-planes, and line/area integrals over the results.
//
// Conventions: outer loops run counterclockwise, holes clockwise, so the
// region interior is always on the left of the direction of travel and the
// outward normal is the right-hand normal.

#include <cmath>
#include <numbers>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "uavcov/quadrature.hpp"

namespace uavcov::geom {

// Absolute snapping tolerance (meters) for intersection and tangency
// classification.
inline constexpr double kTolerance = 1e-9;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2& operator+=(Point2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Point2& operator-=(Point2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator-(Point2 a) { return {-a.x, -a.y}; }
  friend Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
  friend Point2 operator*(double s, Point2 a) { return {a.x * s, a.y * s}; }
  friend Point2 operator/(Point2 a, double s) { return {a.x / s, a.y / s}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
// Counterclockwise quarter turn.
inline Point2 perp(Point2 a) { return {-a.y, a.x}; }

// Wraps an angle into (-pi, pi].
double wrap_angle(double k);

struct Box {
  Point2 lo{+HUGE_VAL, +HUGE_VAL};
  Point2 hi{-HUGE_VAL, -HUGE_VAL};

  bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }
  void include(Point2 p);
  void include(const Box& b);
  Box expanded(double margin) const;
  bool overlaps(const Box& o) const;
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
};

class ConvexPolygon {
 public:
  // Vertices must be counterclockwise and strictly convex; throws
  // GeometryError otherwise.
  explicit ConvexPolygon(std::vector<Point2> ccw_vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Point2 vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }

  double area() const;
  Box bounds() const;
  // Closed containment with an absolute slack.
  bool contains(Point2 p, double slack = 0.0) const;
  // Signed distance to the boundary: negative inside.
  double signed_distance(Point2 p) const;
  // Nearest point of the polygon (p itself when inside).
  Point2 project(Point2 p) const;

 private:
  std::vector<Point2> vertices_;
};

struct Disk {
  Point2 center;
  double radius = 0.0;

  bool contains(Point2 p, double slack = 0.0) const {
    return distance(p, center) <= radius + slack;
  }
  double area() const { return kPi * radius * radius; }
};

// Closed half-plane { p : dot(p - anchor, normal) <= 0 }.
struct HalfPlane {
  Point2 anchor;
  Point2 normal;

  double signed_distance(Point2 p) const { return dot(p - anchor, normal) / norm(normal); }
};

enum class Orientation { Ccw, Cw };

// Circular arc; sweep is signed (positive = counterclockwise) with
// |sweep| in (0, 2*pi]. k_start is kept in (-pi, pi].
struct Arc {
  Point2 center;
  double radius = 0.0;
  double k_start = 0.0;
  double sweep = kTwoPi;

  static Arc full_circle(Point2 center, double radius, Orientation o = Orientation::Ccw);

  double k_end() const { return wrap_angle(k_start + sweep); }
  Orientation orientation() const { return sweep >= 0.0 ? Orientation::Ccw : Orientation::Cw; }
  bool is_full_circle() const { return std::abs(std::abs(sweep) - kTwoPi) <= 1e-14; }
  Point2 point_at_angle(double k) const {
    return {center.x + radius * std::cos(k), center.y + radius * std::sin(k)};
  }
};

struct Segment {
  Point2 a;
  Point2 b;
};

enum class LabelKind { OwnSensingCircle, WorldBoundary, DominanceVs, TieBisectorVs };

// Provenance of a boundary piece. `other` is the competing node id for
// DominanceVs / TieBisectorVs and -1 otherwise.
struct Label {
  LabelKind kind = LabelKind::WorldBoundary;
  int other = -1;

  static Label own() { return {LabelKind::OwnSensingCircle, -1}; }
  static Label world() { return {LabelKind::WorldBoundary, -1}; }
  static Label dominance(int node) { return {LabelKind::DominanceVs, node}; }
  static Label tie(int node) { return {LabelKind::TieBisectorVs, node}; }

  friend bool operator==(const Label&, const Label&) = default;
};

const char* to_string(LabelKind kind);

struct BoundaryPiece {
  std::variant<Arc, Segment> geometry;
  Label label;

  BoundaryPiece(Arc a, Label l) : geometry(a), label(l) {}
  BoundaryPiece(Segment s, Label l) : geometry(s), label(l) {}

  const Arc* arc() const { return std::get_if<Arc>(&geometry); }
  const Segment* segment() const { return std::get_if<Segment>(&geometry); }

  Point2 start() const { return at(0.0); }
  Point2 end() const { return at(1.0); }
  double length() const;
  // Point at normalized parameter s in [0, 1].
  Point2 at(double s) const;
  // Unit tangent in the direction of travel.
  Point2 tangent(double s) const;
  // Unit right-hand normal; outward for a correctly oriented loop.
  Point2 outward_normal(double s) const;

  BoundaryPiece sub(double s0, double s1) const;
  BoundaryPiece reversed() const;
  Box bounds() const;
  double distance_to(Point2 p) const;
  // Parameter of p along the piece if p lies on it within tol.
  std::optional<double> parameter_of(Point2 p, double tol) const;
  // Signed area contribution 1/2 * integral (x dy - y dx), closed form.
  double area_term() const;
};

using Loop = std::vector<BoundaryPiece>;

class ArcRegion {
 public:
  ArcRegion() = default;
  explicit ArcRegion(std::vector<Loop> loops) : loops_(std::move(loops)) {}

  static ArcRegion from_disk(const Disk& d, Label label);
  static ArcRegion from_polygon(const ConvexPolygon& poly, Label label);

  const std::vector<Loop>& loops() const { return loops_; }
  bool empty() const { return loops_.empty(); }
  std::size_t piece_count() const;
  Box bounds() const;

  template <typename F>
  void for_each_piece(F&& f) const {
    for (const auto& loop : loops_)
      for (const auto& piece : loop) f(piece);
  }

 private:
  std::vector<Loop> loops_;
};

// Intersection points of the two boundary circles (0, 1 or 2 points).
// Throws DegenerateOverlap when the circles coincide.
std::vector<Point2> circle_circle_intersection(const Disk& d1, const Disk& d2);

// d intersected with omega. Arcs carry `arc_label`, straight pieces are
// WorldBoundary.
ArcRegion clip_disk_to_polygon(const Disk& d, const ConvexPolygon& omega,
                               Label arc_label = Label::own());

enum class BooleanOp { Intersect, Subtract };

// General boolean between two arc regions. Boundary pieces keep the label
// of the operand they came from.
ArcRegion region_boolean(BooleanOp op, const ArcRegion& a, const ArcRegion& b);
ArcRegion region_boolean(BooleanOp op, const ArcRegion& a, const Disk& b, Label label);
ArcRegion region_boolean(BooleanOp op, const ArcRegion& a, const HalfPlane& b, Label label);

double region_area(const ArcRegion& r);
double boundary_length(const ArcRegion& r);
int winding_number(const ArcRegion& r, Point2 p);
bool point_in_region(const ArcRegion& r, Point2 p);
double distance_to_boundary(const ArcRegion& r, Point2 p);
// Largest distance between the end of a piece and the start of the next.
double max_chain_gap(const ArcRegion& r);

// Arcs are integrated in panels no wider than this angle.
inline constexpr double kMaxPanelAngle = kPi / 4.0;

// Gauss-Legendre line integral of integrand(piece, q, outward_normal) over
// every piece accepted by keep(piece). Integration is in arc length.
template <typename Filter, typename Integrand>
auto boundary_line_integral(const ArcRegion& r, Filter&& keep, Integrand&& integrand,
                            int order = 16) {
  using T = decltype(integrand(std::declval<const BoundaryPiece&>(), Point2{}, Point2{}));
  const GaussLegendre& rule = gauss_legendre(order);
  T total{};
  r.for_each_piece([&](const BoundaryPiece& piece) {
    if (!keep(piece)) return;
    const double len = piece.length();
    int panels = 1;
    if (const Arc* a = piece.arc()) {
      panels = std::max(1, static_cast<int>(std::ceil(std::abs(a->sweep) / kMaxPanelAngle)));
    }
    for (int p = 0; p < panels; ++p) {
      const double s0 = static_cast<double>(p) / panels;
      const double s1 = static_cast<double>(p + 1) / panels;
      total = total + rule.integrate(
                          [&](double s) {
                            return integrand(piece, piece.at(s), piece.outward_normal(s)) * len;
                          },
                          s0, s1);
    }
  });
  return total;
}

// Exact (to quadrature round-off) integrals over a region of the monomials
// centered at `center`: area, first moment (integral of q - center), and the
// polar moment (integral of |q - center|^2). Evaluated with Green's theorem.
struct RadialMoments {
  double area = 0.0;
  Point2 first;
  double polar = 0.0;
};
RadialMoments region_moments(const ArcRegion& r, Point2 center, int order = 16);

// Deterministic grid quadrature points over a region: cells of a
// resolution x resolution grid on the bounding box are classified as
// inside, outside or partial; inside cells contribute their midpoint,
// partial cells are refined once into refine x refine sub-cells.
struct WeightedPoint {
  Point2 point;
  double weight = 0.0;
};
std::vector<WeightedPoint> grid_quadrature_points(const ArcRegion& r, int resolution = 200,
                                                  int refine = 8);

template <typename Integrand>
auto region_area_integral(const ArcRegion& r, Integrand&& integrand, int resolution = 200) {
  using T = decltype(integrand(Point2{}));
  T total{};
  for (const auto& wp : grid_quadrature_points(r, resolution)) {
    total = total + integrand(wp.point) * wp.weight;
  }
  return total;
}

}  // namespace uavcov::geom
