// Boolean cuts of arc regions: split both boundaries at their mutual
// intersections, classify every sub-piece against the other operand, keep
// the pieces that bound the result, and stitch them back into loops.

#include <algorithm>
#include <cmath>
#include <limits>

#include "uavcov/geom.hpp"

namespace uavcov::geom {

namespace {

// A point counts as lying on a piece within this distance.
constexpr double kOnTolerance = 10.0 * kTolerance;
// Endpoint matching distance when stitching.
constexpr double kStitchTolerance = 1e-7;

bool same_circle(const Arc& a, const Arc& b) {
  return distance(a.center, b.center) <= kTolerance && std::abs(a.radius - b.radius) <= kTolerance;
}

void line_circle_points(Point2 p0, Point2 p1, Point2 c, double r, std::vector<Point2>& out) {
  const Point2 d = p1 - p0;
  const double len = norm(d);
  if (len == 0.0) return;
  const Point2 u = d / len;
  const Point2 foot = p0 + u * dot(c - p0, u);
  const double h = distance(foot, c);
  if (h > r + kTolerance) return;
  if (std::abs(h - r) <= kTolerance) {
    out.push_back(foot);
    return;
  }
  const double w = std::sqrt(std::max(r * r - h * h, 0.0));
  out.push_back(foot + u * w);
  out.push_back(foot - u * w);
}

// Candidate points where the carriers of a and b meet. Endpoints are always
// candidates so that touching ends and collinear or co-circular overlaps
// produce cuts on both pieces.
std::vector<Point2> candidate_points(const BoundaryPiece& a, const BoundaryPiece& b) {
  std::vector<Point2> out{a.start(), a.end(), b.start(), b.end()};
  const Arc* aa = a.arc();
  const Arc* ba = b.arc();
  if (!aa && !ba) {
    const Segment& s = *a.segment();
    const Segment& t = *b.segment();
    const Point2 d1 = s.b - s.a;
    const Point2 d2 = t.b - t.a;
    const double den = cross(d1, d2);
    if (std::abs(den) > 1e-14 * norm(d1) * norm(d2)) {
      const double u = cross(t.a - s.a, d2) / den;
      out.push_back(s.a + d1 * u);
    }
  } else if (aa && ba) {
    if (!same_circle(*aa, *ba)) {
      const auto pts = circle_circle_intersection(Disk{aa->center, aa->radius},
                                                  Disk{ba->center, ba->radius});
      out.insert(out.end(), pts.begin(), pts.end());
    }
  } else {
    const Arc& arc = aa ? *aa : *ba;
    const Segment& seg = aa ? *b.segment() : *a.segment();
    line_circle_points(seg.a, seg.b, arc.center, arc.radius, out);
  }
  return out;
}

std::vector<BoundaryPiece> split_piece(const BoundaryPiece& piece, std::vector<double> cuts) {
  const double len = piece.length();
  std::sort(cuts.begin(), cuts.end());
  const Arc* arc = piece.arc();
  if (arc && arc->is_full_circle()) {
    // Cuts are cyclic; fold parameters close to 1 onto 0.
    for (double& c : cuts) {
      if ((1.0 - c) * len <= kTolerance) c = 0.0;
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> uniq;
    for (double c : cuts) {
      if (uniq.empty() || (c - uniq.back()) * len > kTolerance) uniq.push_back(c);
    }
    if (uniq.size() > 1 && (uniq.front() + 1.0 - uniq.back()) * len <= kTolerance) uniq.pop_back();
    if (uniq.empty()) return {piece};
    std::vector<BoundaryPiece> out;
    for (std::size_t k = 0; k < uniq.size(); ++k) {
      const double s0 = uniq[k];
      const double s1 = k + 1 < uniq.size() ? uniq[k + 1] : uniq.front() + 1.0;
      out.push_back(piece.sub(s0, s1));
    }
    return out;
  }
  std::vector<double> uniq{0.0};
  for (double c : cuts) {
    if (c * len <= kTolerance || (1.0 - c) * len <= kTolerance) continue;
    if ((c - uniq.back()) * len > kTolerance) uniq.push_back(c);
  }
  if ((1.0 - uniq.back()) * len <= kTolerance && uniq.size() > 1) uniq.pop_back();
  uniq.push_back(1.0);
  if (uniq.size() == 2) return {piece};
  std::vector<BoundaryPiece> out;
  for (std::size_t k = 0; k + 1 < uniq.size(); ++k) out.push_back(piece.sub(uniq[k], uniq[k + 1]));
  return out;
}

enum class Side { Inside, Outside, On };

struct Classified {
  Side side = Side::Outside;
  bool same_direction = false;  // only meaningful for Side::On
};

double min_distance(const std::vector<BoundaryPiece>& pieces, Point2 p, std::size_t* which) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const double d = pieces[k].distance_to(p);
    if (d < best) {
      best = d;
      if (which) *which = k;
    }
  }
  return best;
}

Classified classify(const BoundaryPiece& piece, const ArcRegion& other,
                    const std::vector<BoundaryPiece>& other_pieces) {
  // Probe several interior points; the piece is On only if all of them sit
  // on the other boundary.
  static constexpr double kProbes[] = {0.5, 0.25, 0.75, 0.125, 0.875};
  double far_dist = -1.0;
  Point2 far_point;
  std::size_t nearest = 0;
  for (double s : kProbes) {
    const Point2 p = piece.at(s);
    std::size_t which = 0;
    const double d = min_distance(other_pieces, p, &which);
    if (s == 0.5) nearest = which;
    if (d > far_dist) {
      far_dist = d;
      far_point = p;
    }
  }
  if (far_dist <= kOnTolerance) {
    const Point2 mid = piece.at(0.5);
    const BoundaryPiece& match = other_pieces[nearest];
    const double s = match.parameter_of(mid, 1e3 * kOnTolerance).value_or(0.5);
    return {Side::On, dot(piece.tangent(0.5), match.tangent(s)) > 0.0};
  }
  return {point_in_region(other, far_point) ? Side::Inside : Side::Outside, false};
}

bool mergeable(const BoundaryPiece& a, const BoundaryPiece& b) {
  if (!(a.label == b.label)) return false;
  if (distance(a.end(), b.start()) > kStitchTolerance) return false;
  const Arc* aa = a.arc();
  const Arc* ba = b.arc();
  if (aa && ba) {
    return same_circle(*aa, *ba) && (aa->sweep > 0) == (ba->sweep > 0) &&
           std::abs(aa->sweep + ba->sweep) < kTwoPi - 1e-12;
  }
  if (!aa && !ba) {
    const Point2 t1 = a.tangent(0.5);
    const Point2 t2 = b.tangent(0.5);
    return std::abs(cross(t1, t2)) < 1e-12 && dot(t1, t2) > 0.0;
  }
  return false;
}

BoundaryPiece join(const BoundaryPiece& a, const BoundaryPiece& b) {
  if (const Arc* aa = a.arc()) {
    Arc out = *aa;
    out.sweep = aa->sweep + b.arc()->sweep;
    return {out, a.label};
  }
  return {Segment{a.start(), b.end()}, a.label};
}

void merge_loop(Loop& loop) {
  bool changed = true;
  while (changed && loop.size() > 1) {
    changed = false;
    for (std::size_t i = 0; i < loop.size() && loop.size() > 1; ++i) {
      const std::size_t j = (i + 1) % loop.size();
      if (mergeable(loop[i], loop[j])) {
        loop[i] = join(loop[i], loop[j]);
        loop.erase(loop.begin() + static_cast<std::ptrdiff_t>(j));
        changed = true;
        break;
      }
    }
  }
  // A loop that is a single arc of 2*pi is stored as an exact full circle.
  if (loop.size() == 1) {
    if (const Arc* a = loop.front().arc()) {
      if (std::abs(std::abs(a->sweep) - kTwoPi) < 1e-9) {
        Arc full = *a;
        full.sweep = a->sweep > 0 ? kTwoPi : -kTwoPi;
        loop.front() = BoundaryPiece(full, loop.front().label);
      }
    }
  }
}

std::vector<Loop> stitch(std::vector<BoundaryPiece> pieces) {
  std::vector<Loop> loops;
  std::vector<bool> used(pieces.size(), false);
  for (std::size_t seed = 0; seed < pieces.size(); ++seed) {
    if (used[seed]) continue;
    used[seed] = true;
    Loop loop{pieces[seed]};
    const Point2 origin = pieces[seed].start();
    while (true) {
      const Point2 tail = loop.back().end();
      if (distance(tail, origin) <= kStitchTolerance) break;
      std::size_t best = pieces.size();
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < pieces.size(); ++k) {
        if (used[k]) continue;
        const double d = distance(tail, pieces[k].start());
        if (d < best_dist) {
          best_dist = d;
          best = k;
        }
      }
      if (best == pieces.size() || best_dist > kStitchTolerance) break;
      used[best] = true;
      loop.push_back(pieces[best]);
    }
    merge_loop(loop);
    double len = 0.0;
    for (const auto& p : loop) len += p.length();
    if (len > 10.0 * kTolerance) loops.push_back(std::move(loop));
  }
  return loops;
}

std::vector<BoundaryPiece> flatten(const ArcRegion& r) {
  std::vector<BoundaryPiece> out;
  r.for_each_piece([&](const BoundaryPiece& p) { out.push_back(p); });
  return out;
}

}  // namespace

ArcRegion region_boolean(BooleanOp op, const ArcRegion& a, const ArcRegion& b) {
  const bool intersect = op == BooleanOp::Intersect;
  if (a.empty()) return {};
  if (b.empty()) return intersect ? ArcRegion{} : a;
  if (!a.bounds().overlaps(b.bounds().expanded(kOnTolerance))) return intersect ? ArcRegion{} : a;

  const std::vector<BoundaryPiece> pa = flatten(a);
  const std::vector<BoundaryPiece> pb = flatten(b);
  std::vector<std::vector<double>> cuts_a(pa.size());
  std::vector<std::vector<double>> cuts_b(pb.size());
  std::vector<Box> boxes_b(pb.size());
  for (std::size_t j = 0; j < pb.size(); ++j) boxes_b[j] = pb[j].bounds().expanded(kOnTolerance);

  for (std::size_t i = 0; i < pa.size(); ++i) {
    const Box box_a = pa[i].bounds().expanded(kOnTolerance);
    for (std::size_t j = 0; j < pb.size(); ++j) {
      if (!box_a.overlaps(boxes_b[j])) continue;
      for (const Point2& p : candidate_points(pa[i], pb[j])) {
        const auto sa = pa[i].parameter_of(p, kOnTolerance);
        if (!sa) continue;
        const auto sb = pb[j].parameter_of(p, kOnTolerance);
        if (!sb) continue;
        cuts_a[i].push_back(*sa);
        cuts_b[j].push_back(*sb);
      }
    }
  }

  std::vector<BoundaryPiece> kept;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    for (const auto& sub : split_piece(pa[i], cuts_a[i])) {
      const Classified c = classify(sub, b, pb);
      const bool keep = intersect ? (c.side == Side::Inside || (c.side == Side::On && c.same_direction))
                                  : (c.side == Side::Outside || (c.side == Side::On && !c.same_direction));
      if (keep) kept.push_back(sub);
    }
  }
  for (std::size_t j = 0; j < pb.size(); ++j) {
    for (const auto& sub : split_piece(pb[j], cuts_b[j])) {
      // Pieces shared with a's boundary were decided above.
      const Classified c = classify(sub, a, pa);
      if (c.side != Side::Inside) continue;
      kept.push_back(intersect ? sub : sub.reversed());
    }
  }
  return ArcRegion(stitch(std::move(kept)));
}

ArcRegion region_boolean(BooleanOp op, const ArcRegion& a, const Disk& b, Label label) {
  return region_boolean(op, a, ArcRegion::from_disk(b, label));
}

ArcRegion region_boolean(BooleanOp op, const ArcRegion& a, const HalfPlane& b, Label label) {
  const bool intersect = op == BooleanOp::Intersect;
  if (a.empty()) return {};
  const Box box = a.bounds();
  const double margin = 1.0 + 0.5 * std::max(box.width(), box.height());
  const Box big = box.expanded(margin);
  const std::vector<Point2> corners{big.lo, {big.hi.x, big.lo.y}, big.hi, {big.lo.x, big.hi.y}};

  // Clip the box by the half-plane (Sutherland-Hodgman, one plane).
  const double scale = norm(b.normal);
  auto sd = [&](Point2 p) { return dot(p - b.anchor, b.normal) / scale; };
  std::vector<Point2> poly;
  bool all_inside = true;
  bool any_inside = false;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const Point2 p = corners[i];
    const Point2 q = corners[(i + 1) % corners.size()];
    const double dp = sd(p);
    const double dq = sd(q);
    if (dp <= 0.0) {
      poly.push_back(p);
      any_inside = true;
    } else {
      all_inside = false;
    }
    if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
      poly.push_back(p + (q - p) * (dp / (dp - dq)));
    }
  }
  if (all_inside) return intersect ? a : ArcRegion{};
  if (!any_inside || poly.size() < 3) return intersect ? ArcRegion{} : a;

  Loop loop;
  const double on_line = 1e-12 * (1.0 + margin);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 p = poly[i];
    const Point2 q = poly[(i + 1) % poly.size()];
    if (distance(p, q) <= kTolerance) continue;
    const bool on = std::abs(sd(p)) <= on_line && std::abs(sd(q)) <= on_line;
    loop.emplace_back(Segment{p, q}, on ? label : Label::world());
  }
  if (loop.size() < 3) return intersect ? ArcRegion{} : a;
  return region_boolean(op, a, ArcRegion({std::move(loop)}));
}

}  // namespace uavcov::geom
