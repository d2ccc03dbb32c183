#include "uavcov/partition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "parallel.hpp"
#include "uavcov/errors.hpp"

namespace uavcov {

using geom::ArcRegion;
using geom::BooleanOp;
using geom::Label;

void SwarmState::validate() const {
  model.validate();
  std::set<int> ids;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& n = nodes[k];
    const std::string where = "nodes[" + std::to_string(k) + "]";
    if (!ids.insert(n.id).second) throw ValidationError(where + ".id", "duplicate node id");
    if (!std::isfinite(n.q.x) || !std::isfinite(n.q.y)) {
      throw ValidationError(where + ".q", "non-finite position");
    }
    if (!(n.z >= model.z_min && n.z <= model.z_max)) {
      throw ValidationError(where + ".z", "altitude outside [z_min, z_max]");
    }
    if (!omega.contains(n.q, geom::kTolerance)) {
      throw ValidationError(where + ".q", "ground position outside omega");
    }
  }
}

int SwarmState::index_of(int id) const {
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].id == id) return static_cast<int>(k);
  }
  return -1;
}

namespace {

struct Fnv {
  std::uint64_t h = 1469598103934665603ull;
  void bytes(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  void add(double v) { bytes(std::bit_cast<std::uint64_t>(v)); }
  void add(int v) { bytes(static_cast<std::uint64_t>(static_cast<std::int64_t>(v))); }
};

}  // namespace

std::uint64_t SwarmState::fingerprint() const {
  Fnv f;
  f.add(model.half_angle);
  f.add(model.z_min);
  f.add(model.z_max);
  f.add(static_cast<int>(model.variant));
  f.add(model.edge_ratio_b);
  for (const auto& v : omega.vertices()) {
    f.add(v.x);
    f.add(v.y);
  }
  f.add(static_cast<int>(nodes.size()));
  for (const auto& n : nodes) {
    f.add(n.id);
    f.add(n.q.x);
    f.add(n.q.y);
    f.add(n.z);
  }
  return f.h;
}

std::vector<int> neighbor_set(const SwarmState& s, int i) {
  std::vector<int> out;
  const auto& ni = s.nodes.at(i);
  const double t = s.model.tan_a();
  for (int j = 0; j < static_cast<int>(s.nodes.size()); ++j) {
    if (j == i) continue;
    const auto& nj = s.nodes[j];
    if (geom::distance(ni.q, nj.q) <= (ni.z + nj.z) * t) out.push_back(j);
  }
  return out;
}

double comm_radius(const QualityModel& m, double z_i) {
  const double t = m.tan_a();
  auto reach = [&](double z_j) { return std::hypot((z_i + z_j) * t, z_i - z_j); };
  return std::max({2.0 * z_i * t, reach(m.z_min), reach(m.z_max)});
}

Cell compute_cell(const SwarmState& s, int i) {
  const auto& m = s.model;
  const NodeState& ni = s.nodes.at(i);
  Cell cell;
  cell.owner = ni.id;
  cell.state_fingerprint = s.fingerprint();
  const auto neighbors = neighbor_set(s, i);
  for (int j : neighbors) cell.neighbor_ids.push_back(s.nodes[j].id);

  ArcRegion region = geom::clip_disk_to_polygon(m.sensing_disk(ni), s.omega);
  for (int j : neighbors) {
    if (region.empty()) break;
    const NodeState& nj = s.nodes[j];
    const double gap = geom::distance(ni.q, nj.q);
    if (gap <= geom::kTolerance && std::abs(ni.z - nj.z) <= kAltitudeTieTolerance) {
      // Identical footprints and quality: the lower id takes everything.
      if (nj.id < ni.id) region = ArcRegion{};
      continue;
    }
    const DominanceBoundary db = dominance_boundary(m, ni, nj);
    switch (db.kind) {
      case DominanceBoundary::Kind::Everywhere:
        break;
      case DominanceBoundary::Kind::Nowhere:
        region = geom::region_boolean(BooleanOp::Subtract, region, m.sensing_disk(nj),
                                      Label::dominance(nj.id));
        break;
      case DominanceBoundary::Kind::Bisector:
        region = geom::region_boolean(BooleanOp::Intersect, region, db.bisector, Label::tie(nj.id));
        break;
      case DominanceBoundary::Kind::Circle:
        if (db.winner_at_center == ni.id) {
          region = geom::region_boolean(BooleanOp::Intersect, region, db.circle,
                                        Label::dominance(nj.id));
        } else {
          const ArcRegion lost = geom::region_boolean(
              BooleanOp::Intersect, ArcRegion::from_disk(m.sensing_disk(nj), Label::dominance(nj.id)),
              db.circle, Label::dominance(nj.id));
          region = geom::region_boolean(BooleanOp::Subtract, region, lost);
        }
        break;
    }
  }
  cell.region = std::move(region);
  return cell;
}

std::vector<Cell> compute_all_cells(const SwarmState& s) {
  std::vector<Cell> cells(s.nodes.size());
  detail::parallel_for(static_cast<int>(s.nodes.size()),
                       [&](int i) { cells[i] = compute_cell(s, i); });
  return cells;
}

std::vector<std::pair<int, int>> contained_pairs(const SwarmState& s) {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(s.nodes.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double ri = s.model.radius(s.nodes[i].z);
      const double rj = s.model.radius(s.nodes[j].z);
      if (geom::distance(s.nodes[i].q, s.nodes[j].q) + ri < rj - geom::kTolerance) {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

}  // namespace uavcov
