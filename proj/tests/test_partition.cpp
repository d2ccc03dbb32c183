#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "uavcov/errors.hpp"
#include "uavcov/partition.hpp"

using namespace uavcov;
using geom::Point2;

namespace {

const double kA20 = 20.0 * geom::kPi / 180.0;

geom::ConvexPolygon square(double half) {
  return geom::ConvexPolygon({{-half, -half}, {half, -half}, {half, half}, {-half, half}});
}

SwarmState swarm(std::vector<NodeState> nodes, QualityModel m, double half = 5.0) {
  return SwarmState{std::move(nodes), m, square(half)};
}

// Expected owner of q by direct comparison of the quality functions.
// Ties at equal altitude go to the nearer ground position, then the lower id.
int argmax_owner(const SwarmState& s, Point2 q) {
  int best = -1;
  double fb = 0.0;
  for (std::size_t k = 0; k < s.nodes.size(); ++k) {
    const auto& n = s.nodes[k];
    const double f = eval_quality(s.model, n, q);
    if (geom::distance(q, n.q) > s.model.radius(n.z)) continue;
    if (best < 0 || f > fb + 1e-12) {
      best = static_cast<int>(k);
      fb = f;
    } else if (std::abs(f - fb) <= 1e-12) {
      const auto& b = s.nodes[best];
      const double db = geom::distance(q, b.q), dn = geom::distance(q, n.q);
      if (dn < db - 1e-12 || (std::abs(dn - db) <= 1e-12 && n.id < b.id)) best = static_cast<int>(k);
    }
  }
  return best;
}

// Samples points of omega away from every cell boundary and checks that the
// cell containing each one is the argmax owner.
void check_argmax(const SwarmState& s, const std::vector<Cell>& cells, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto box = s.omega.bounds();
  std::uniform_real_distribution<double> ux(box.lo.x, box.hi.x), uy(box.lo.y, box.hi.y);
  int checked = 0;
  for (int t = 0; t < samples; ++t) {
    const Point2 q{ux(rng), uy(rng)};
    if (!s.omega.contains(q)) continue;
    bool near_edge = false;
    int inside = -1, count = 0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (cells[k].region.empty()) continue;
      if (geom::distance_to_boundary(cells[k].region, q) < 1e-7) near_edge = true;
      if (geom::point_in_region(cells[k].region, q)) {
        inside = static_cast<int>(k);
        ++count;
      }
    }
    if (near_edge) continue;
    ++checked;
    CHECK(count <= 1);
    CHECK(inside == argmax_owner(s, q));
  }
  CHECK(checked > samples / 4);
}

std::vector<geom::Disk> disks_of(const SwarmState& s) {
  std::vector<geom::Disk> out;
  for (const auto& n : s.nodes) out.push_back(s.model.sensing_disk(n));
  return out;
}

double total_area(const std::vector<Cell>& cells) {
  double a = 0.0;
  for (const auto& c : cells) a += geom::region_area(c.region);
  return a;
}

bool has_only_labels(const geom::ArcRegion& r, std::initializer_list<geom::LabelKind> kinds) {
  bool ok = true;
  r.for_each_piece([&](const geom::BoundaryPiece& p) {
    bool found = false;
    for (auto k : kinds) found = found || p.label.kind == k;
    ok = ok && found;
  });
  return ok;
}

}  // namespace

TEST_SUITE("partition") {
  TEST_CASE("swarm validation names the field") {
    const auto m = QualityModel::uniform(kA20, 0.3, 2.3);
    try {
      swarm({{0, {0, 0}, 1.0}, {1, {1, 0}, 2.5}}, m).validate();
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "nodes[1].z");
    }
    CHECK_THROWS_AS(swarm({{0, {0, 0}, 1.0}, {0, {1, 0}, 1.0}}, m).validate(), ValidationError);
    CHECK_THROWS_AS(swarm({{0, {9, 0}, 1.0}}, m).validate(), ValidationError);
    CHECK_NOTHROW(swarm({{0, {0, 0}, 1.0}}, m).validate());
  }

  TEST_CASE("neighbor set") {
    const auto m = QualityModel::uniform(kA20, 0.3, 2.3);
    auto s = swarm({{0, {-5, 0}, 1.0}, {1, {5, 0}, 1.0}}, m);
    CHECK(neighbor_set(s, 0).empty());
    s = swarm({{0, {1, 1}, 0.5}, {1, {1, 1}, 2.0}}, m);
    CHECK(neighbor_set(s, 0) == std::vector<int>{1});
    const double d = (1.0 + 1.5) * std::tan(kA20);
    s = swarm({{0, {0, 0}, 1.0}, {1, {d, 0}, 1.5}}, m);
    CHECK(neighbor_set(s, 0) == std::vector<int>{1});
    CHECK(neighbor_set(s, 1) == std::vector<int>{0});
    s = swarm({{0, {0, 0}, 1.0}, {1, {d * (1 + 1e-9), 0}, 1.5}}, m);
    CHECK(neighbor_set(s, 0).empty());

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(-4, 4), uz(0.3, 2.3);
    std::vector<NodeState> nodes;
    for (int k = 0; k < 12; ++k) nodes.push_back({k, {ux(rng), ux(rng)}, uz(rng)});
    s = swarm(nodes, m);
    for (int i = 0; i < 12; ++i) {
      for (int j : neighbor_set(s, i)) {
        const auto back = neighbor_set(s, j);
        CHECK(std::find(back.begin(), back.end(), i) != back.end());
      }
    }
  }

  TEST_CASE("communication radius") {
    const auto m = QualityModel::uniform(kA20, 0.3, 2.3);
    const double t = std::tan(kA20);
    // At z_min the z_min branch collapses onto the 2 z tan a branch.
    CHECK(comm_radius(m, 0.3) == doctest::Approx(std::max(0.6 * t, std::hypot(2.6 * t, 2.0))));
    const auto narrow = QualityModel::uniform(1e-9, 0.3, 2.3);
    CHECK(comm_radius(narrow, 0.5) == doctest::Approx(1.8).epsilon(1e-8));

    // Every geometrically possible neighbor lies inside the sphere, and the
    // farthest one found by sampling reaches it.
    for (double zi : {0.3, 0.8, 1.3, 1.9, 2.3}) {
      const double rc = comm_radius(m, zi);
      double farthest = 0.0;
      for (int a = 0; a <= 400; ++a) {
        const double zj = 0.3 + 2.0 * a / 400.0;
        for (int b = 0; b <= 20; ++b) {
          const double horizontal = (zi + zj) * t * b / 20.0;
          const double d = std::hypot(horizontal, zi - zj);
          CHECK(d <= rc * (1 + 1e-12));
          farthest = std::max(farthest, d);
        }
      }
      CHECK(farthest == doctest::Approx(rc).epsilon(1e-12));
    }
  }

  TEST_CASE("single node cell is the clipped disk") {
    const auto m = QualityModel::uniform(kA20, 0.3, 2.3);
    auto s = swarm({{7, {0, 0}, 1.0}}, m);
    auto cells = compute_all_cells(s);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].owner == 7);
    CHECK(geom::region_area(cells[0].region) == doctest::Approx(m.sensing_disk(s.nodes[0]).area()));
    CHECK(has_only_labels(cells[0].region, {geom::LabelKind::OwnSensingCircle}));

    s = swarm({{7, {4.9, 0}, 1.0}}, m);
    cells = compute_all_cells(s);
    const auto clipped = geom::clip_disk_to_polygon(m.sensing_disk(s.nodes[0]), s.omega);
    CHECK(geom::region_area(cells[0].region) == doctest::Approx(geom::region_area(clipped)).epsilon(1e-12));
    CHECK(has_only_labels(cells[0].region,
                          {geom::LabelKind::OwnSensingCircle, geom::LabelKind::WorldBoundary}));
  }

  TEST_CASE("uniform containment") {
    const auto m = QualityModel::uniform(kA20, 0.3, 2.3);
    auto s = swarm({{0, {0.1, 0}, 0.8}, {1, {0, 0}, 2.0}}, m);
    const auto cells = compute_all_cells(s);
    const double ri = m.radius(0.8), rj = m.radius(2.0);
    CHECK(geom::region_area(cells[0].region) == doctest::Approx(geom::kPi * ri * ri).epsilon(1e-12));
    CHECK(geom::region_area(cells[1].region) ==
          doctest::Approx(geom::kPi * (rj * rj - ri * ri)).epsilon(1e-12));
    CHECK(cells[1].region.loops().size() == 2);
    CHECK(has_only_labels(cells[0].region, {geom::LabelKind::OwnSensingCircle}));
    CHECK(contained_pairs(s) == std::vector<std::pair<int, int>>{{0, 1}});
  }

  TEST_CASE("cells tile the union of the sensing disks") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> ux(-1.2, 1.2), uz(0.4, 2.2);
    for (auto m : {QualityModel::uniform(kA20, 0.3, 2.3), QualityModel::paraboloid(kA20, 0.3, 2.3, 0.4)}) {
      for (int t = 0; t < 20; ++t) {
        std::vector<NodeState> nodes;
        for (int k = 0; k < 3 + t % 4; ++k) nodes.push_back({k, {ux(rng), ux(rng)}, uz(rng)});
        const auto s = swarm(nodes, m, 1.5);
        const auto cells = compute_all_cells(s);
        const double expect = oracle::union_area_in_polygon(disks_of(s), s.omega.vertices());
        CHECK(total_area(cells) == doctest::Approx(expect).epsilon(1e-6));
        for (const auto& c : cells) CHECK(geom::max_chain_gap(c.region) < 1e-9);
      }
    }
  }

  TEST_CASE("tessellation matches the argmax owner") {
    SUBCASE("uniform, mixed altitudes with a containment and a tie") {
      const auto m = QualityModel::uniform(kA20, 0.3, 2.3);
      const auto s = swarm({{0, {-1.0, 0.0}, 1.2},
                            {1, {-0.4, 0.3}, 1.6},
                            {2, {0.3, -0.2}, 1.2},
                            {3, {0.25, -0.1}, 0.5},
                            {4, {0.9, 0.5}, 1.6},
                            {5, {1.0, -0.6}, 0.9},
                            {6, {-0.2, -0.9}, 2.0}},
                           m, 2.0);
      check_argmax(s, compute_all_cells(s), 20000, 1);
    }
    SUBCASE("paraboloid, random layouts") {
      std::mt19937_64 rng(23);
      std::uniform_real_distribution<double> ux(-1.2, 1.2), uz(0.4, 2.2);
      const auto m = QualityModel::paraboloid(kA20, 0.3, 2.3, 0.3);
      for (int t = 0; t < 5; ++t) {
        std::vector<NodeState> nodes;
        for (int k = 0; k < 6; ++k) nodes.push_back({k, {ux(rng), ux(rng)}, uz(rng)});
        if (t == 0) nodes[1].z = nodes[0].z;
        const auto s = swarm(nodes, m, 1.6);
        check_argmax(s, compute_all_cells(s), 4000, 100 + t);
      }
    }
  }

  TEST_CASE("disjoint disks keep their clipped disks") {
    const auto m = QualityModel::uniform(kA20, 0.3, 2.3);
    const auto s = swarm({{0, {-2, 0}, 1.0}, {1, {2, 0}, 1.5}, {2, {0, 4.8}, 1.2}}, m);
    const auto cells = compute_all_cells(s);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto clipped = geom::clip_disk_to_polygon(m.sensing_disk(s.nodes[k]), s.omega);
      CHECK(geom::region_area(cells[k].region) == doctest::Approx(geom::region_area(clipped)).epsilon(1e-12));
      CHECK(cells[k].neighbor_ids.empty());
    }
  }

  TEST_CASE("empty and split cells") {
    const auto m = QualityModel::uniform(kA20, 0.3, 2.3);
    const double r = m.radius(2.0);
    // Lower nodes cover the high node's disk completely.
    const double o = 0.3 * r;
    auto s = swarm({{0, {0, 0}, 2.0}, {1, {o, o}, 1.8}, {2, {-o, o}, 1.8}, {3, {-o, -o}, 1.8}, {4, {o, -o}, 1.8}}, m);
    auto cells = compute_all_cells(s);
    CHECK(cells[0].region.empty());
    CHECK(geom::region_area(cells[0].region) == 0.0);

    // A band of two lower disks splits the high node's disk in two.
    const double rl = 0.7 * r;
    const double zl = rl / std::tan(kA20);
    s = swarm({{0, {0, 0}, 2.0}, {1, {0, 0.6 * r}, zl}, {2, {0, -0.6 * r}, zl}}, m);
    cells = compute_all_cells(s);
    CHECK(cells[0].region.loops().size() == 2);
    const double expect = oracle::union_area_in_polygon(disks_of(s), s.omega.vertices());
    CHECK(total_area(cells) == doctest::Approx(expect).epsilon(1e-9));
    check_argmax(s, cells, 5000, 9);
  }

  TEST_CASE("non-neighbors do not affect a cell") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ux(-4.5, 4.5), uz(0.3, 2.3);
    const auto m = QualityModel::paraboloid(kA20, 0.3, 2.3, 0.5);
    for (int t = 0; t < 10; ++t) {
      std::vector<NodeState> nodes;
      for (int k = 0; k < 10; ++k) nodes.push_back({k, {ux(rng), ux(rng)}, uz(rng)});
      const auto s = swarm(nodes, m);
      for (int i = 0; i < 10; ++i) {
        const auto nbrs = neighbor_set(s, i);
        SwarmState local = s;
        local.nodes.clear();
        for (int k = 0; k < 10; ++k) {
          const bool is_nbr = std::find(nbrs.begin(), nbrs.end(), k) != nbrs.end();
          if (k == i || is_nbr) local.nodes.push_back(s.nodes[k]);
          const auto& a = s.nodes[i];
          const auto& b = s.nodes[k];
          const double d3 = std::sqrt(geom::dot(a.q - b.q, a.q - b.q) + (a.z - b.z) * (a.z - b.z));
          if (d3 > comm_radius(m, a.z)) CHECK_FALSE(is_nbr);
        }
        const int li = local.index_of(s.nodes[i].id);
        CHECK(geom::region_area(compute_cell(local, li).region) ==
              geom::region_area(compute_cell(s, i).region));
      }
    }
  }

  TEST_CASE("parallel cell computation is deterministic") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ux(-1.5, 1.5), uz(0.3, 2.3);
    std::vector<NodeState> nodes;
    for (int k = 0; k < 16; ++k) nodes.push_back({k, {ux(rng), ux(rng)}, uz(rng)});
    const auto s = swarm(nodes, QualityModel::paraboloid(kA20, 0.3, 2.3, 0.5), 2.0);
    const auto a = compute_all_cells(s);
    const auto b = compute_all_cells(s);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].owner == s.nodes[k].id);
      CHECK(geom::region_area(a[k].region) == geom::region_area(b[k].region));
      CHECK(a[k].state_fingerprint == s.fingerprint());
    }
  }
}
