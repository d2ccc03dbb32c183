#include <doctest.h>

#include <cmath>
#include <random>

#include "configs.hpp"
#include "uavcov/control.hpp"
#include "uavcov/errors.hpp"
#include "uavcov/sim.hpp"

using namespace uavcov;
using geom::Point2;

namespace {

const double kA20 = 20.0 * geom::kPi / 180.0;

QualityModel uni(double a = kA20) { return QualityModel::uniform(a, 0.3, 2.3); }

SwarmState alone(const QualityModel& m, double z) {
  return SwarmState{{NodeState{0, {0.2, -0.1}, z}}, m, testcfg::square(5.0)};
}

ControlInput input_of(const SwarmState& s, int i, const QuadratureConfig& quad = {}) {
  return control_input(s, i, compute_all_cells(s), Gains{}, quad);
}

// Root of 3 d^2 + 2 z_min d - D^2 = 0, d = z - z_min.
double closed_form_zopt(double z_min, double z_max) {
  const double D = z_max - z_min;
  const double d = (-2.0 * z_min + std::sqrt(4.0 * z_min * z_min + 12.0 * D * D)) / 6.0;
  return z_min + d;
}

}  // namespace

TEST_SUITE("control") {
  TEST_CASE("jacobian data") {
    const auto m = uni();
    const geom::Arc arc = geom::Arc::full_circle({0, 0}, 1.0);
    const auto own = jacobian_data_on_arc(m, {arc, geom::Label::own()});
    CHECK(own.upsilon == 1.0);
    CHECK(own.nu_dot_n == doctest::Approx(std::tan(kA20)));
    const auto other = jacobian_data_on_arc(m, {arc, geom::Label::dominance(3)});
    CHECK(other.upsilon == 0.0);
    CHECK(other.nu_dot_n == 0.0);
    const auto world = jacobian_data_on_arc(m, {geom::Segment{{0, 0}, {1, 0}}, geom::Label::world()});
    CHECK(world.upsilon == 0.0);
  }

  TEST_CASE("isolated node") {
    const auto m = uni();
    const auto s = alone(m, 1.3);
    const auto u = input_of(s, 0);
    CHECK(std::abs(u.u_q.x) < 1e-14);
    CHECK(std::abs(u.u_q.y) < 1e-14);
    const double r = 1.3 * std::tan(kA20);
    const double expect = std::tan(kA20) * 0.5625 * 2.0 * geom::kPi * r + (-0.75) * geom::kPi * r * r;
    CHECK(u.u_z == doctest::Approx(expect).epsilon(1e-12));
    CHECK(u.u_z == doctest::Approx(0.0812).epsilon(5e-4));
    CHECK(u.terms.neighbor_z == 0.0);
    CHECK(u.terms.own_boundary_z > 0.0);
    CHECK(u.terms.interior_z < 0.0);

    const auto p = input_of(alone(QualityModel::paraboloid(kA20, 0.3, 2.3, 0.5), 1.1), 0);
    CHECK(std::abs(p.u_q.x) < 1e-13);
    CHECK(std::abs(p.u_q.y) < 1e-13);
  }

  TEST_CASE("gains scale the input") {
    const auto s = alone(uni(), 1.0);
    const auto cells = compute_all_cells(s);
    const auto a = control_input(s, 0, cells, Gains{1.0, 1.0});
    const auto b = control_input(s, 0, cells, Gains{2.0, 3.0});
    CHECK(b.u_z == doctest::Approx(3.0 * a.u_z));
  }

  TEST_CASE("optimal altitude") {
    const double zc = closed_form_zopt(0.3, 2.3);
    CHECK(zc == doctest::Approx(1.35902).epsilon(1e-5));
    const auto o20 = optimal_altitude(uni());
    const auto o35 = optimal_altitude(uni(35.0 * geom::kPi / 180.0));
    CHECK(o20.interior_root);
    CHECK(std::abs(o20.z - 1.35902) < 1e-4);
    CHECK(std::abs(o20.z - zc) < 1e-8);
    CHECK(std::abs(o20.z - o35.z) < 1e-8);
    const auto p = optimal_altitude(QualityModel::paraboloid(kA20, 0.3, 2.3, 0.999));
    CHECK(std::abs(p.z - o20.z) < 1e-3);
    // The paraboloid optimum does not depend on b at all.
    const auto p2 = optimal_altitude(QualityModel::paraboloid(kA20, 0.3, 2.3, 0.2));
    CHECK(std::abs(p2.z - o20.z) < 1e-8);
    CHECK(std::abs(input_of(alone(uni(), o20.z), 0).u_z) < 1e-6);
  }

  TEST_CASE("stable altitude") {
    const auto m = uni();
    CHECK(std::abs(stable_altitude(alone(m, 0.8), 0) - closed_form_zopt(0.3, 2.3)) < 1e-8);

    // Four lower nodes cover node 0 completely: only the negative interior
    // term would act on it if its cell were not empty, so it sinks.
    const double r = m.radius(2.0);
    const double o = 0.3 * r;
    const SwarmState boxed{
        {{0, {0, 0}, 1.0}, {1, {o, o}, 1.8}, {2, {-o, o}, 1.8}, {3, {-o, -o}, 1.8}, {4, {o, -o}, 1.8}},
        m, testcfg::square(5.0)};
    // At z = 1.0 node 0 is the lowest and owns its whole disk.
    CHECK(input_of(boxed, 0).u_z > 0.0);

    std::mt19937_64 rng(4);
    for (int t = 0; t < 3; ++t) {
      auto s = testcfg::random_config(rng, m, 3, 0.5, 3.0);
      const double z = stable_altitude(s, 1);
      s.nodes[1].z = z;
      if (z > m.z_min && z < m.z_max) CHECK(std::abs(input_of(s, 1).u_z) < 1e-8);
    }
  }

  TEST_CASE("fully dominated node descends") {
    // A ring of lower nodes covers the whole circle of node 0, leaving it a
    // hole in the middle: no own boundary, only the negative interior term.
    const auto m = uni();
    std::vector<NodeState> nodes{{0, {0, 0}, 1.5}};
    const double ring = m.radius(1.5);
    for (int k = 0; k < 8; ++k) {
      const double t = k * geom::kPi / 4.0;
      nodes.push_back({k + 1, {ring * std::cos(t), ring * std::sin(t)}, 1.0});
    }
    const SwarmState s{nodes, m, testcfg::square(5.0)};
    const auto cells = compute_all_cells(s);
    REQUIRE_FALSE(cells[0].region.empty());
    bool own = false;
    cells[0].region.for_each_piece(
        [&](const geom::BoundaryPiece& p) { own = own || p.label.kind == geom::LabelKind::OwnSensingCircle; });
    CHECK_FALSE(own);
    const auto u = control_input(s, 0, cells, Gains{});
    CHECK(u.terms.own_boundary_z == 0.0);
    CHECK(u.terms.neighbor_z == 0.0);
    CHECK(u.u_z < 0.0);
    CHECK(u.u_z == doctest::Approx(altitude_factor_dz(m, 1.5) * geom::region_area(cells[0].region)));
    // Holding the ring fixed, the node settles lower once it regains its
    // own boundary.
    CHECK(stable_altitude(s, 0) < 1.5);
  }

  TEST_CASE("empty cell gives a zero input") {
    const auto m = uni();
    const double r = m.radius(2.0);
    const double o = 0.3 * r;
    const SwarmState s{
        {{0, {0, 0}, 2.0}, {1, {o, o}, 1.8}, {2, {-o, o}, 1.8}, {3, {-o, -o}, 1.8}, {4, {o, -o}, 1.8}},
        m, testcfg::square(5.0)};
    const auto cells = compute_all_cells(s);
    REQUIRE(cells[0].region.empty());
    const auto u = control_input(s, 0, cells, Gains{});
    CHECK(u.u_q.x == 0.0);
    CHECK(u.u_q.y == 0.0);
    CHECK(u.u_z == 0.0);
    CHECK(stable_altitude(s, 0) < 2.0);
  }

  TEST_CASE("node at z_max receives nothing") {
    for (const auto& m : {uni(), QualityModel::paraboloid(kA20, 0.3, 2.3, 0.5)}) {
      const SwarmState s{{{0, {0, 0}, 2.3}, {1, {0.5, 0.1}, 1.2}}, m, testcfg::square(5.0)};
      const auto u = input_of(s, 0);
      CHECK(std::abs(u.u_q.x) < 1e-15);
      CHECK(std::abs(u.u_q.y) < 1e-15);
      CHECK(std::abs(u.u_z) < 1e-15);
    }
  }

  TEST_CASE("uniform term structure") {
    std::mt19937_64 rng(12);
    const auto m = uni();
    for (int t = 0; t < 10; ++t) {
      const auto s = testcfg::random_config(rng, m, 4, 0.6, 3.0);
      const auto cells = compute_all_cells(s);
      for (int i = 0; i < 4; ++i) {
        const auto u = control_input(s, i, cells, Gains{});
        CHECK(u.terms.interior_q.x == 0.0);
        CHECK(u.terms.interior_q.y == 0.0);
        CHECK(u.terms.own_boundary_z >= 0.0);
        CHECK(u.terms.neighbor_z >= 0.0);
        CHECK(u.terms.interior_z <= 0.0);
        // The highest node borders its neighbors only along their circles,
        // where it is the weaker one.
        bool highest = true;
        for (int j = 0; j < 4; ++j) highest = highest && s.nodes[j].z <= s.nodes[i].z;
        if (highest) {
          CHECK(u.terms.neighbor_z == 0.0);
          CHECK(u.terms.neighbor_q.x == 0.0);
        }
      }
    }
  }

  TEST_CASE("stale cells are rejected") {
    const auto m = uni();
    auto s = alone(m, 1.0);
    const auto cells = compute_all_cells(s);
    s.nodes[0].z = 1.1;
    CHECK_THROWS_AS(control_input(s, 0, cells, Gains{}), StaleCells);
    CHECK_THROWS_AS(all_control_inputs(s, cells, Gains{}), StaleCells);
    CHECK_THROWS_AS(control_input(s, 0, std::vector<Cell>{}, Gains{}), StaleCells);
  }

  TEST_CASE("inputs match finite differences of H") {
    std::mt19937_64 rng(31);
    for (const auto& m : {uni(), QualityModel::paraboloid(kA20, 0.3, 2.3, 0.4)}) {
      for (int t = 0; t < 8; ++t) {
        const auto s = testcfg::random_config(rng, m, 3, 0.6, 1.4);
        const auto g = check_gradient(s);
        CHECK_MESSAGE(g.max_rel_error < 1e-3, "node " << g.worst_node << " coord " << g.worst_coord
                                                     << " analytic " << g.worst_analytic << " fd "
                                                     << g.worst_fd);
      }
    }
  }

  TEST_CASE("grid interior agrees with the exact interior") {
    std::mt19937_64 rng(6);
    const auto m = QualityModel::paraboloid(kA20, 0.3, 2.3, 0.4);
    const auto s = testcfg::random_config(rng, m, 3, 0.6, 3.0);
    QuadratureConfig grid;
    grid.interior = InteriorMethod::Grid;
    for (int i = 0; i < 3; ++i) {
      const auto a = input_of(s, i);
      const auto b = input_of(s, i, grid);
      CHECK(b.terms.interior_z == doctest::Approx(a.terms.interior_z).epsilon(1e-3));
      CHECK(std::abs(b.terms.interior_q.x - a.terms.interior_q.x) < 1e-4);
      CHECK(std::abs(b.terms.interior_q.y - a.terms.interior_q.y) < 1e-4);
    }
  }
}
