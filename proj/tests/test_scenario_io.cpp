#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "uavcov/errors.hpp"
#include "uavcov/io.hpp"
#include "uavcov/scenario.hpp"

using namespace uavcov;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("uavcov_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_matches(const std::string& text, const std::string& pattern) {
  const std::regex re(pattern);
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re),
                                                std::sregex_iterator()));
}

const char* kMinimal = R"({
  "name": "mini",
  "omega": [[-2, -2], [2, -2], [2, 2], [-2, 2]],
  "quality": {"variant": "uniform", "half_angle_deg": 20, "z_min": 0.3, "z_max": 2.3},
  "nodes": [{"id": 1, "x": 0.0, "y": 0.0, "z": 1.0}, {"id": 2, "x": 0.2, "y": 0.1, "z": 1.4}],
  "sim": {"dt": 0.01, "steps": 40, "record_every": 5}
})";

std::string with(const std::string& from, const std::string& to) {
  std::string s = kMinimal;
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("bundled scenarios") {
    const auto one = parse_scenario(resolve_scenario("case_study_1"));
    CHECK(one.name == "case_study_1");
    CHECK(one.state.nodes.size() == 3);
    CHECK(one.state.model.half_angle == doctest::Approx(20.0 * geom::kPi / 180.0).epsilon(1e-15));
    CHECK(one.state.model.z_min == 0.3);
    CHECK(one.state.model.z_max == 2.3);
    CHECK(one.state.model.variant == QualityVariant::Uniform);

    const auto two = parse_scenario(resolve_scenario("case_study_2.json"));
    CHECK(two.state.nodes.size() == 9);
    CHECK(two.state.model.half_angle == one.state.model.half_angle);
    CHECK(two.state.model.z_min == 0.3);
    CHECK(two.state.model.z_max == 2.3);
    CHECK(two.state.omega.area() == doctest::Approx(one.state.omega.area()));

    CHECK_THROWS_AS(resolve_scenario("no_such_scenario"), IoError);
  }

  TEST_CASE("random layout is seeded") {
    const auto a = parse_scenario(resolve_scenario("random_paraboloid"), 3);
    const auto b = parse_scenario(resolve_scenario("random_paraboloid"), 3);
    const auto c = parse_scenario(resolve_scenario("random_paraboloid"), 4);
    REQUIRE(a.state.nodes.size() == 5);
    CHECK(a.state.model.variant == QualityVariant::Paraboloid);
    CHECK(a.state.fingerprint() == b.state.fingerprint());
    CHECK(a.state.fingerprint() != c.state.fingerprint());
    for (const auto& n : a.state.nodes) {
      CHECK(a.state.omega.contains(n.q));
      CHECK(n.z >= 0.5);
      CHECK(n.z <= 1.5);
    }
  }

  TEST_CASE("minimal scenario and defaults") {
    const auto s = parse_scenario_text(kMinimal, "fallback");
    CHECK(s.name == "mini");
    CHECK(s.output_dir == "out/mini");
    CHECK(s.sim.steps == 40);
    CHECK(s.sim.record_every == 5);
    CHECK(s.sim.gains.alpha_q == 1.0);
    CHECK(s.state.nodes[1].id == 2);
  }

  TEST_CASE("validation errors name the field") {
    auto field_of = [](const std::string& text) {
      try {
        parse_scenario_text(text, "x");
      } catch (const ValidationError& e) {
        return e.field();
      }
      return std::string("<none>");
    };
    CHECK(field_of(with("\"z\": 1.4", "\"z\": 2.5")) == "nodes[1].z");
    CHECK(field_of(with("\"z\": 1.0", "\"z\": 0.1")) == "nodes[0].z");
    CHECK(field_of(with("\"x\": 0.2", "\"x\": 3.0")) == "nodes[1].q");
    CHECK(field_of(with("\"id\": 2", "\"id\": 1")) == "nodes[1].id");
    CHECK(field_of(with("\"z_max\": 2.3", "\"z_max\": 0.2")) == "quality.z_max");
    CHECK(field_of(with("\"half_angle_deg\": 20", "\"half_angle_deg\": 95")) == "quality.half_angle_deg");
    CHECK(field_of(with("\"variant\": \"uniform\"", "\"variant\": \"cone\"")) == "quality.variant");
    CHECK(field_of(with("\"dt\": 0.01", "\"dt\": -1")) == "sim.dt");
    CHECK(field_of(with("[2, 2], ", "[2, 2], [0, 0], ")) == "omega");
  }

  TEST_CASE("malformed input") {
    CHECK_THROWS_AS(parse_scenario_text("{\"name\": ", "x"), ParseError);
    CHECK_THROWS_AS(parse_scenario_text("[1, 2]", "x"), ParseError);
    CHECK_THROWS_AS(parse_scenario_text(with("\"z\": 1.0", "\"z\": \"high\""), "x"), ParseError);
    CHECK_THROWS_AS(parse_scenario_text(with("\"steps\": 40", "\"steps\": 4.5"), "x"), ParseError);
    CHECK_THROWS_AS(parse_scenario(fs::temp_directory_path() / "uavcov_missing_scenario.json"), IoError);
  }
}

TEST_SUITE("io") {
  TEST_CASE("trajectory csv round trip reproduces H") {
    const auto sc = parse_scenario(resolve_scenario("case_study_1"));
    SimConfig cfg = sc.sim;
    cfg.steps = 300;
    cfg.max_form_every = 0;
    const auto log = run(sc.state, cfg);
    const auto dir = scratch_dir("csv");
    write_trajectory_csv(log, dir / "trajectory.csv");
    write_metrics_json(log, dir / "metrics.json");

    const auto rows = read_trajectory_csv(dir / "trajectory.csv");
    CHECK(rows.size() == log.records.size() * sc.state.nodes.size());
    SwarmState last = sc.state;
    last.nodes = final_nodes_from_csv(dir / "trajectory.csv");
    const double H = evaluate_criterion(last, compute_all_cells(last), cfg.quad);
    CHECK(std::abs(H - log.records.back().H) <= 1e-9);

    const std::string metrics = slurp(dir / "metrics.json");
    CHECK(metrics.find("\"H_opt\"") != std::string::npos);
    CHECK(metrics.find("\"H_max_form\": null") != std::string::npos);
    CHECK(count_matches(metrics, "\"step\":") == log.records.size());
  }

  TEST_CASE("bad paths report the path") {
    const auto sc = parse_scenario(resolve_scenario("case_study_1"));
    SimConfig cfg = sc.sim;
    cfg.steps = 1;
    const auto log = run(sc.state, cfg);
    const auto dir = scratch_dir("badpath");
    std::ofstream(dir / "plain_file") << "x";
    const fs::path bad = dir / "plain_file" / "t.csv";
    try {
      write_trajectory_csv(log, bad);
      FAIL("expected IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("plain_file") != std::string::npos);
    }
    CHECK_THROWS_AS(read_trajectory_csv(dir / "missing.csv"), IoError);
  }

  TEST_CASE("snapshot contents") {
    const auto sc = parse_scenario(resolve_scenario("case_study_2"));
    const auto cells = compute_all_cells(sc.state);
    const auto dir = scratch_dir("svg");
    write_snapshot_svg(sc.state, cells, dir / "snap.svg");
    const std::string svg = slurp(dir / "snap.svg");
    std::size_t nonempty = 0;
    for (const auto& c : cells) nonempty += c.region.empty() ? 0 : 1;
    CHECK(count_matches(svg, "<circle class=\"sensing\"") == sc.state.nodes.size());
    CHECK(count_matches(svg, "<g class=\"cell\"") == nonempty);
    CHECK(count_matches(svg, "<polygon class=\"omega\"") == 1);
    CHECK(count_matches(svg, "<path class=\"own\"") >= 1);
    CHECK(count_matches(svg, "<path class=\"(dominance|tie)\"") >= 1);
  }
}
