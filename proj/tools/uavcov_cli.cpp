#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uavcov/uavcov.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitGradient = 3;
constexpr double kGradientTolerance = 1e-3;

int report(uavcov_status st, const std::string& context) {
  std::string field = uavcov_last_error_field();
  std::fprintf(stderr, "error: %s: %s%s\n", context.c_str(), uavcov_last_error(),
               field.empty() ? "" : (" (field " + field + ")").c_str());
  return (st == UAVCOV_ERR_PARSE || st == UAVCOV_ERR_VALIDATION || st == UAVCOV_ERR_ARGUMENT) ? kExitInvalid
                                                                                             : kExitError;
}

struct ScenarioHandle {
  uavcov_scenario* ptr = nullptr;
  ~ScenarioHandle() { uavcov_scenario_free(ptr); }
};

struct TrajectoryHandle {
  uavcov_trajectory* ptr = nullptr;
  ~TrajectoryHandle() { uavcov_trajectory_free(ptr); }
};

uavcov_status load(const std::string& name, const std::optional<std::uint64_t>& seed, ScenarioHandle& h) {
  return uavcov_scenario_load(name.c_str(), seed ? &*seed : nullptr, &h.ptr);
}

// Maps "first", "last" or a step number onto a record index.
std::optional<std::size_t> snapshot_index(const uavcov_trajectory* traj, const std::string& token) {
  const std::size_t n = uavcov_trajectory_record_count(traj);
  if (n == 0) return std::nullopt;
  if (token == "first") return 0;
  if (token == "last") return n - 1;
  long step = 0;
  try {
    std::size_t used = 0;
    step = std::stol(token, &used);
    if (used != token.size()) return std::nullopt;
  } catch (...) {
    return std::nullopt;
  }
  for (std::size_t k = 0; k < n; ++k) {
    uavcov_record r;
    uavcov_trajectory_record(traj, k, &r);
    if (r.step == step) return k;
  }
  return std::nullopt;
}

int cmd_run(const std::string& scenario, const std::vector<std::string>& snapshots, bool check_gradient,
            const std::string& out_override, const std::optional<std::uint64_t>& seed) {
  ScenarioHandle scn;
  if (auto st = load(scenario, seed, scn); st != UAVCOV_OK) return report(st, "loading " + scenario);

  if (check_gradient) {
    double err = 0.0;
    if (auto st = uavcov_check_gradient(scn.ptr, &err); st != UAVCOV_OK) return report(st, "gradient check");
    std::printf("gradient check: max relative error %.3e\n", err);
    if (!(err <= kGradientTolerance)) {
      std::fprintf(stderr, "error: gradient check failed (%.3e > %.0e)\n", err, kGradientTolerance);
      return kExitGradient;
    }
  }

  const fs::path out = out_override.empty() ? fs::path(uavcov_scenario_output_dir(scn.ptr)) : fs::path(out_override);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create output directory %s: %s\n", out.string().c_str(),
                 ec.message().c_str());
    return kExitError;
  }

  TrajectoryHandle traj;
  if (auto st = uavcov_run(scn.ptr, &traj.ptr); st != UAVCOV_OK) return report(st, "simulation");

  std::vector<std::size_t> snap_indices;
  for (const auto& token : snapshots) {
    auto idx = snapshot_index(traj.ptr, token);
    if (!idx) {
      std::fprintf(stderr, "error: snapshot '%s' does not match a recorded step\n", token.c_str());
      return kExitInvalid;
    }
    snap_indices.push_back(*idx);
  }

  const std::string csv = (out / "trajectory.csv").string();
  const std::string json = (out / "metrics.json").string();
  if (auto st = uavcov_write_trajectory_csv(traj.ptr, csv.c_str()); st != UAVCOV_OK) return report(st, csv);
  if (auto st = uavcov_write_metrics_json(traj.ptr, json.c_str()); st != UAVCOV_OK) return report(st, json);
  for (std::size_t idx : snap_indices) {
    uavcov_record r;
    uavcov_trajectory_record(traj.ptr, idx, &r);
    const std::string svg = (out / ("snapshot_step" + std::to_string(r.step) + ".svg")).string();
    if (auto st = uavcov_write_snapshot_svg(scn.ptr, traj.ptr, idx, svg.c_str()); st != UAVCOV_OK)
      return report(st, svg);
  }

  uavcov_run_summary sum;
  uavcov_trajectory_summary(traj.ptr, &sum);
  uavcov_record last;
  uavcov_trajectory_record(traj.ptr, uavcov_trajectory_record_count(traj.ptr) - 1, &last);
  std::printf("scenario %s: %s after %ld steps (t = %.4g)\n", uavcov_scenario_name(scn.ptr),
              sum.converged ? "converged" : "stopped", static_cast<long>(sum.steps_taken), last.t);
  std::printf("H = %.9g  H_opt = %.9g  H/H_opt = %.6f  covered = %.4f\n", last.H, sum.h_opt,
              sum.h_opt > 0 ? last.H / sum.h_opt : 0.0, last.covered_area_ratio);
  std::printf("clamp activations %ld, projections %ld\n", static_cast<long>(sum.clamp_activations),
              static_cast<long>(sum.projections));
  std::printf("wrote %s\n", out.string().c_str());
  return kExitOk;
}

int cmd_optimal(const std::string& scenario) {
  ScenarioHandle scn;
  if (auto st = load(scenario, std::nullopt, scn); st != UAVCOV_OK) return report(st, "loading " + scenario);
  double z = 0.0, h = 0.0;
  int interior = 0;
  if (auto st = uavcov_optimal_altitude(scn.ptr, &z, &interior, &h); st != UAVCOV_OK)
    return report(st, "optimal altitude");
  std::printf("z_opt = %.9f%s\nH_opt = %.9g\n", z, interior ? "" : " (band endpoint)", h);
  return kExitOk;
}

int cmd_criterion(const std::string& scenario, const std::string& csv) {
  ScenarioHandle scn;
  if (auto st = load(scenario, std::nullopt, scn); st != UAVCOV_OK) return report(st, "loading " + scenario);
  double H = 0.0;
  if (auto st = uavcov_criterion_from_csv(scn.ptr, csv.c_str(), &H); st != UAVCOV_OK) return report(st, csv);
  std::printf("H = %.17g\n", H);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed UAV visual coverage simulator"};
  app.set_version_flag("--version", std::string(uavcov_version()));
  app.require_subcommand(1);

  std::string scenario, out_dir, csv;
  std::vector<std::string> snapshots;
  bool check_gradient = false;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run a scenario and write trajectory, metrics and snapshots");
  run->add_option("scenario", scenario, "Bundled scenario name or path to a JSON file")->required();
  run->add_option("--snapshots", snapshots, "Steps to render: first, last or step numbers")->delimiter(',');
  run->add_flag("--check-gradient", check_gradient, "Compare the control law with finite differences first");
  run->add_option("--out", out_dir, "Output directory (overrides the scenario)");
  run->add_option("--seed", seed, "Seed for randomly placed nodes");

  auto* opt = app.add_subcommand("optimal-altitude", "Print the optimal altitude and H_opt");
  opt->add_option("scenario", scenario, "Bundled scenario name or path to a JSON file")->required();

  auto* crit = app.add_subcommand("criterion", "Evaluate H at the final state of a trajectory CSV");
  crit->add_option("scenario", scenario, "Bundled scenario name or path to a JSON file")->required();
  crit->add_option("csv", csv, "Trajectory CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  if (*run) return cmd_run(scenario, snapshots, check_gradient, out_dir, seed);
  if (*opt) return cmd_optimal(scenario);
  return cmd_criterion(scenario, csv);
}
