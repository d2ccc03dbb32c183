#pragma once

// Output files: trajectory CSV, metrics JSON timeline and SVG snapshots of
// the partition.

#include <filesystem>
#include <vector>

#include "uavcov/sim.hpp"

namespace uavcov {

// One row per node per recorded step: step,t,id,x,y,z,u_x,u_y,u_z.
void write_trajectory_csv(const TrajectoryLog& log, const std::filesystem::path& path);
// Timeline of t, H, H_max_form, H_over_Hopt, covered_area_ratio plus run
// summary fields. Unevaluated max-form values are null.
void write_metrics_json(const TrajectoryLog& log, const std::filesystem::path& path);

struct TrajectoryRow {
  int step = 0;
  double t = 0.0;
  NodeState node;
  Point2 u_q;
  double u_z = 0.0;
};
std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path);
// Nodes of the last recorded step in a CSV written by write_trajectory_csv.
std::vector<NodeState> final_nodes_from_csv(const std::filesystem::path& path);

// Omega, every sensing circle and the labeled boundary of every nonempty
// cell.
void write_snapshot_svg(const SwarmState& s, const std::vector<Cell>& cells,
                        const std::filesystem::path& path);

}  // namespace uavcov
