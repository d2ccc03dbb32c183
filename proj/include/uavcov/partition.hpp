#pragma once

// Responsibility cells W_i = { q in C_i n Omega : f_i(q) >= f_j(q) for all j }
// with every boundary piece labeled by where it came from.

#include <cstdint>
#include <vector>

#include "uavcov/geom.hpp"
#include "uavcov/quality.hpp"

namespace uavcov {

struct SwarmState {
  std::vector<NodeState> nodes;
  QualityModel model;
  geom::ConvexPolygon omega;

  // Unique ids, altitudes within the band, ground positions inside omega.
  // Throws ValidationError.
  void validate() const;
  // Index of the node with the given id, or -1.
  int index_of(int id) const;
  // Hash of every field; cells remember the value they were built from.
  std::uint64_t fingerprint() const;
};

// Indices j != i whose closed sensing disks meet C_i.
std::vector<int> neighbor_set(const SwarmState& s, int i);

// Radius of the sphere around node i that contains every node able to
// share a cell boundary with it.
double comm_radius(const QualityModel& m, double z_i);

struct Cell {
  int owner = -1;  // node id
  geom::ArcRegion region;
  std::vector<int> neighbor_ids;
  std::uint64_t state_fingerprint = 0;
};

// Cell of the node at index i.
Cell compute_cell(const SwarmState& s, int i);
// One cell per node, in node order. Cells are computed in parallel.
std::vector<Cell> compute_all_cells(const SwarmState& s);

// Pairs (inner index, outer index) where C_inner lies strictly inside
// C_outer; gradient flow may never separate such nodes.
std::vector<std::pair<int, int>> contained_pairs(const SwarmState& s);

}  // namespace uavcov
