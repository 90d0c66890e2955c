#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmplan/replay.hpp"
#include "hmplan/voxel.hpp"

namespace hmplan {

// A program-contiguous group of same-kind operations that one tool engagement
// can execute: deposition ops on one layer forming one 8-connected region, or
// machining ops sharing an orientation and forming one 18-connected region.
struct Patch {
  ForwardKind kind;
  std::optional<SmOrientation> orient;
  int layer = -1;  // AM patches only
  std::vector<VoxelIndex> voxels;  // program order
  size_t first_op = 0, last_op = 0;
};

// Greedy left-to-right grouping; an op joins the open patch iff it matches
// kind (and orientation for SM), stays on the same layer for AM, and touches
// some member. Patch order preserves program order.
std::vector<Patch> group_patches(const std::vector<ForwardOp>& program);

struct ToolpathPath {
  ForwardKind kind;
  std::optional<SmOrientation> orient;
  bool tool_change = false;  // a tool engagement starts here (first path included)
  std::vector<std::string> markers;
  std::vector<std::array<double, 3>> polyline;  // physical mm coordinates

  friend bool operator==(const ToolpathPath&, const ToolpathPath&) = default;
};

struct ToolpathDocument {
  int version = 1;
  double voxel_size_mm = 1.2;
  double nozzle_mm = 0.6;
  int tool_length_voxels = 10;
  std::vector<ToolpathPath> paths;

  int64_t tool_change_count() const;

  friend bool operator==(const ToolpathDocument&, const ToolpathDocument&) = default;
};

// One extrusion pass of a deposition patch: sub-pass p of row j covering
// cells [i0, i1] on layer k. Exposed so the coverage property can be checked
// without re-parsing polylines.
struct AmPass {
  int k, j, i0, i1, p;
};
std::vector<AmPass> am_passes_for_patch(const Patch& patch, int passes_per_row);

// Emission: deposition patches become zig-zag polylines with line spacing
// equal to the nozzle diameter (voxel_size must be a multiple of it);
// machining patches become per-voxel plunge/retract moves along the tool
// axis, ordered boustrophedon in the plane normal to the axis. Horizontal
// machining patches carry a fixture-rotation marker.
ToolpathDocument emit_toolpath(const std::vector<Patch>& patches, double voxel_size,
                               double nozzle, int tool_length_voxels);

}  // namespace hmplan
