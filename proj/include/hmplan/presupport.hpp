#pragma once

#include <optional>
#include <vector>

#include "hmplan/grid.hpp"
#include "hmplan/nullifier.hpp"
#include "hmplan/tools.hpp"

namespace hmplan {

// Support pre-processing: find the voxels of the input model that violate the
// 45-degree self-support rule, and grow machinable support pillars beneath
// them before planning starts. Pillars are recorded as accretions prefixed to
// the inverse sequence, so their forward counterparts are the last SM
// operations and remove the supports last-in-first-out.

// The voxels of H with k > 0 and no solid supporting neighbor, sorted by
// descending minimum face distance to H's bounding box (inner voxels first;
// ties in (k,j,i) order).
std::vector<VoxelIndex> find_unsupported(const VoxelGrid& H);

struct SupportGrowth {
  std::vector<InverseOp> ops;          // committed to the work grid, bottom-up
  std::optional<VoxelIndex> touching;  // ground contact reported as the base voxel
  bool found = false;
};

// Cone search below v (each level down widens the admissible Chebyshev offset
// by one) for the shortest buildable pillar reaching the ground or a
// self-supported voxel of H (a solid H voxel outside phi). Candidates must be
// machinable (some cutter orientation collision-free) at admission and again
// when the pillar is committed; on any failure nothing is kept.
SupportGrowth grow_support(VoxelGrid& work, const VoxelIndex& v, const ToolSpec& tool,
                           const VoxelGrid& H, const VoxelMask& phi);

// Runs growth over all of find_unsupported(H), skipping voxels that earlier
// pillars already support. Mutates work into the enriched model and returns
// the accretion prefix in application order.
std::vector<InverseOp> preprocess(VoxelGrid& work, const ToolSpec& tool, int delta);

}  // namespace hmplan
