#pragma once

#include <vector>

#include "hmplan/grid.hpp"
#include "hmplan/voxel.hpp"

namespace hmplan {

// Subtractive tool length in voxels plus the fixed tool model: a flat
// printhead occupying everything above the deposition height, and a
// cylindrical cutter reaching in along one of five axes. The supporting angle
// is fixed at 45 degrees (encoded in the supporting-neighbor offsets).
struct ToolSpec {
  int sm_length = 10;  // must be >= 2

  explicit ToolSpec(int length = 10);
};

// True iff depositing at v would collide with existing material: any solid
// voxel strictly above height k (the printhead occupies the whole half-space
// above). Voxels in virtual_empty do not collide. O(1) without a mask.
bool am_collides(const VoxelGrid& g, const VoxelIndex& v,
                 const VoxelMask* virtual_empty = nullptr);

// True iff a cutter of length sm_length approaching v along orient would hit
// a solid voxel. The occupancy set is the approach ray through v plus the
// half-space beyond the tool length; it never contains v itself. Half-space
// terms are answered from the global extrema, ray terms by scans bounded by
// the per-row extrema.
bool sm_collides(const VoxelGrid& g, const VoxelIndex& v, SmOrientation orient,
                 int sm_length, const VoxelMask* virtual_empty = nullptr);

// Orientations whose sm_collides is false, in preference order
// (-z, +x, -x, +y, -y).
std::vector<SmOrientation> accessible_orientations(const VoxelGrid& g,
                                                   const VoxelIndex& v, int sm_length,
                                                   const VoxelMask* virtual_empty = nullptr);

}  // namespace hmplan
