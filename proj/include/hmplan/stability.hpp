#pragma once

#include "hmplan/grid.hpp"
#include "hmplan/voxel.hpp"

namespace hmplan {

// A model is stable when every solid voxel is connected (face/edge adjacency)
// to some voxel on the base layer k = 0. These checks come in three strengths:
//
//  - is_stable_global: from-scratch flood from the base over the packed bit
//    planes. The reference; vacuously true for the empty model.
//  - remains_stable_after_removal_oracle: is_stable_global with one voxel
//    virtually removed. Testing reference.
//  - remains_stable_local: the Delta-bounded localized check. One-sided: it
//    may call a stable removal unstable, never the reverse. Requires the
//    masked model to be stable beforehand.
//  - remains_stable_exact: the unbounded exact variant of the localized
//    search (no Delta box). Equivalent to the oracle on stable inputs; used
//    by the replay verifier.

bool is_stable_global(const VoxelGrid& g, const VoxelMask* virtual_empty = nullptr);

// Oracle for "grid minus mask minus {v} is stable". Pre: v solid and the
// masked model stable.
bool remains_stable_after_removal_oracle(const VoxelGrid& g, const VoxelIndex& v,
                                         const VoxelMask* virtual_empty = nullptr);

// Localized check, search radius delta (Chebyshev box around v):
//   1. collect the solid voxels connected to v within the box;
//   2. flood them from v's solid neighbors, partitioning into components;
//   3. one component and k(v) > 0  -> stable;
//   4. otherwise stable iff every component holds a k = 0 voxel inside the
//      box. Components touching the box wall get no credit for it.
// Throws std::invalid_argument for delta < 1.
bool remains_stable_local(const VoxelGrid& g, const VoxelIndex& v, int delta,
                          const VoxelMask* virtual_empty = nullptr);

// Unbounded exact version of the same seeded search; early-outs as soon as
// all of v's neighbors are proven base-connected (or mutually connected when
// k(v) > 0). Pre: masked model stable.
bool remains_stable_exact(const VoxelGrid& g, const VoxelIndex& v,
                          const VoxelMask* virtual_empty = nullptr);

}  // namespace hmplan
