#pragma once

#include <optional>

#include "hmplan/grid.hpp"
#include "hmplan/stability.hpp"
#include "hmplan/tools.hpp"
#include "hmplan/voxel.hpp"

namespace hmplan {

enum class StabilityMode { Local, Oracle };

// Everything the feasibility predicates read: the current grid, the tool,
// the set Lambda of top-layer voxels already certified for erosion this round
// (treated as empty), and the search radius of the localized stability check.
struct FeasibilityContext {
  const VoxelGrid& grid;
  ToolSpec tool;
  const VoxelMask* lambda = nullptr;  // only top-layer solid voxels
  int delta = 10;
  StabilityMode stability = StabilityMode::Local;
};

// Deposition at v is feasible: self-supported (k = 0, or some unmasked solid
// supporting neighbor at height k-1) and collision-free above. v itself must
// be empty or masked.
bool is_am_feasible(const FeasibilityContext& ctx, const VoxelIndex& v);

// Erosion of v (solid, on the topmost layer, not in Lambda): the matching AM
// operation must be feasible with Lambda treated as empty, and the model
// without v and Lambda must stay stable.
bool is_erosion_feasible(const FeasibilityContext& ctx, const VoxelIndex& v);

// Accretion at v (empty): some unmasked solid voxel among the 18 neighbors,
// and at least one collision-free SM orientation against the real grid (the
// forward SM op runs at a state where Lambda voxels are solid again, so the
// mask must not weaken the collision test). Returns the first feasible
// orientation in preference order, or nullopt.
std::optional<SmOrientation> is_accretion_feasible(const FeasibilityContext& ctx,
                                                   const VoxelIndex& v);

}  // namespace hmplan
