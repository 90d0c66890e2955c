#include "hmplan/feasibility.hpp"

#include <stdexcept>

namespace hmplan {

namespace {

bool self_supported(const VoxelGrid& g, const VoxelMask* mask, const VoxelIndex& v) {
  if (v.k == 0) return true;  // the platform carries the first layer
  VoxelIndex buf[5];
  int n = supporting_neighbors(g, v, buf);
  for (int a = 0; a < n; ++a)
    if (solid_under(g, mask, buf[a])) return true;
  return false;
}

}  // namespace

bool is_am_feasible(const FeasibilityContext& ctx, const VoxelIndex& v) {
  if (!ctx.grid.in_bounds(v)) throw std::invalid_argument("is_am_feasible: out of bounds");
  if (solid_under(ctx.grid, ctx.lambda, v))
    throw std::invalid_argument("is_am_feasible: voxel is solid");
  return self_supported(ctx.grid, ctx.lambda, v) && !am_collides(ctx.grid, v, ctx.lambda);
}

bool is_erosion_feasible(const FeasibilityContext& ctx, const VoxelIndex& v) {
  const VoxelGrid& g = ctx.grid;
  if (!g.in_bounds(v) || !g.is_solid(v))
    throw std::invalid_argument("is_erosion_feasible: voxel must be solid");
  if (v.k != g.max_solid_k())
    throw std::invalid_argument("is_erosion_feasible: erosion is restricted to the top layer");
  if (masked(ctx.lambda, v))
    throw std::invalid_argument("is_erosion_feasible: voxel already certified");

  // AM feasibility of v with v itself conceptually empty. Its own state never
  // enters the predicates (supports live at k-1, collisions strictly above k).
  if (!self_supported(g, ctx.lambda, v)) return false;
  if (am_collides(g, v, ctx.lambda)) return false;

  if (ctx.stability == StabilityMode::Oracle)
    return remains_stable_after_removal_oracle(g, v, ctx.lambda);
  return remains_stable_local(g, v, ctx.delta, ctx.lambda);
}

std::optional<SmOrientation> is_accretion_feasible(const FeasibilityContext& ctx,
                                                   const VoxelIndex& v) {
  const VoxelGrid& g = ctx.grid;
  if (!g.in_bounds(v) || g.is_solid(v)) return std::nullopt;

  VoxelIndex nbuf[18];
  int n = neighbors18(g, v, nbuf);
  bool has_neighbor = false;
  for (int a = 0; a < n; ++a)
    if (solid_under(g, ctx.lambda, nbuf[a])) {
      has_neighbor = true;
      break;
    }
  if (!has_neighbor) return std::nullopt;

  for (SmOrientation o : kSmOrientations)
    if (!sm_collides(g, v, o, ctx.tool.sm_length, nullptr)) return o;
  return std::nullopt;
}

}  // namespace hmplan
