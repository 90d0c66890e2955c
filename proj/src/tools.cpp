#include "hmplan/tools.hpp"

#include <algorithm>
#include <stdexcept>

namespace hmplan {

ToolSpec::ToolSpec(int length) : sm_length(length) {
  if (length < 2) throw std::invalid_argument("SM tool length must be at least 2");
}

namespace {

// Any unmasked solid voxel in layers [k_lo, k_hi]?
bool any_solid_in_layers(const VoxelGrid& g, const VoxelMask* mask, int k_lo, int k_hi) {
  k_lo = std::max(k_lo, 0);
  k_hi = std::min(k_hi, g.max_solid_k());
  for (int k = k_lo; k <= k_hi; ++k)
    if (g.layer_count(k) > (mask ? mask->count_at_k(k) : 0)) return true;
  return false;
}

// Any unmasked solid voxel with i in [lo, hi] anywhere in the grid?
bool any_solid_in_i_range(const VoxelGrid& g, const VoxelMask* mask, int lo, int hi) {
  if (g.solid_count() == 0) return false;
  lo = std::max(lo, g.min_i());
  hi = std::min(hi, g.max_i());
  for (int i = lo; i <= hi; ++i)
    if (g.count_at_i(i) > (mask ? mask->count_at_i(i) : 0)) return true;
  return false;
}

bool any_solid_in_j_range(const VoxelGrid& g, const VoxelMask* mask, int lo, int hi) {
  if (g.solid_count() == 0) return false;
  lo = std::max(lo, g.min_j());
  hi = std::min(hi, g.max_j());
  for (int j = lo; j <= hi; ++j)
    if (g.count_at_j(j) > (mask ? mask->count_at_j(j) : 0)) return true;
  return false;
}

// Column above v occupied (strictly k' > k)?
bool column_above_occupied(const VoxelGrid& g, const VoxelMask* mask, const VoxelIndex& v) {
  int top = g.column_top(v.i, v.j);
  if (top <= v.k) return false;
  if (!mask || mask->size() == 0) return true;
  for (int k = v.k + 1; k <= top; ++k)
    if (solid_under(g, mask, {v.i, v.j, k})) return true;
  return false;
}

// Row segment (a, j, k) for a in [lo, hi] contains an unmasked solid?
bool row_segment_occupied(const VoxelGrid& g, const VoxelMask* mask, int j, int k, int lo,
                          int hi) {
  int rmin = g.row_min_i(j, k);
  if (rmin < 0) return false;
  lo = std::max(lo, rmin);
  hi = std::min(hi, g.row_max_i(j, k));
  for (int i = lo; i <= hi; ++i)
    if (solid_under(g, mask, {i, j, k})) return true;
  return false;
}

bool col_segment_occupied(const VoxelGrid& g, const VoxelMask* mask, int i, int k, int lo,
                          int hi) {
  int cmin = g.col_min_j(i, k);
  if (cmin < 0) return false;
  lo = std::max(lo, cmin);
  hi = std::min(hi, g.col_max_j(i, k));
  for (int j = lo; j <= hi; ++j)
    if (solid_under(g, mask, {i, j, k})) return true;
  return false;
}

}  // namespace

bool am_collides(const VoxelGrid& g, const VoxelIndex& v, const VoxelMask* mask) {
  return any_solid_in_layers(g, mask, v.k + 1, g.nz() - 1);
}

bool sm_collides(const VoxelGrid& g, const VoxelIndex& v, SmOrientation orient,
                 int sm_length, const VoxelMask* mask) {
  const int L = sm_length;
  switch (orient) {
    case SmOrientation::NegZ:
      return column_above_occupied(g, mask, v) ||
             any_solid_in_layers(g, mask, v.k + L, g.nz() - 1);
    case SmOrientation::PosX:
      return row_segment_occupied(g, mask, v.j, v.k, 0, v.i - 1) ||
             any_solid_in_i_range(g, mask, 0, v.i - L);
    case SmOrientation::NegX:
      return row_segment_occupied(g, mask, v.j, v.k, v.i + 1, g.nx() - 1) ||
             any_solid_in_i_range(g, mask, v.i + L, g.nx() - 1);
    case SmOrientation::PosY:
      return col_segment_occupied(g, mask, v.i, v.k, 0, v.j - 1) ||
             any_solid_in_j_range(g, mask, 0, v.j - L);
    case SmOrientation::NegY:
      return col_segment_occupied(g, mask, v.i, v.k, v.j + 1, g.ny() - 1) ||
             any_solid_in_j_range(g, mask, v.j + L, g.ny() - 1);
  }
  throw std::invalid_argument("invalid SM orientation");
}

std::vector<SmOrientation> accessible_orientations(const VoxelGrid& g, const VoxelIndex& v,
                                                   int sm_length, const VoxelMask* mask) {
  std::vector<SmOrientation> out;
  for (SmOrientation o : kSmOrientations)
    if (!sm_collides(g, v, o, sm_length, mask)) out.push_back(o);
  return out;
}

}  // namespace hmplan
