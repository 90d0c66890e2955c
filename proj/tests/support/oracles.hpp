#pragma once

// Independent reference implementations the tests compare against. These
// deliberately share no code with the library paths they check: connectivity
// is union-find over pairwise adjacency (the library floods), tool collisions
// are literal membership scans of the occupancy-set inequalities (the library
// uses acceleration structures), and the bit kernels get a per-bit loop.

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "hmplan/grid.hpp"
#include "hmplan/nullifier.hpp"
#include "hmplan/stability.hpp"
#include "hmplan/tools.hpp"
#include "hmplan/voxel.hpp"

namespace hmplan::testing {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

inline size_t cell_id(const VoxelGrid& g, const VoxelIndex& v) {
  return (static_cast<size_t>(v.k) * g.ny() + v.j) * g.nx() + v.i;
}

inline bool is_neighbor_offset(int di, int dj, int dk) {
  if (di < -1 || di > 1 || dj < -1 || dj > 1 || dk < -1 || dk > 1) return false;
  int nz = (di != 0) + (dj != 0) + (dk != 0);
  return nz == 1 || nz == 2;
}

// Union-find over all pairs of adjacent solid voxels (mask-aware).
inline UnionFind connectivity_oracle(const VoxelGrid& g, const VoxelMask* mask = nullptr) {
  UnionFind uf(static_cast<size_t>(g.nx()) * g.ny() * g.nz());
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        VoxelIndex v{i, j, k};
        if (!solid_under(g, mask, v)) continue;
        for (int dk = -1; dk <= 1; ++dk)
          for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
              if (!is_neighbor_offset(di, dj, dk)) continue;
              VoxelIndex w{i + di, j + dj, k + dk};
              if (!g.in_bounds(w) || !solid_under(g, mask, w)) continue;
              uf.unite(static_cast<int>(cell_id(g, v)), static_cast<int>(cell_id(g, w)));
            }
      }
  return uf;
}

// Stability by union-find: every solid voxel shares a component with some
// base-layer solid voxel.
inline bool stable_oracle(const VoxelGrid& g, const VoxelMask* mask = nullptr,
                          const VoxelIndex* removed = nullptr) {
  UnionFind uf(static_cast<size_t>(g.nx()) * g.ny() * g.nz());
  auto live = [&](const VoxelIndex& v) {
    if (removed && v == *removed) return false;
    return solid_under(g, mask, v);
  };
  std::vector<VoxelIndex> solids;
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        VoxelIndex v{i, j, k};
        if (!live(v)) continue;
        solids.push_back(v);
        for (int dk = -1; dk <= 1; ++dk)
          for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
              if (!is_neighbor_offset(di, dj, dk)) continue;
              VoxelIndex w{i + di, j + dj, k + dk};
              if (!g.in_bounds(w) || !live(w)) continue;
              uf.unite(static_cast<int>(cell_id(g, v)), static_cast<int>(cell_id(g, w)));
            }
      }
  std::vector<char> root_grounded(uf.parent.size(), 0);
  for (const VoxelIndex& v : solids)
    if (v.k == 0) root_grounded[uf.find(static_cast<int>(cell_id(g, v)))] = 1;
  for (const VoxelIndex& v : solids)
    if (!root_grounded[uf.find(static_cast<int>(cell_id(g, v)))]) return false;
  return true;
}

// Literal membership test of the five SM occupancy sets and the AM set.
inline bool sm_occupancy_contains(const VoxelIndex& v, SmOrientation o, int L,
                                  const VoxelIndex& w) {
  switch (o) {
    case SmOrientation::NegZ:
      return w.k >= v.k + L || (w.i == v.i && w.j == v.j && w.k > v.k);
    case SmOrientation::PosX:
      return w.i <= v.i - L || (w.j == v.j && w.k == v.k && w.i < v.i);
    case SmOrientation::NegX:
      return w.i >= v.i + L || (w.j == v.j && w.k == v.k && w.i > v.i);
    case SmOrientation::PosY:
      return w.j <= v.j - L || (w.i == v.i && w.k == v.k && w.j < v.j);
    case SmOrientation::NegY:
      return w.j >= v.j + L || (w.i == v.i && w.k == v.k && w.j > v.j);
  }
  return false;
}

inline bool sm_collides_oracle(const VoxelGrid& g, const VoxelIndex& v, SmOrientation o,
                               int L, const VoxelMask* mask = nullptr) {
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        VoxelIndex w{i, j, k};
        if (solid_under(g, mask, w) && sm_occupancy_contains(v, o, L, w)) return true;
      }
  return false;
}

inline bool am_collides_oracle(const VoxelGrid& g, const VoxelIndex& v,
                               const VoxelMask* mask = nullptr) {
  for (int k = v.k + 1; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        if (solid_under(g, mask, {i, j, k})) return true;
  return false;
}

// Inverse-time validation: step the inverse sequence from the model it
// nullifies, checking every op's own feasibility with oracle-grade stability
// (independent of the planner's localized shortcut), and require the walk to
// end empty. Base-layer accretions are accepted without a solid neighbor:
// pre-processing pillars may seed on bare ground, where connectivity to the
// base is the cell itself.
struct InverseValidation {
  bool ok = true;
  size_t step = 0;
  std::string why;
};

inline InverseValidation validate_inverse(const VoxelGrid& initial,
                                          const std::vector<InverseOp>& ops, int tool_length) {
  InverseValidation out;
  auto fail = [&](size_t step, const std::string& why) {
    out.ok = false;
    out.step = step;
    out.why = why;
    return out;
  };
  VoxelGrid g = initial;
  for (size_t step = 0; step < ops.size(); ++step) {
    const InverseOp& op = ops[step];
    if (!g.in_bounds(op.v)) return fail(step, "out of bounds");
    if (op.kind == OpKind::Accretion) {
      if (g.is_solid(op.v)) return fail(step, "accretion on solid");
      if (!op.orient) return fail(step, "accretion without orientation");
      if (op.v.k > 0) {
        bool neighbor = false;
        for (const VoxelIndex& w : neighbors18(g, op.v)) neighbor |= g.is_solid(w);
        if (!neighbor) return fail(step, "accretion with no solid neighbor");
      }
      if (sm_collides(g, op.v, *op.orient, tool_length))
        return fail(step, "accretion not machinable");
      g.set_state(op.v, true);
    } else {
      if (!g.is_solid(op.v)) return fail(step, "erosion on empty");
      bool supported = op.v.k == 0;
      for (const VoxelIndex& w : supporting_neighbors(g, op.v)) supported |= g.is_solid(w);
      if (!supported) return fail(step, "erosion of an unsupported cell");
      if (am_collides(g, op.v)) return fail(step, "erosion below other material");
      if (!remains_stable_exact(g, op.v)) return fail(step, "erosion breaks stability");
      g.set_state(op.v, false);
    }
  }
  if (g.solid_count() != 0) return fail(ops.size(), "sequence does not reach the empty state");
  return out;
}

// Per-bit reference for the spread kernel.
inline std::vector<uint64_t> spread_x_reference(const std::vector<uint64_t>& src) {
  size_t nbits = src.size() * 64;
  auto get = [&](size_t b) { return (src[b / 64] >> (b % 64)) & 1u; };
  std::vector<uint64_t> out(src.size(), 0);
  for (size_t b = 0; b < nbits; ++b) {
    bool set = get(b) || (b > 0 && get(b - 1)) || (b + 1 < nbits && get(b + 1));
    if (set) out[b / 64] |= uint64_t(1) << (b % 64);
  }
  return out;
}

}  // namespace hmplan::testing
