#pragma once

// Deterministic model generators for the property and acceptance suites.
// Everything is seeded splitmix64: reruns are bit-identical.

#include <cstdint>
#include <vector>

#include "hmplan/grid.hpp"
#include "hmplan/stability.hpp"
#include "hmplan/voxel.hpp"

namespace hmplan::testing {

struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, n)
  int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
};

// Keep only the material connected to the base layer; guarantees stability.
// Adds a single base voxel when nothing survives.
inline void drop_floating(VoxelGrid& g) {
  std::vector<VoxelIndex> seeds;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (g.is_solid({i, j, 0})) seeds.push_back({i, j, 0});
  VoxelMask keep(g.nx(), g.ny(), g.nz());
  for (const auto& comp : flood_components(g, seeds))
    for (const VoxelIndex& v : comp) keep.add(v);
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        VoxelIndex v{i, j, k};
        if (g.is_solid(v) && !keep.contains(v)) g.set_state(v, false);
      }
  if (g.solid_count() == 0) g.set_state({g.nx() / 2, g.ny() / 2, 0}, true);
}

// Union of random axis-aligned boxes dropped toward the ground, then pruned
// to the base-connected part.
inline VoxelGrid random_blob(Rng& rng, int nx, int ny, int nz, int boxes) {
  VoxelGrid g(nx, ny, nz);
  for (int b = 0; b < boxes; ++b) {
    int sx = 1 + rng.below(std::max(1, nx / 2));
    int sy = 1 + rng.below(std::max(1, ny / 2));
    int sz = 1 + rng.below(std::max(1, nz / 2));
    int x0 = rng.below(std::max(1, nx - sx + 1));
    int y0 = rng.below(std::max(1, ny - sy + 1));
    int z0 = rng.below(std::max(1, nz - sz + 1));
    if (b == 0) z0 = 0;  // anchor the first box
    for (int k = z0; k < z0 + sz && k < nz; ++k)
      for (int j = y0; j < y0 + sy && j < ny; ++j)
        for (int i = x0; i < x0 + sx && i < nx; ++i)
          if (rng.chance(0.9)) g.set_state({i, j, k}, true);
  }
  drop_floating(g);
  return g;
}

// Random per-voxel fill pruned to the base-connected part; good for small
// stability trials.
inline VoxelGrid random_fill(Rng& rng, int nx, int ny, int nz, double density) {
  VoxelGrid g(nx, ny, nz);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        if (rng.chance(density)) g.set_state({i, j, k}, true);
  drop_floating(g);
  return g;
}

// A pillar with one or more horizontal arms part-way up.
inline VoxelGrid cantilever(Rng& rng, int nx, int ny, int nz) {
  VoxelGrid g(nx, ny, nz);
  int px = 1 + rng.below(std::max(1, nx / 4));
  int py = 1 + rng.below(std::max(1, ny / 4));
  int height = std::max(3, nz - 1 - rng.below(nz / 3 + 1));
  for (int k = 0; k < height; ++k)
    for (int j = 0; j < py + 1; ++j)
      for (int i = 0; i < px + 1; ++i) g.set_state({i, j, k}, true);
  int arms = 1 + rng.below(2);
  for (int a = 0; a < arms; ++a) {
    int k = height - 1 - rng.below(std::max(1, height / 2));
    int len = 2 + rng.below(std::max(1, nx - px - 2));
    int j = rng.below(py + 1);
    for (int i = px; i < std::min(nx, px + len); ++i) g.set_state({i, j, k}, true);
  }
  return g;
}

// Two pillars joined by an elevated deck.
inline VoxelGrid bridge(Rng& rng, int nx, int ny, int nz) {
  VoxelGrid g(nx, ny, nz);
  int deck_k = std::max(2, nz - 2 - rng.below(std::max(1, nz / 3)));
  int pw = 1 + rng.below(2);
  int depth = 1 + rng.below(std::max(1, ny / 2));
  for (int k = 0; k <= deck_k; ++k)
    for (int j = 0; j < depth; ++j)
      for (int i = 0; i < pw; ++i) {
        g.set_state({i, j, k}, true);
        g.set_state({nx - 1 - i, j, k}, true);
      }
  for (int j = 0; j < depth; ++j)
    for (int i = 0; i < nx; ++i) g.set_state({i, j, deck_k}, true);
  return g;
}

// Hollow box with a roof: interior void, side pocket optional.
inline VoxelGrid cavity(Rng& rng, int nx, int ny, int nz) {
  VoxelGrid g(nx, ny, nz);
  int sx = std::max(5, nx - 2 - rng.below(3));
  int sy = std::max(5, ny - 2 - rng.below(3));
  int sz = std::max(5, nz - 2 - rng.below(3));
  for (int k = 0; k < sz; ++k)
    for (int j = 0; j < sy; ++j)
      for (int i = 0; i < sx; ++i) {
        bool wall = i == 0 || j == 0 || k == 0 || i == sx - 1 || j == sy - 1 || k == sz - 1;
        if (wall) g.set_state({i, j, k}, true);
      }
  // Punch a side window so the cavity is reachable by horizontal tools.
  if (rng.chance(0.7)) {
    int wj = 1 + rng.below(std::max(1, sy - 2));
    int wk = 1 + rng.below(std::max(1, sz - 2));
    g.set_state({0, wj, wk}, false);
  }
  return g;
}

// Widening staircase (each layer a step wider than the one below) topped by
// a lip that hangs past the profile: the lip cells have no support below.
inline VoxelGrid staircase(Rng& rng, int nx, int ny, int nz) {
  VoxelGrid g(nx, ny, nz);
  int depth = 1 + rng.below(std::max(1, ny / 2));
  int step = 1 + rng.below(2);
  int cap = std::max(2, nx - 4);
  int width = step;
  int top = 0, top_width = step;
  for (int k = 0; k < nz - 1; ++k) {
    for (int jj = 0; jj < depth; ++jj)
      for (int ii = 0; ii < width && ii < nx; ++ii) g.set_state({ii, jj, k}, true);
    top = k;
    top_width = width;
    if (width >= cap) break;
    width += step;
  }
  int lip = 2 + rng.below(2);
  for (int jj = 0; jj < depth; ++jj)
    for (int d = 0; d < lip; ++d)
      if (top_width + d < nx) g.set_state({top_width + d, jj, top}, true);
  return g;
}

// The criterion-1 corpus: >= 100 stable models across the generator families.
struct CorpusEntry {
  const char* family;
  VoxelGrid grid;
};

inline std::vector<CorpusEntry> completeness_corpus() {
  std::vector<CorpusEntry> corpus;
  Rng rng(0x5eed5eed5eed5eedull);
  for (int n = 0; n < 40; ++n) {
    int nx = 10 + rng.below(25), ny = 10 + rng.below(25), nz = 8 + rng.below(28);
    corpus.push_back({"blob", random_blob(rng, nx, ny, nz, 3 + rng.below(5))});
  }
  for (int n = 0; n < 15; ++n) {  // dense full-resolution blobs
    int nx = 30 + rng.below(11), ny = 30 + rng.below(11), nz = 30 + rng.below(11);
    corpus.push_back({"blob40", random_blob(rng, nx, ny, nz, 6 + rng.below(4))});
  }
  for (int n = 0; n < 20; ++n) {
    int nx = 10 + rng.below(20), ny = 6 + rng.below(10), nz = 8 + rng.below(16);
    corpus.push_back({"cantilever", cantilever(rng, nx, ny, nz)});
  }
  for (int n = 0; n < 20; ++n) {
    int nx = 12 + rng.below(29), ny = 5 + rng.below(16), nz = 8 + rng.below(24);
    corpus.push_back({"bridge", bridge(rng, nx, ny, nz)});
  }
  for (int n = 0; n < 12; ++n) {
    int nx = 8 + rng.below(14), ny = 8 + rng.below(14), nz = 8 + rng.below(14);
    corpus.push_back({"cavity", cavity(rng, nx, ny, nz)});
  }
  for (int n = 0; n < 13; ++n) {
    int nx = 10 + rng.below(28), ny = 4 + rng.below(10), nz = 8 + rng.below(20);
    corpus.push_back({"staircase", staircase(rng, nx, ny, nz)});
  }
  return corpus;
}

}  // namespace hmplan::testing
