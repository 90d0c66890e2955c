#include "hmplan/stability.hpp"

#include <cstring>
#include <deque>
#include <stdexcept>
#include <vector>

#include "hmplan/kernels.hpp"

namespace hmplan {

namespace {

// Bit-plane dilation by the 18-neighborhood. Writes dilate(frontier) into
// dst (already zeroed). Within a layer the neighborhood is the full 3x3 box
// (separable: x spread then row shifts); across layers it is the plus shape
// (x spread of the same row, plus the rows one step in +-j unshifted).
void dilate18(uint64_t* dst, const uint64_t* frontier, uint64_t* scratch_layer, int ny,
              int nz, int wpr) {
  const size_t layer_words = static_cast<size_t>(ny) * wpr;
  const auto& K = kernels::active_ops();

  for (int k = 0; k < nz; ++k) {
    const uint64_t* f_layer = frontier + k * layer_words;
    uint64_t* d_layer = dst + k * layer_words;

    // In-plane box: s = spread_x(F); D |= s | shift_j(s, +1) | shift_j(s, -1).
    std::memset(scratch_layer, 0, layer_words * sizeof(uint64_t));
    K.spread_x_or(scratch_layer, f_layer, layer_words);
    K.or_into(d_layer, scratch_layer, layer_words);
    K.or_into(d_layer + wpr, scratch_layer, layer_words - wpr);
    K.or_into(d_layer, scratch_layer + wpr, layer_words - wpr);

    // Cross-layer plus shape from k into k-1 and k+1.
    for (int dk : {-1, 1}) {
      int kk = k + dk;
      if (kk < 0 || kk >= nz) continue;
      uint64_t* d_other = dst + kk * layer_words;
      K.spread_x_or(d_other, f_layer, layer_words);
      K.or_into(d_other + wpr, f_layer, layer_words - wpr);
      K.or_into(d_other, f_layer + wpr, layer_words - wpr);
    }
  }
}

struct SweepBuffers {
  std::vector<uint64_t> solid_eff, visited, frontier, next, dilated, scratch_layer;
};

// Flood from the base layer over (solid & ~mask [& ~exclude]); returns true
// iff every such voxel is reached.
bool base_flood_covers_all(const VoxelGrid& g, const VoxelMask* mask,
                           const VoxelIndex* exclude) {
  const size_t n = g.word_count();
  const int wpr = g.words_per_row();
  const size_t layer_words = static_cast<size_t>(g.ny()) * wpr;
  const auto& K = kernels::active_ops();

  thread_local SweepBuffers buf;
  auto ensure = [n](std::vector<uint64_t>& v) {
    if (v.size() < n) v.resize(n);
  };
  ensure(buf.solid_eff);
  ensure(buf.visited);
  ensure(buf.frontier);
  ensure(buf.next);
  ensure(buf.dilated);
  if (buf.scratch_layer.size() < layer_words) buf.scratch_layer.resize(layer_words);

  uint64_t* solid_eff = buf.solid_eff.data();
  if (mask && mask->size() > 0)
    K.andnot(solid_eff, g.words(), mask->words(), n);
  else
    std::memcpy(solid_eff, g.words(), n * sizeof(uint64_t));
  if (exclude) {
    size_t w = (static_cast<size_t>(exclude->k) * g.ny() + exclude->j) * wpr +
               (static_cast<size_t>(exclude->i) >> 6);
    solid_eff[w] &= ~(uint64_t(1) << (exclude->i & 63));
  }

  uint64_t target = K.popcount(solid_eff, n);
  if (target == 0) return true;

  // Seeds: base layer of the effective solid.
  uint64_t* visited = buf.visited.data();
  std::memset(visited, 0, n * sizeof(uint64_t));
  std::memcpy(visited, solid_eff, layer_words * sizeof(uint64_t));
  uint64_t* frontier = buf.frontier.data();
  std::memcpy(frontier, visited, n * sizeof(uint64_t));
  uint64_t reached = K.popcount(visited, layer_words);
  if (reached == target) return true;
  if (reached == 0) return false;  // nothing on the base layer

  uint64_t* next = buf.next.data();
  uint64_t* dilated = buf.dilated.data();
  for (;;) {
    std::memset(dilated, 0, n * sizeof(uint64_t));
    dilate18(dilated, frontier, buf.scratch_layer.data(), g.ny(), g.nz(), wpr);
    if (!K.and_andnot_any(next, dilated, solid_eff, visited, n)) break;
    K.or_into(visited, next, n);
    std::swap(frontier, next);
  }
  return K.popcount(visited, n) == target;
}

// Union-find over at most 18 seed labels.
struct SeedUnion {
  int parent[18];
  bool grounded[18];
  int live = 0;  // distinct roots among seeds

  void init(int n) {
    live = n;
    for (int a = 0; a < n; ++a) {
      parent[a] = a;
      grounded[a] = false;
    }
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    parent[b] = a;
    grounded[a] = grounded[a] || grounded[b];
    --live;
  }
  void ground(int a) { grounded[find(a)] = true; }
  bool all_grounded(int n) {
    for (int a = 0; a < n; ++a)
      if (!grounded[find(a)]) return false;
    return true;
  }
};

// Seeded component search shared by the localized and the exact check.
// Floods the solid voxels (mask-aware, v excluded) from v's solid neighbors,
// merging seed labels on contact; region bounds the search when non-null.
bool seeded_removal_check(const VoxelGrid& g, const VoxelIndex& v, const VoxelMask* mask,
                          const Box* region) {
  VoxelIndex seeds[18];
  int seed_count = 0;
  {
    VoxelIndex nbuf[18];
    int n = neighbors18(g, v, nbuf);
    for (int a = 0; a < n; ++a)
      if (solid_under(g, mask, nbuf[a])) seeds[seed_count++] = nbuf[a];
  }
  if (seed_count == 0) {
    // A stable model cannot hold an isolated elevated voxel; if it does the
    // precondition was violated, so fail safe.
    return v.k == 0;
  }

  SeedUnion su;
  su.init(seed_count);

  // Label per visited voxel, 0 = unvisited, else seed label + 1.
  thread_local std::vector<uint8_t> labels;
  thread_local std::vector<size_t> touched;
  size_t cells = static_cast<size_t>(g.nx()) * g.ny() * g.nz();
  if (labels.size() < cells) labels.assign(cells, 0);
  touched.clear();
  auto cell_id = [&g](const VoxelIndex& w) {
    return (static_cast<size_t>(w.k) * g.ny() + w.j) * g.nx() + w.i;
  };

  std::deque<VoxelIndex> queue;
  bool early_single_ok = v.k > 0;

  for (int s = 0; s < seed_count; ++s) {
    size_t id = cell_id(seeds[s]);
    if (labels[id]) {
      su.unite(static_cast<int>(labels[id]) - 1, s);
      continue;
    }
    labels[id] = static_cast<uint8_t>(s + 1);
    touched.push_back(id);
    if (seeds[s].k == 0) su.ground(s);
    queue.push_back(seeds[s]);
  }

  bool result;
  VoxelIndex nbuf[18];
  for (;;) {
    if (early_single_ok && su.live == 1) {
      result = true;  // all neighbors in one component and v above the base
      break;
    }
    if (queue.empty()) {
      result = su.all_grounded(seed_count);
      break;
    }
    VoxelIndex cur = queue.front();
    queue.pop_front();
    int cur_label = static_cast<int>(labels[cell_id(cur)]) - 1;

    int n = neighbors18(g, cur, nbuf);
    for (int a = 0; a < n; ++a) {
      const VoxelIndex& w = nbuf[a];
      if (w == v) continue;
      if (region && !region->contains(w)) continue;
      if (!solid_under(g, mask, w)) continue;
      size_t id = cell_id(w);
      if (labels[id]) {
        su.unite(cur_label, static_cast<int>(labels[id]) - 1);
        continue;
      }
      labels[id] = static_cast<uint8_t>(cur_label + 1);
      touched.push_back(id);
      if (w.k == 0) su.ground(cur_label);
      queue.push_back(w);
    }
  }

  for (size_t id : touched) labels[id] = 0;
  return result;
}

}  // namespace

bool is_stable_global(const VoxelGrid& g, const VoxelMask* mask) {
  return base_flood_covers_all(g, mask, nullptr);
}

bool remains_stable_after_removal_oracle(const VoxelGrid& g, const VoxelIndex& v,
                                         const VoxelMask* mask) {
  return base_flood_covers_all(g, mask, &v);
}

bool remains_stable_local(const VoxelGrid& g, const VoxelIndex& v, int delta,
                          const VoxelMask* mask) {
  if (delta < 1) throw std::invalid_argument("delta must be at least 1");
  Box box = clamp_box(g, v, delta);
  return seeded_removal_check(g, v, mask, &box);
}

bool remains_stable_exact(const VoxelGrid& g, const VoxelIndex& v, const VoxelMask* mask) {
  return seeded_removal_check(g, v, mask, nullptr);
}

}  // namespace hmplan
