#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hmplan/voxel.hpp"

namespace hmplan {

// Dense binary occupancy grid with the acceleration structures every
// collision and stability query leans on: per-column top height, per-layer
// solid counts, per-row extremal indices and per-axis solid counts. All of
// them are maintained incrementally by set_state; audit() rebuilds them from
// the raw bits and compares.
//
// Storage is a packed bit array, x fastest. Rows are padded to a whole number
// of 64-bit words with at least one slack bit so the bit-plane kernels can
// shift across word boundaries without bleeding between rows. Memory is
// roughly nx*ny*nz/8 bytes for the bits plus the integer acceleration arrays.
//
// Concurrency: any number of readers, or one writer. No internal locking.
class VoxelGrid {
 public:
  VoxelGrid(int nx, int ny, int nz);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }

  bool in_bounds(const VoxelIndex& v) const {
    return v.i >= 0 && v.i < nx_ && v.j >= 0 && v.j < ny_ && v.k >= 0 && v.k < nz_;
  }

  bool is_solid(const VoxelIndex& v) const {
    return (words_[word_index(v)] >> (v.i & 63)) & 1u;
  }

  // Throws std::invalid_argument when v is out of bounds. Idempotent when the
  // state does not change.
  void set_state(const VoxelIndex& v, bool solid);

  int64_t solid_count() const { return solid_count_; }
  int64_t layer_count(int k) const { return layer_count_[k]; }

  // Largest k with at least one solid voxel; nullopt when empty.
  std::optional<int> top_layer() const {
    return max_solid_k_ < 0 ? std::nullopt : std::optional<int>(max_solid_k_);
  }
  int max_solid_k() const { return max_solid_k_; }

  // -1 when the column (i,j) is empty.
  int column_top(int i, int j) const { return column_top_[static_cast<size_t>(j) * nx_ + i]; }

  // Extremal solid i in row (j,k); -1 when the row is empty.
  int row_min_i(int j, int k) const { return row_min_i_[row_id(j, k)]; }
  int row_max_i(int j, int k) const { return row_max_i_[row_id(j, k)]; }
  // Extremal solid j in column-row (i,k); -1 when empty.
  int col_min_j(int i, int k) const { return col_min_j_[col_id(i, k)]; }
  int col_max_j(int i, int k) const { return col_max_j_[col_id(i, k)]; }

  // Global solid extents; meaningful only when solid_count() > 0.
  int min_i() const { return min_i_; }
  int max_i() const { return max_i_; }
  int min_j() const { return min_j_; }
  int max_j() const { return max_j_; }

  int64_t count_at_i(int i) const { return count_i_[i]; }
  int64_t count_at_j(int j) const { return count_j_[j]; }

  // Packed-word access for the bit-plane kernels.
  int words_per_row() const { return wpr_; }
  size_t word_count() const { return words_.size(); }
  const uint64_t* words() const { return words_.data(); }
  size_t row_word_offset(int j, int k) const {
    return (static_cast<size_t>(k) * ny_ + j) * wpr_;
  }

  // Recomputes every acceleration structure from the raw bits and compares
  // with the incrementally maintained state.
  bool audit() const;

  bool operator==(const VoxelGrid& other) const;

 private:
  size_t word_index(const VoxelIndex& v) const {
    return row_word_offset(v.j, v.k) + (static_cast<size_t>(v.i) >> 6);
  }
  size_t row_id(int j, int k) const { return static_cast<size_t>(k) * ny_ + j; }
  size_t col_id(int i, int k) const { return static_cast<size_t>(k) * nx_ + i; }

  int nx_, ny_, nz_, wpr_;
  std::vector<uint64_t> words_;
  std::vector<int32_t> column_top_;
  std::vector<int64_t> layer_count_;
  std::vector<int32_t> row_min_i_, row_max_i_;
  std::vector<int32_t> col_min_j_, col_max_j_;
  std::vector<int64_t> count_i_, count_j_;
  int64_t solid_count_ = 0;
  int32_t max_solid_k_ = -1;
  int32_t min_i_ = 0, max_i_ = -1, min_j_ = 0, max_j_ = -1;
};

// A set of voxels treated as empty during queries ("virtual empty"). Shares
// the grid's word layout so a sweep can combine it with the occupancy plane;
// also keeps per-axis member counts for the half-space collision shortcuts.
// Members must be solid voxels of the grid they are used with.
class VoxelMask {
 public:
  VoxelMask(int nx, int ny, int nz);

  bool contains(const VoxelIndex& v) const {
    return (words_[word_index(v)] >> (v.i & 63)) & 1u;
  }
  void add(const VoxelIndex& v);
  void remove(const VoxelIndex& v);
  void clear();

  int64_t size() const { return total_; }
  int64_t count_at_i(int i) const { return count_i_[i]; }
  int64_t count_at_j(int j) const { return count_j_[j]; }
  int64_t count_at_k(int k) const { return count_k_[k]; }

  const uint64_t* words() const { return words_.data(); }
  size_t word_count() const { return words_.size(); }

 private:
  size_t word_index(const VoxelIndex& v) const {
    return (static_cast<size_t>(v.k) * ny_ + v.j) * wpr_ + (static_cast<size_t>(v.i) >> 6);
  }

  int nx_, ny_, nz_, wpr_;
  std::vector<uint64_t> words_;
  std::vector<int64_t> count_i_, count_j_, count_k_;
  int64_t total_ = 0;
};

inline bool masked(const VoxelMask* mask, const VoxelIndex& v) {
  return mask != nullptr && mask->contains(v);
}

// Solid and not virtually empty.
inline bool solid_under(const VoxelGrid& g, const VoxelMask* mask, const VoxelIndex& v) {
  return g.is_solid(v) && !masked(mask, v);
}

// The 18 face+edge neighbor offsets (vertex-only contacts excluded), ordered
// by (dk, dj, di). Every offset has at most two nonzero components.
struct Offset3 {
  int8_t di, dj, dk;
};
extern const std::array<Offset3, 18> kNeighborOffsets18;

// The at-most-5 supporting offsets: height k-1, face or edge adjacent.
extern const std::array<Offset3, 5> kSupportOffsets;

// In-bounds face+edge neighbors of v, in the documented fixed order.
// The array form writes up to 18 entries and returns the count.
int neighbors18(const VoxelGrid& g, const VoxelIndex& v, VoxelIndex out[18]);
std::vector<VoxelIndex> neighbors18(const VoxelGrid& g, const VoxelIndex& v);

// In-bounds candidate supporting positions of v (height k-1); empty for k==0.
int supporting_neighbors(const VoxelGrid& g, const VoxelIndex& v, VoxelIndex out[5]);
std::vector<VoxelIndex> supporting_neighbors(const VoxelGrid& g, const VoxelIndex& v);

// Axis-aligned inclusive box; used to restrict floods.
struct Box {
  VoxelIndex lo, hi;
  bool contains(const VoxelIndex& v) const {
    return v.i >= lo.i && v.i <= hi.i && v.j >= lo.j && v.j <= hi.j && v.k >= lo.k &&
           v.k <= hi.k;
  }
};

Box clamp_box(const VoxelGrid& g, const VoxelIndex& center, int radius);

// Connected components (18-connectivity) among solid voxels reachable from
// the seeds, with virtual_empty treated as empty and the search restricted to
// region when given. Explicit work queue, no recursion. Each component is
// sorted in (k,j,i) order; components are ordered by first seed reached.
std::vector<std::vector<VoxelIndex>> flood_components(
    const VoxelGrid& g, std::span<const VoxelIndex> seeds,
    const VoxelMask* virtual_empty = nullptr, const Box* region = nullptr);

}  // namespace hmplan
