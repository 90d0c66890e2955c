#include "hmplan/grid.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <stdexcept>

namespace hmplan {

namespace {

std::array<Offset3, 18> make_neighbor_offsets() {
  std::array<Offset3, 18> out{};
  size_t n = 0;
  for (int dk = -1; dk <= 1; ++dk)
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        int nonzero = (di != 0) + (dj != 0) + (dk != 0);
        if (nonzero == 1 || nonzero == 2)
          out[n++] = {static_cast<int8_t>(di), static_cast<int8_t>(dj),
                      static_cast<int8_t>(dk)};
      }
  return out;
}

}  // namespace

const std::array<Offset3, 18> kNeighborOffsets18 = make_neighbor_offsets();

// Straight down first: cone searches probe the vertical drop before leaning.
const std::array<Offset3, 5> kSupportOffsets = {{
    {0, 0, -1}, {-1, 0, -1}, {1, 0, -1}, {0, -1, -1}, {0, 1, -1}}};

VoxelGrid::VoxelGrid(int nx, int ny, int nz) : nx_(nx), ny_(ny), nz_(nz) {
  if (nx < 1 || ny < 1 || nz < 1)
    throw std::invalid_argument("grid dimensions must be positive");
  wpr_ = nx / 64 + 1;  // always at least one slack bit per row
  words_.assign(static_cast<size_t>(wpr_) * ny_ * nz_, 0);
  column_top_.assign(static_cast<size_t>(nx_) * ny_, -1);
  layer_count_.assign(nz_, 0);
  row_min_i_.assign(static_cast<size_t>(ny_) * nz_, -1);
  row_max_i_.assign(static_cast<size_t>(ny_) * nz_, -1);
  col_min_j_.assign(static_cast<size_t>(nx_) * nz_, -1);
  col_max_j_.assign(static_cast<size_t>(nx_) * nz_, -1);
  count_i_.assign(nx_, 0);
  count_j_.assign(ny_, 0);
}

void VoxelGrid::set_state(const VoxelIndex& v, bool solid) {
  if (!in_bounds(v)) throw std::invalid_argument("set_state: voxel out of bounds");
  uint64_t& word = words_[word_index(v)];
  uint64_t bit = uint64_t(1) << (v.i & 63);
  if (((word & bit) != 0) == solid) return;

  size_t rid = row_id(v.j, v.k);
  size_t cid = col_id(v.i, v.k);
  int32_t& ctop = column_top_[static_cast<size_t>(v.j) * nx_ + v.i];

  if (solid) {
    word |= bit;
    ++solid_count_;
    ++layer_count_[v.k];
    ++count_i_[v.i];
    ++count_j_[v.j];
    if (v.k > ctop) ctop = v.k;
    if (v.k > max_solid_k_) max_solid_k_ = v.k;
    if (row_min_i_[rid] < 0 || v.i < row_min_i_[rid]) row_min_i_[rid] = v.i;
    if (v.i > row_max_i_[rid]) row_max_i_[rid] = v.i;
    if (col_min_j_[cid] < 0 || v.j < col_min_j_[cid]) col_min_j_[cid] = v.j;
    if (v.j > col_max_j_[cid]) col_max_j_[cid] = v.j;
    if (solid_count_ == 1) {
      min_i_ = max_i_ = v.i;
      min_j_ = max_j_ = v.j;
    } else {
      min_i_ = std::min(min_i_, v.i);
      max_i_ = std::max(max_i_, v.i);
      min_j_ = std::min(min_j_, v.j);
      max_j_ = std::max(max_j_, v.j);
    }
    return;
  }

  word &= ~bit;
  --solid_count_;
  --layer_count_[v.k];
  --count_i_[v.i];
  --count_j_[v.j];

  if (ctop == v.k) {
    int k = v.k - 1;
    while (k >= 0 && !is_solid({v.i, v.j, k})) --k;
    ctop = k;
  }
  while (max_solid_k_ >= 0 && layer_count_[max_solid_k_] == 0) --max_solid_k_;

  if (row_min_i_[rid] == v.i || row_max_i_[rid] == v.i) {
    const uint64_t* row = words_.data() + row_word_offset(v.j, v.k);
    int lo = -1, hi = -1;
    for (int w = 0; w < wpr_; ++w)
      if (row[w]) {
        lo = w * 64 + std::countr_zero(row[w]);
        break;
      }
    for (int w = wpr_ - 1; w >= 0; --w)
      if (row[w]) {
        hi = w * 64 + 63 - std::countl_zero(row[w]);
        break;
      }
    row_min_i_[rid] = lo;
    row_max_i_[rid] = hi;
  }
  if (col_min_j_[cid] == v.j && col_max_j_[cid] == v.j) {
    col_min_j_[cid] = col_max_j_[cid] = -1;
  } else if (col_min_j_[cid] == v.j) {
    int j = v.j + 1;
    while (!is_solid({v.i, j, v.k})) ++j;  // col_max_j is solid, loop is bounded
    col_min_j_[cid] = j;
  } else if (col_max_j_[cid] == v.j) {
    int j = v.j - 1;
    while (!is_solid({v.i, j, v.k})) --j;
    col_max_j_[cid] = j;
  }

  if (solid_count_ == 0) {
    min_i_ = 0;
    max_i_ = -1;
    min_j_ = 0;
    max_j_ = -1;
    return;
  }
  if (count_i_[v.i] == 0) {
    while (min_i_ < nx_ && count_i_[min_i_] == 0) ++min_i_;
    while (max_i_ >= 0 && count_i_[max_i_] == 0) --max_i_;
  }
  if (count_j_[v.j] == 0) {
    while (min_j_ < ny_ && count_j_[min_j_] == 0) ++min_j_;
    while (max_j_ >= 0 && count_j_[max_j_] == 0) --max_j_;
  }
}

bool VoxelGrid::audit() const {
  VoxelGrid fresh(nx_, ny_, nz_);
  for (int k = 0; k < nz_; ++k)
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i)
        if (is_solid({i, j, k})) fresh.set_state({i, j, k}, true);
  bool ok = fresh.words_ == words_ && fresh.column_top_ == column_top_ &&
            fresh.layer_count_ == layer_count_ && fresh.row_min_i_ == row_min_i_ &&
            fresh.row_max_i_ == row_max_i_ && fresh.col_min_j_ == col_min_j_ &&
            fresh.col_max_j_ == col_max_j_ && fresh.count_i_ == count_i_ &&
            fresh.count_j_ == count_j_ && fresh.solid_count_ == solid_count_ &&
            fresh.max_solid_k_ == max_solid_k_;
  if (ok && solid_count_ > 0)
    ok = fresh.min_i_ == min_i_ && fresh.max_i_ == max_i_ && fresh.min_j_ == min_j_ &&
         fresh.max_j_ == max_j_;
  return ok;
}

bool VoxelGrid::operator==(const VoxelGrid& other) const {
  return nx_ == other.nx_ && ny_ == other.ny_ && nz_ == other.nz_ &&
         words_ == other.words_;
}

VoxelMask::VoxelMask(int nx, int ny, int nz) : nx_(nx), ny_(ny), nz_(nz) {
  wpr_ = nx / 64 + 1;
  words_.assign(static_cast<size_t>(wpr_) * ny_ * nz_, 0);
  count_i_.assign(nx_, 0);
  count_j_.assign(ny_, 0);
  count_k_.assign(nz_, 0);
}

void VoxelMask::add(const VoxelIndex& v) {
  uint64_t& word = words_[word_index(v)];
  uint64_t bit = uint64_t(1) << (v.i & 63);
  if (word & bit) return;
  word |= bit;
  ++count_i_[v.i];
  ++count_j_[v.j];
  ++count_k_[v.k];
  ++total_;
}

void VoxelMask::remove(const VoxelIndex& v) {
  uint64_t& word = words_[word_index(v)];
  uint64_t bit = uint64_t(1) << (v.i & 63);
  if (!(word & bit)) return;
  word &= ~bit;
  --count_i_[v.i];
  --count_j_[v.j];
  --count_k_[v.k];
  --total_;
}

void VoxelMask::clear() {
  if (total_ == 0) return;
  std::fill(words_.begin(), words_.end(), 0);
  std::fill(count_i_.begin(), count_i_.end(), 0);
  std::fill(count_j_.begin(), count_j_.end(), 0);
  std::fill(count_k_.begin(), count_k_.end(), 0);
  total_ = 0;
}

int neighbors18(const VoxelGrid& g, const VoxelIndex& v, VoxelIndex out[18]) {
  int n = 0;
  for (const Offset3& o : kNeighborOffsets18) {
    VoxelIndex w{v.i + o.di, v.j + o.dj, v.k + o.dk};
    if (g.in_bounds(w)) out[n++] = w;
  }
  return n;
}

std::vector<VoxelIndex> neighbors18(const VoxelGrid& g, const VoxelIndex& v) {
  VoxelIndex buf[18];
  int n = neighbors18(g, v, buf);
  return std::vector<VoxelIndex>(buf, buf + n);
}

int supporting_neighbors(const VoxelGrid& g, const VoxelIndex& v, VoxelIndex out[5]) {
  if (v.k == 0) return 0;
  int n = 0;
  for (const Offset3& o : kSupportOffsets) {
    VoxelIndex w{v.i + o.di, v.j + o.dj, v.k + o.dk};
    if (g.in_bounds(w)) out[n++] = w;
  }
  return n;
}

std::vector<VoxelIndex> supporting_neighbors(const VoxelGrid& g, const VoxelIndex& v) {
  VoxelIndex buf[5];
  int n = supporting_neighbors(g, v, buf);
  return std::vector<VoxelIndex>(buf, buf + n);
}

Box clamp_box(const VoxelGrid& g, const VoxelIndex& center, int radius) {
  Box b;
  b.lo = {std::max(0, center.i - radius), std::max(0, center.j - radius),
          std::max(0, center.k - radius)};
  b.hi = {std::min(g.nx() - 1, center.i + radius), std::min(g.ny() - 1, center.j + radius),
          std::min(g.nz() - 1, center.k + radius)};
  return b;
}

std::vector<std::vector<VoxelIndex>> flood_components(const VoxelGrid& g,
                                                      std::span<const VoxelIndex> seeds,
                                                      const VoxelMask* virtual_empty,
                                                      const Box* region) {
  std::vector<std::vector<VoxelIndex>> components;
  VoxelMask visited(g.nx(), g.ny(), g.nz());
  std::deque<VoxelIndex> queue;
  VoxelIndex nbuf[18];

  for (const VoxelIndex& seed : seeds) {
    if (!g.in_bounds(seed) || !solid_under(g, virtual_empty, seed)) continue;
    if (region && !region->contains(seed)) continue;
    if (visited.contains(seed)) continue;

    std::vector<VoxelIndex> comp;
    visited.add(seed);
    queue.push_back(seed);
    while (!queue.empty()) {
      VoxelIndex cur = queue.front();
      queue.pop_front();
      comp.push_back(cur);
      int n = neighbors18(g, cur, nbuf);
      for (int a = 0; a < n; ++a) {
        const VoxelIndex& w = nbuf[a];
        if (visited.contains(w)) continue;
        if (!solid_under(g, virtual_empty, w)) continue;
        if (region && !region->contains(w)) continue;
        visited.add(w);
        queue.push_back(w);
      }
    }
    std::sort(comp.begin(), comp.end(), kji_less);
    components.push_back(std::move(comp));
  }
  return components;
}

}  // namespace hmplan
