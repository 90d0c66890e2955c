#include "hmplan/toolpath.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace hmplan {

namespace {

int64_t pack_xyz(const VoxelIndex& v) {
  return (static_cast<int64_t>(v.k + (1 << 20)) << 42) |
         (static_cast<int64_t>(v.j + (1 << 20)) << 21) | (v.i + (1 << 20));
}

}  // namespace

std::vector<Patch> group_patches(const std::vector<ForwardOp>& program) {
  std::vector<Patch> patches;
  std::unordered_set<int64_t> open_members;

  auto touches_open = [&](const VoxelIndex& v) {
    for (const Offset3& o : kNeighborOffsets18) {
      VoxelIndex w{v.i + o.di, v.j + o.dj, v.k + o.dk};
      if (open_members.count(pack_xyz(w))) return true;
    }
    return false;
  };

  for (size_t a = 0; a < program.size(); ++a) {
    const ForwardOp& op = program[a];
    bool joins = false;
    if (!patches.empty() && patches.back().last_op == a - 1 && a > 0) {
      Patch& open = patches.back();
      joins = open.kind == op.kind && touches_open(op.v);
      if (joins && op.kind == ForwardKind::AM) joins = op.v.k == open.layer;
      if (joins && op.kind == ForwardKind::SM) joins = open.orient == op.orient;
    }
    if (joins) {
      Patch& open = patches.back();
      open.voxels.push_back(op.v);
      open.last_op = a;
      open_members.insert(pack_xyz(op.v));
    } else {
      Patch p;
      p.kind = op.kind;
      p.orient = op.orient;
      p.layer = op.kind == ForwardKind::AM ? op.v.k : -1;
      p.voxels.push_back(op.v);
      p.first_op = p.last_op = a;
      patches.push_back(std::move(p));
      open_members.clear();
      open_members.insert(pack_xyz(op.v));
    }
  }
  return patches;
}

std::vector<AmPass> am_passes_for_patch(const Patch& patch, int passes_per_row) {
  // Rows ascending, runs of consecutive i inside each row.
  std::vector<VoxelIndex> cells = patch.voxels;
  std::sort(cells.begin(), cells.end(), kji_less);

  std::vector<AmPass> passes;
  size_t a = 0;
  while (a < cells.size()) {
    size_t row_end = a;
    while (row_end < cells.size() && cells[row_end].j == cells[a].j) ++row_end;
    size_t r = a;
    while (r < row_end) {
      size_t run_end = r;
      while (run_end + 1 < row_end && cells[run_end + 1].i == cells[run_end].i + 1) ++run_end;
      for (int p = 0; p < passes_per_row; ++p)
        passes.push_back({cells[r].k, cells[r].j, cells[r].i, cells[run_end].i, p});
      r = run_end + 1;
    }
    a = row_end;
  }
  return passes;
}

int64_t ToolpathDocument::tool_change_count() const {
  int64_t n = 0;
  for (const ToolpathPath& p : paths) n += p.tool_change ? 1 : 0;
  return n;
}

namespace {

std::array<double, 3> center(const VoxelIndex& v, double vs) {
  return {(v.i + 0.5) * vs, (v.j + 0.5) * vs, (v.k + 0.5) * vs};
}

std::array<double, 3> entry_offset(SmOrientation o, double vs) {
  switch (o) {
    case SmOrientation::NegZ: return {0, 0, vs};
    case SmOrientation::PosX: return {-vs, 0, 0};  // cutter body sits on the low-x side
    case SmOrientation::NegX: return {vs, 0, 0};
    case SmOrientation::PosY: return {0, -vs, 0};
    case SmOrientation::NegY: return {0, vs, 0};
  }
  return {0, 0, 0};
}

// Boustrophedon over (primary asc, secondary alternating) where key selection
// depends on the tool axis.
std::vector<VoxelIndex> sm_order(const Patch& patch) {
  std::vector<VoxelIndex> cells = patch.voxels;
  auto key = [&](const VoxelIndex& v) -> std::pair<int, int> {
    switch (*patch.orient) {
      case SmOrientation::NegZ: return {v.j, v.i};   // plane (i, j)
      case SmOrientation::PosX:
      case SmOrientation::NegX: return {v.k, v.j};   // plane (j, k)
      case SmOrientation::PosY:
      case SmOrientation::NegY: return {v.k, v.i};   // plane (i, k)
    }
    return {v.k, v.i};
  };
  std::stable_sort(cells.begin(), cells.end(), [&](const VoxelIndex& a, const VoxelIndex& b) {
    return key(a) < key(b);
  });
  std::vector<VoxelIndex> out;
  out.reserve(cells.size());
  bool ascending = true;
  size_t a = 0;
  while (a < cells.size()) {
    size_t b = a;
    while (b < cells.size() && key(cells[b]).first == key(cells[a]).first) ++b;
    if (ascending)
      for (size_t c = a; c < b; ++c) out.push_back(cells[c]);
    else
      for (size_t c = b; c-- > a;) out.push_back(cells[c]);
    ascending = !ascending;
    a = b;
  }
  return out;
}

}  // namespace

ToolpathDocument emit_toolpath(const std::vector<Patch>& patches, double voxel_size,
                               double nozzle, int tool_length_voxels) {
  bool have_am = false;
  for (const Patch& p : patches)
    if (p.kind == ForwardKind::AM) have_am = true;
  int passes_per_row = 0;
  if (have_am) {
    double ratio = voxel_size / nozzle;
    passes_per_row = static_cast<int>(std::lround(ratio));
    if (passes_per_row < 1 || std::abs(ratio - passes_per_row) > 1e-9)
      throw std::invalid_argument("voxel size must be an integer multiple of the nozzle diameter");
  }

  ToolpathDocument doc;
  doc.voxel_size_mm = voxel_size;
  doc.nozzle_mm = nozzle;
  doc.tool_length_voxels = tool_length_voxels;

  std::optional<ForwardKind> prev_kind;
  for (const Patch& patch : patches) {
    ToolpathPath path;
    path.kind = patch.kind;
    path.orient = patch.orient;
    path.tool_change = !prev_kind || *prev_kind != patch.kind;
    prev_kind = patch.kind;

    if (patch.kind == ForwardKind::AM) {
      const double z = (patch.layer + 0.5) * voxel_size;
      bool left_to_right = true;
      for (const AmPass& pass : am_passes_for_patch(patch, passes_per_row)) {
        double y = pass.j * voxel_size + (pass.p + 0.5) * nozzle;
        double x0 = pass.i0 * voxel_size;
        double x1 = (pass.i1 + 1) * voxel_size;
        if (left_to_right) {
          path.polyline.push_back({x0, y, z});
          path.polyline.push_back({x1, y, z});
        } else {
          path.polyline.push_back({x1, y, z});
          path.polyline.push_back({x0, y, z});
        }
        left_to_right = !left_to_right;
      }
    } else {
      switch (*patch.orient) {
        case SmOrientation::PosX: path.markers.push_back("fixture-rotation:+x"); break;
        case SmOrientation::NegX: path.markers.push_back("fixture-rotation:-x"); break;
        case SmOrientation::PosY: path.markers.push_back("fixture-rotation:+y"); break;
        case SmOrientation::NegY: path.markers.push_back("fixture-rotation:-y"); break;
        case SmOrientation::NegZ: break;
      }
      std::array<double, 3> off = entry_offset(*patch.orient, voxel_size);
      for (const VoxelIndex& v : sm_order(patch)) {
        std::array<double, 3> c = center(v, voxel_size);
        std::array<double, 3> e = {c[0] + off[0], c[1] + off[1], c[2] + off[2]};
        path.polyline.push_back(e);
        path.polyline.push_back(c);
        path.polyline.push_back(e);
      }
    }
    doc.paths.push_back(std::move(path));
  }
  return doc;
}

}  // namespace hmplan
