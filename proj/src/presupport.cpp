#include "hmplan/presupport.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace hmplan {

namespace {

bool has_support_below(const VoxelGrid& g, const VoxelIndex& v) {
  VoxelIndex buf[5];
  int n = supporting_neighbors(g, v, buf);
  for (int a = 0; a < n; ++a)
    if (g.is_solid(buf[a])) return true;
  return false;
}

size_t pack(const VoxelGrid& g, const VoxelIndex& v) {
  return (static_cast<size_t>(v.k) * g.ny() + v.j) * g.nx() + v.i;
}

std::optional<SmOrientation> machinable(const VoxelGrid& g, const VoxelIndex& v,
                                        const ToolSpec& tool) {
  for (SmOrientation o : kSmOrientations)
    if (!sm_collides(g, v, o, tool.sm_length, nullptr)) return o;
  return std::nullopt;
}

}  // namespace

std::vector<VoxelIndex> find_unsupported(const VoxelGrid& H) {
  std::vector<VoxelIndex> phi;
  for (int k = 1; k <= H.max_solid_k(); ++k)
    for (int j = 0; j < H.ny(); ++j) {
      int lo = H.row_min_i(j, k);
      if (lo < 0) continue;
      int hi = H.row_max_i(j, k);
      for (int i = lo; i <= hi; ++i) {
        VoxelIndex v{i, j, k};
        if (H.is_solid(v) && !has_support_below(H, v)) phi.push_back(v);
      }
    }
  if (phi.empty()) return phi;

  // Bounding box of the solid material.
  int min_k = 0;
  while (H.layer_count(min_k) == 0) ++min_k;
  const int max_k = H.max_solid_k();
  const int min_i = H.min_i(), max_i = H.max_i();
  const int min_j = H.min_j(), max_j = H.max_j();
  auto bbox_distance = [&](const VoxelIndex& v) {
    int d = v.i - min_i;
    d = std::min(d, max_i - v.i);
    d = std::min(d, v.j - min_j);
    d = std::min(d, max_j - v.j);
    d = std::min(d, v.k - min_k);
    d = std::min(d, max_k - v.k);
    return d;
  };
  std::stable_sort(phi.begin(), phi.end(), [&](const VoxelIndex& a, const VoxelIndex& b) {
    int da = bbox_distance(a), db = bbox_distance(b);
    if (da != db) return da > db;  // inner voxels first
    return kji_less(a, b);
  });
  return phi;
}

SupportGrowth grow_support(VoxelGrid& work, const VoxelIndex& v, const ToolSpec& tool,
                           const VoxelGrid& H, const VoxelMask& phi) {
  SupportGrowth result;

  // A node is terminal when it stands on the ground or on a self-supported
  // voxel of H (solid in H, not in phi).
  auto terminal = [&](const VoxelIndex& c) -> std::optional<VoxelIndex> {
    if (c.k == 0) return c;
    VoxelIndex buf[5];
    int n = supporting_neighbors(work, c, buf);
    for (int a = 0; a < n; ++a)
      if (work.is_solid(buf[a]) && H.is_solid(buf[a]) && !phi.contains(buf[a]))
        return buf[a];
    return std::nullopt;
  };

  struct Node {
    VoxelIndex v;
    int parent;
  };
  std::vector<Node> nodes;
  std::unordered_map<size_t, int> visited;
  std::deque<int> queue;

  auto admit = [&](const VoxelIndex& c, int parent) -> bool {
    if (!work.in_bounds(c) || work.is_solid(c)) return false;
    if (visited.count(pack(work, c))) return false;
    if (!machinable(work, c, tool)) return false;
    visited[pack(work, c)] = static_cast<int>(nodes.size());
    nodes.push_back({c, parent});
    queue.push_back(static_cast<int>(nodes.size()) - 1);
    return true;
  };

  // Seed ring: the supporting positions directly below v.
  int found = -1;
  for (const Offset3& o : kSupportOffsets) {
    VoxelIndex c{v.i + o.di, v.j + o.dj, v.k + o.dk};
    if (admit(c, -1) && terminal(nodes.back().v)) {
      found = static_cast<int>(nodes.size()) - 1;
      break;
    }
  }
  while (found < 0 && !queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    VoxelIndex cur = nodes[id].v;
    if (cur.k == 0) continue;
    for (const Offset3& o : kSupportOffsets) {
      VoxelIndex c{cur.i + o.di, cur.j + o.dj, cur.k + o.dk};
      if (admit(c, id) && terminal(nodes.back().v)) {
        found = static_cast<int>(nodes.size()) - 1;
        break;
      }
    }
  }
  if (found < 0) return result;

  // Path from the deepest node up to v, applied bottom-up so every committed
  // voxel rests on the previous one (or the ground, or the touching voxel).
  std::vector<VoxelIndex> path;
  for (int id = found; id >= 0; id = nodes[id].parent) path.push_back(nodes[id].v);
  // path is already bottom-up: deepest first.

  std::vector<VoxelIndex> applied;
  for (const VoxelIndex& c : path) {
    std::optional<SmOrientation> o = machinable(work, c, tool);
    bool grounded = c.k == 0 || has_support_below(work, c);
    if (!o || !grounded) {
      for (const VoxelIndex& u : applied) work.set_state(u, false);
      return SupportGrowth{};
    }
    work.set_state(c, true);
    applied.push_back(c);
    result.ops.push_back({OpKind::Accretion, c, o, OpPhase::Pre});
  }
  result.touching = terminal(path.front()) ? *terminal(path.front()) : path.front();
  result.found = true;
  return result;
}

std::vector<InverseOp> preprocess(VoxelGrid& work, const ToolSpec& tool, int /*delta*/) {
  std::vector<InverseOp> ops;
  std::vector<VoxelIndex> phi_list = find_unsupported(work);
  if (phi_list.empty()) return ops;

  VoxelGrid H = work;  // snapshot for touching-point classification
  VoxelMask phi(work.nx(), work.ny(), work.nz());
  for (const VoxelIndex& v : phi_list) phi.add(v);

  for (const VoxelIndex& v : phi_list) {
    if (has_support_below(work, v)) {
      phi.remove(v);  // an earlier pillar took care of it
      continue;
    }
    SupportGrowth growth = grow_support(work, v, tool, H, phi);
    if (growth.found) {
      ops.insert(ops.end(), growth.ops.begin(), growth.ops.end());
      phi.remove(v);
    }
    // No path: v stays in phi and the nullifier handles it with in-plan
    // accretions later.
  }
  return ops;
}

}  // namespace hmplan
