#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "hmplan/io.hpp"

namespace hmplan {

std::vector<StlTriangle> load_binary_stl(const std::string& path) {
  std::string data = read_file(path);
  if (data.size() < 84) throw ParseError(path + ": too short for binary STL");
  uint32_t count = 0;
  std::memcpy(&count, data.data() + 80, 4);
  if (data.size() != 84 + static_cast<size_t>(count) * 50)
    throw ParseError(path + ": binary STL size mismatch (" + std::to_string(count) +
                     " triangles declared)");
  std::vector<StlTriangle> tris(count);
  for (uint32_t t = 0; t < count; ++t) {
    const char* rec = data.data() + 84 + static_cast<size_t>(t) * 50;
    std::memcpy(tris[t].v, rec + 12, 36);  // skip the normal
  }
  return tris;
}

std::vector<uint8_t> write_binary_stl(const std::vector<StlTriangle>& tris) {
  std::vector<uint8_t> out(84 + tris.size() * 50, 0);
  uint32_t count = static_cast<uint32_t>(tris.size());
  std::memcpy(out.data() + 80, &count, 4);
  for (size_t t = 0; t < tris.size(); ++t)
    std::memcpy(out.data() + 84 + t * 50 + 12, tris[t].v, 36);
  return out;
}

VoxelGrid voxelize_mesh(const std::vector<StlTriangle>& tris, int resolution) {
  if (tris.empty()) throw ParseError("voxelize: empty mesh");
  if (resolution < 1) throw ParseError("voxelize: resolution must be positive");

  double lo[3] = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
                  std::numeric_limits<double>::max()};
  double hi[3] = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
                  std::numeric_limits<double>::lowest()};
  for (const StlTriangle& t : tris)
    for (int v = 0; v < 3; ++v)
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], static_cast<double>(t.v[v][a]));
        hi[a] = std::max(hi[a], static_cast<double>(t.v[v][a]));
      }
  double ext[3] = {hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]};
  double longest = std::max({ext[0], ext[1], ext[2]});
  if (longest <= 0) throw ParseError("voxelize: degenerate mesh extent");
  double cell = longest / resolution;

  int dims[3];
  for (int a = 0; a < 3; ++a)
    dims[a] = std::max(1, static_cast<int>(std::ceil(ext[a] / cell - 1e-9)));

  // Sample lattice nudged off the grid so rays never graze edges or vertices
  // of well-formed meshes exactly.
  const double ex = cell * 1.03e-5, ey = cell * 2.17e-5;

  std::vector<std::vector<double>> crossings(static_cast<size_t>(dims[0]) * dims[1]);
  for (const StlTriangle& t : tris) {
    double ax = t.v[0][0], ay = t.v[0][1], az = t.v[0][2];
    double bx = t.v[1][0], by = t.v[1][1], bz = t.v[1][2];
    double cx = t.v[2][0], cy = t.v[2][1], cz = t.v[2][2];
    double area2 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    if (std::abs(area2) < 1e-14) continue;  // vertical or degenerate

    double txlo = std::min({ax, bx, cx}), txhi = std::max({ax, bx, cx});
    double tylo = std::min({ay, by, cy}), tyhi = std::max({ay, by, cy});
    int i0 = std::max(0, static_cast<int>(std::floor((txlo - lo[0] - ex) / cell - 0.5)));
    int i1 = std::min(dims[0] - 1, static_cast<int>(std::ceil((txhi - lo[0] - ex) / cell - 0.5)));
    int j0 = std::max(0, static_cast<int>(std::floor((tylo - lo[1] - ey) / cell - 0.5)));
    int j1 = std::min(dims[1] - 1, static_cast<int>(std::ceil((tyhi - lo[1] - ey) / cell - 0.5)));

    for (int j = j0; j <= j1; ++j) {
      double py = lo[1] + (j + 0.5) * cell + ey;
      for (int i = i0; i <= i1; ++i) {
        double px = lo[0] + (i + 0.5) * cell + ex;
        double w0 = (bx - px) * (cy - py) - (by - py) * (cx - px);
        double w1 = (cx - px) * (ay - py) - (cy - py) * (ax - px);
        double w2 = (ax - px) * (by - py) - (ay - py) * (bx - px);
        bool inside = area2 > 0 ? (w0 >= 0 && w1 >= 0 && w2 >= 0)
                                : (w0 <= 0 && w1 <= 0 && w2 <= 0);
        if (!inside) continue;
        double z = (w0 * az + w1 * bz + w2 * cz) / area2;
        crossings[static_cast<size_t>(j) * dims[0] + i].push_back(z);
      }
    }
  }

  VoxelGrid g(dims[0], dims[1], dims[2]);
  for (int j = 0; j < dims[1]; ++j)
    for (int i = 0; i < dims[0]; ++i) {
      auto& zs = crossings[static_cast<size_t>(j) * dims[0] + i];
      if (zs.empty()) continue;
      std::sort(zs.begin(), zs.end());
      if (zs.size() % 2 != 0)
        throw ParseError("voxelize: mesh is not watertight (odd crossing count in column i=" +
                         std::to_string(i) + " j=" + std::to_string(j) + ")");
      for (size_t p = 0; p + 1 < zs.size(); p += 2) {
        // Solid where the voxel center z lies inside (zs[p], zs[p+1]).
        int k_lo = static_cast<int>(std::floor((zs[p] - lo[2]) / cell - 0.5)) + 1;
        int k_hi = static_cast<int>(std::ceil((zs[p + 1] - lo[2]) / cell - 0.5)) - 1;
        k_lo = std::max(k_lo, 0);
        k_hi = std::min(k_hi, dims[2] - 1);
        for (int k = k_lo; k <= k_hi; ++k) g.set_state({i, j, k}, true);
      }
    }
  return g;
}

}  // namespace hmplan
