#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hmplan/grid.hpp"
#include "hmplan/nullifier.hpp"
#include "hmplan/replay.hpp"
#include "hmplan/toolpath.hpp"

namespace hmplan {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text grid format:
//   hmvox <nx> <ny> <nz>
// followed by nz blocks (bottom layer first, blank line between blocks) of
// ny lines of nx characters, '#' solid and '.' empty; line j = 0 first.
std::string serialize_grid_text(const VoxelGrid& g);
VoxelGrid parse_grid_text(std::string_view text);

// Binary grid format: magic "HMVX1", three little-endian uint32 dims, then
// tightly packed occupancy bits in x-fastest order.
std::vector<uint8_t> serialize_grid_binary(const VoxelGrid& g);
VoxelGrid parse_grid_binary(std::span<const uint8_t> bytes);

enum class GridFileFormat { Auto, Text, Binary, Stl };

VoxelGrid load_grid(const std::string& path, GridFileFormat format = GridFileFormat::Auto,
                    int stl_resolution = 64);
void save_grid(const std::string& path, const VoxelGrid& g,
               GridFileFormat format = GridFileFormat::Text);

// Plan file: {version, resolution, tool:{L, delta, mpfs?}, initial, ops:[...]}
// with ops entries {t:"ero"|"acc", v:[i,j,k], o?:"-z|+x|-x|+y|-y",
// phase:"pre"|"plan"}. The initial model is inlined in the text grid format.
nlohmann::ordered_json plan_to_json(const PlanSequence& plan);
PlanSequence plan_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json replay_report_to_json(const ReplayReport& report);
nlohmann::ordered_json plan_stats_to_json(const PlanStats& stats);

nlohmann::ordered_json toolpath_to_json(const ToolpathDocument& doc);
ToolpathDocument toolpath_from_json(const nlohmann::ordered_json& j);

// Comment-annotated flat G-code-like rendering of a toolpath document.
std::string toolpath_to_gcode(const ToolpathDocument& doc);

// Binary STL triangles, one float triple per vertex (normals ignored).
struct StlTriangle {
  float v[3][3];
};
std::vector<StlTriangle> load_binary_stl(const std::string& path);
std::vector<uint8_t> write_binary_stl(const std::vector<StlTriangle>& tris);

// Parity (even-odd) voxelization of a watertight triangle soup by ray casting
// along +z through voxel centers: a voxel is solid iff its center lies
// inside. resolution counts voxels along the longest bounding-box axis.
// Throws ParseError naming a witness column when any column sees an odd
// number of crossings.
VoxelGrid voxelize_mesh(const std::vector<StlTriangle>& tris, int resolution);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view data);

}  // namespace hmplan
