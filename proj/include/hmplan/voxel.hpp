#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace hmplan {

// Grid coordinates. k is the height axis; k = 0 is the layer resting on the
// build platform.
struct VoxelIndex {
  int32_t i = 0;
  int32_t j = 0;
  int32_t k = 0;

  friend bool operator==(const VoxelIndex&, const VoxelIndex&) = default;
};

// Canonical iteration order used throughout the planner: (k, j, i).
inline bool kji_less(const VoxelIndex& a, const VoxelIndex& b) {
  if (a.k != b.k) return a.k < b.k;
  if (a.j != b.j) return a.j < b.j;
  return a.i < b.i;
}

// The five permitted subtractive-tool approach axes. There is no +z: the
// printhead owns the space above the part.
enum class SmOrientation : uint8_t { NegZ = 0, PosX, NegX, PosY, NegY };

// Preference order used whenever one orientation has to be picked.
inline constexpr std::array<SmOrientation, 5> kSmOrientations = {
    SmOrientation::NegZ, SmOrientation::PosX, SmOrientation::NegX,
    SmOrientation::PosY, SmOrientation::NegY};

inline const char* to_string(SmOrientation o) {
  switch (o) {
    case SmOrientation::NegZ: return "-z";
    case SmOrientation::PosX: return "+x";
    case SmOrientation::NegX: return "-x";
    case SmOrientation::PosY: return "+y";
    case SmOrientation::NegY: return "-y";
  }
  return "?";
}

inline std::optional<SmOrientation> sm_orientation_from_string(std::string_view s) {
  if (s == "-z") return SmOrientation::NegZ;
  if (s == "+x") return SmOrientation::PosX;
  if (s == "-x") return SmOrientation::NegX;
  if (s == "+y") return SmOrientation::PosY;
  if (s == "-y") return SmOrientation::NegY;
  return std::nullopt;
}

}  // namespace hmplan
