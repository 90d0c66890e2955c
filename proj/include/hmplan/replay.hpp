#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hmplan/grid.hpp"
#include "hmplan/nullifier.hpp"
#include "hmplan/tools.hpp"

namespace hmplan {

enum class ForwardKind : uint8_t { AM, SM };

struct ForwardOp {
  ForwardKind kind;
  VoxelIndex v;
  std::optional<SmOrientation> orient;  // SM only
  size_t source_index;                  // index into the inverse sequence

  friend bool operator==(const ForwardOp&, const ForwardOp&) = default;
};

// Reverse the inverse sequence and swap kinds: erosions become depositions,
// accretions become machining ops with their recorded orientation.
std::vector<ForwardOp> forward_program(const std::vector<InverseOp>& gamma);

enum class ViolationReason : uint8_t {
  NotSelfSupported,
  AmCollision,
  SmCollision,
  Instability,
  StateMismatch,
};
const char* to_string(ViolationReason r);

struct Violation {
  size_t step;
  ViolationReason reason;
  VoxelIndex v;
};

struct LayerOpCounts {
  int64_t am = 0;
  int64_t sm = 0;
};

struct ReplayStats {
  int64_t total_ops = 0;
  int64_t am_ops = 0;
  int64_t sm_ops = 0;
  int64_t support_voxels = 0;  // equals sm_ops: every machined voxel was support
  int64_t tool_switches = 0;   // contiguous same-kind blocks, counting the first mount
  std::map<int, LayerOpCounts> per_layer;
};

struct ReplayReport {
  bool valid = false;
  std::optional<Violation> first_violation;
  std::vector<Violation> violations;  // populated in audit mode
  ReplayStats stats;
  bool final_matches_target = false;
};

struct ReplayOptions {
  bool audit = false;         // collect every violation instead of failing fast
  bool full_reflood = false;  // re-run the global base flood after every SM op
};

// Replays the program from the empty grid, validating every step with
// oracle-grade checks: deposition needs self-support and a clear half-space
// above, machining needs a collision-free cutter and a stable remainder. The
// verifier shares no shortcut with the planner: stability here is exact and
// unbounded (or a full reflood with full_reflood set).
ReplayReport replay(const std::vector<ForwardOp>& program, const VoxelGrid& target,
                    const ToolSpec& tool, const ReplayOptions& options = {});

struct PlanStats {
  int64_t total_ops = 0;
  int64_t erosions = 0;
  int64_t accretions = 0;
  int64_t pre_support = 0;
  int64_t inplan_support = 0;
  int64_t tool_switches = 0;
  double operation_density = 0.0;  // total ops per solid voxel of the model
  std::map<int, int64_t> ops_per_layer;
  bool count_identity = false;  // total == solid + 2 * accretions
};

PlanStats plan_statistics(const std::vector<InverseOp>& gamma, const VoxelGrid& H);

}  // namespace hmplan
