#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmplan/feasibility.hpp"
#include "hmplan/grid.hpp"
#include "hmplan/tools.hpp"
#include "hmplan/voxel.hpp"

namespace hmplan {

enum class OpKind : uint8_t { Erosion, Accretion };
enum class OpPhase : uint8_t { Pre, Plan };

// One inverse operation. An erosion (inverse of deposition) removes a solid
// top-layer voxel; an accretion (inverse of machining) adds an empty voxel
// and records the cutter orientation that will remove it.
struct InverseOp {
  OpKind kind;
  VoxelIndex v;
  std::optional<SmOrientation> orient;  // accretions only
  OpPhase phase = OpPhase::Plan;

  friend bool operator==(const InverseOp&, const InverseOp&) = default;
};

struct PlanConfig {
  int tool_length = 10;
  int delta = 10;
  int mpfs = 0;  // 0 = off
  bool preprocess = true;
  StabilityMode stability = StabilityMode::Local;
};

// The ordered inverse sequence. Applying ops in order to `initial` (the input
// model) yields the empty grid: the pre-processing accretions enrich the
// model first, then the per-layer plan takes everything down. Reversing the
// list and swapping kinds gives the fabrication program.
struct PlanSequence {
  VoxelGrid initial;
  std::vector<InverseOp> ops;
  PlanConfig config;
};

struct PlanOptions {
  PlanConfig config;
  int threads = 1;  // worker hint for the read-only top-layer screen
  // Called at the start of every outer round with the working grid and K.
  std::function<void(const VoxelGrid&, int)> progress;
};

class ModelUnstableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a round can neither erode nor enhance anything. Unreachable for
// tool lengths >= 2 by the completeness argument, so hitting it means a bug;
// carries the stuck layer and a snapshot of the working grid for diagnosis.
class PlanStuckError : public std::runtime_error {
 public:
  PlanStuckError(const std::string& msg, int layer, const VoxelGrid& state)
      : std::runtime_error(msg), layer_(layer), state_(std::make_shared<VoxelGrid>(state)) {}
  int layer() const { return layer_; }
  const VoxelGrid& state() const { return *state_; }

 private:
  int layer_;
  std::shared_ptr<const VoxelGrid> state_;
};

struct PlanContext {
  ToolSpec tool;
  int delta = 10;
  StabilityMode stability = StabilityMode::Local;
  int threads = 1;
};

// Step 2-3: screen the top layer K in (j,i) order, certifying each candidate
// with the lambda accumulated so far treated as empty. Certified voxels are
// added to `lambda` and returned in certification order.
std::vector<VoxelIndex> collect_feasible(const VoxelGrid& g, int K, const PlanContext& ctx,
                                         VoxelMask& lambda);

struct EnhanceResult {
  std::vector<InverseOp> ops;  // accretions already committed to the grid
  bool feasible = false;       // v erosion-feasible when we stopped
};

// Step 4: ring-by-ring accretion around v (strictly below K, inside v's
// delta box) until v turns erosion-feasible or a ring adds nothing. Committed
// accretions stay either way; the caller adds v to lambda on success.
EnhanceResult enhance(VoxelGrid& g, const VoxelIndex& v, int K, const PlanContext& ctx,
                      const VoxelMask& lambda);

// Step 5 ordering: lambda is split into 8-connected in-layer clusters,
// clusters visited nearest-first from the previous cluster's exit voxel
// (first: the one holding the lexicographic minimum), boustrophedon inside.
std::vector<VoxelIndex> order_erosions(const std::vector<VoxelIndex>& lambda_list,
                                       const VoxelGrid& g);

// Minimum-printable-feature-size preference: for clusters smaller than M,
// retry enhancement on adjacent uncertified layer-K voxels so clusters merge;
// whatever stays small is eroded anyway. Appends committed accretions to
// out_ops and grows lambda/lambda_list in place.
void apply_mpfs_preference(VoxelGrid& g, int K, std::vector<VoxelIndex>& lambda_list,
                           VoxelMask& lambda, int M, const PlanContext& ctx,
                           std::vector<InverseOp>& out_ops);

// The full per-layer loop; reduces `work` to the empty grid and returns the
// inverse ops in order. Throws ModelUnstableError / PlanStuckError.
std::vector<InverseOp> nullify(VoxelGrid& work, const PlanOptions& options);

// Pipeline driver: validates the input, optionally runs support
// pre-processing, then nullifies the enriched model. The returned sequence
// satisfies |ops| == solid_count(H) + 2 * accretions.
PlanSequence plan_model(const VoxelGrid& H, const PlanOptions& options);

}  // namespace hmplan
