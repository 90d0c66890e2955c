#include "hmplan/replay.hpp"

#include <stdexcept>

#include "hmplan/feasibility.hpp"
#include "hmplan/stability.hpp"

namespace hmplan {

const char* to_string(ViolationReason r) {
  switch (r) {
    case ViolationReason::NotSelfSupported: return "not-self-supported";
    case ViolationReason::AmCollision: return "am-collision";
    case ViolationReason::SmCollision: return "sm-collision";
    case ViolationReason::Instability: return "instability";
    case ViolationReason::StateMismatch: return "state-mismatch";
  }
  return "?";
}

std::vector<ForwardOp> forward_program(const std::vector<InverseOp>& gamma) {
  std::vector<ForwardOp> out;
  out.reserve(gamma.size());
  for (size_t a = gamma.size(); a-- > 0;) {
    const InverseOp& op = gamma[a];
    if (op.kind == OpKind::Accretion) {
      if (!op.orient) throw std::invalid_argument("accretion without orientation");
      out.push_back({ForwardKind::SM, op.v, op.orient, a});
    } else {
      if (op.orient) throw std::invalid_argument("erosion carries an orientation");
      out.push_back({ForwardKind::AM, op.v, std::nullopt, a});
    }
  }
  return out;
}

namespace {

bool forward_self_supported(const VoxelGrid& g, const VoxelIndex& v) {
  if (v.k == 0) return true;
  VoxelIndex buf[5];
  int n = supporting_neighbors(g, v, buf);
  for (int a = 0; a < n; ++a)
    if (g.is_solid(buf[a])) return true;
  return false;
}

}  // namespace

// The feasibility predicates are shared with the planner; the stability check
// is not (exact and unbounded here, delta-localized there).
ReplayReport replay(const std::vector<ForwardOp>& program, const VoxelGrid& target,
                    const ToolSpec& tool, const ReplayOptions& options) {
  ReplayReport report;
  VoxelGrid grid(target.nx(), target.ny(), target.nz());

  auto violate = [&](size_t step, ViolationReason reason, const VoxelIndex& v) {
    if (!report.first_violation) report.first_violation = Violation{step, reason, v};
    if (options.audit) report.violations.push_back({step, reason, v});
  };

  ForwardKind prev_kind{};
  for (size_t step = 0; step < program.size(); ++step) {
    const ForwardOp& op = program[step];
    if (!grid.in_bounds(op.v)) {
      violate(step, ViolationReason::StateMismatch, op.v);
      if (!options.audit) break;
      continue;
    }

    ++report.stats.total_ops;
    if (step == 0 || op.kind != prev_kind) ++report.stats.tool_switches;
    prev_kind = op.kind;

    if (op.kind == ForwardKind::AM) {
      ++report.stats.am_ops;
      ++report.stats.per_layer[op.v.k].am;
      if (grid.is_solid(op.v)) {
        violate(step, ViolationReason::StateMismatch, op.v);
        if (!options.audit) break;
        continue;
      }
      if (!forward_self_supported(grid, op.v)) {
        violate(step, ViolationReason::NotSelfSupported, op.v);
        if (!options.audit) break;
      }
      if (am_collides(grid, op.v)) {
        violate(step, ViolationReason::AmCollision, op.v);
        if (!options.audit && report.first_violation) break;
      }
      if (report.first_violation && !options.audit) break;
      grid.set_state(op.v, true);
    } else {
      ++report.stats.sm_ops;
      ++report.stats.per_layer[op.v.k].sm;
      if (!grid.is_solid(op.v)) {
        violate(step, ViolationReason::StateMismatch, op.v);
        if (!options.audit) break;
        continue;
      }
      if (sm_collides(grid, op.v, *op.orient, tool.sm_length)) {
        violate(step, ViolationReason::SmCollision, op.v);
        if (!options.audit) break;
      }
      bool stable = options.full_reflood ? remains_stable_after_removal_oracle(grid, op.v)
                                         : remains_stable_exact(grid, op.v);
      if (!stable) {
        violate(step, ViolationReason::Instability, op.v);
        if (!options.audit) break;
      }
      if (report.first_violation && !options.audit) break;
      grid.set_state(op.v, false);
    }
  }

  report.stats.support_voxels = report.stats.sm_ops;
  const bool completed = !report.first_violation || options.audit;
  report.final_matches_target = completed && grid == target;
  report.valid = !report.first_violation && report.final_matches_target;
  return report;
}

PlanStats plan_statistics(const std::vector<InverseOp>& gamma, const VoxelGrid& H) {
  PlanStats stats;
  stats.total_ops = static_cast<int64_t>(gamma.size());
  for (const InverseOp& op : gamma) {
    ++stats.ops_per_layer[op.v.k];
    if (op.kind == OpKind::Accretion) {
      ++stats.accretions;
      if (op.phase == OpPhase::Pre)
        ++stats.pre_support;
      else
        ++stats.inplan_support;
    } else {
      ++stats.erosions;
    }
  }
  // Contiguous same-kind blocks of the forward program; identical counted on
  // the inverse sequence since reversal preserves block structure.
  for (size_t a = 0; a < gamma.size(); ++a)
    if (a == 0 || gamma[a].kind != gamma[a - 1].kind) ++stats.tool_switches;
  if (H.solid_count() > 0)
    stats.operation_density =
        static_cast<double>(stats.total_ops) / static_cast<double>(H.solid_count());
  stats.count_identity = stats.total_ops == H.solid_count() + 2 * stats.accretions;
  return stats;
}

}  // namespace hmplan
