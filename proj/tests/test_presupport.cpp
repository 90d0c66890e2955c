#include <doctest.h>

#include "hmplan/presupport.hpp"
#include "hmplan/replay.hpp"
#include "hmplan/stability.hpp"
#include "support/generators.hpp"

using namespace hmplan;
using namespace hmplan::testing;

TEST_CASE("find_unsupported") {
  SUBCASE("a grounded box needs nothing") {
    VoxelGrid g(4, 4, 4);
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) g.set_state({i, j, k}, true);
    CHECK(find_unsupported(g).empty());
  }

  SUBCASE("edge-diagonal support satisfies the rule") {
    VoxelGrid g(4, 4, 4);
    g.set_state({0, 0, 0}, true);
    g.set_state({0, 0, 1}, true);
    g.set_state({1, 0, 2}, true);  // supported by (0,0,1) via an edge offset
    CHECK(find_unsupported(g).empty());
  }

  SUBCASE("horizontal arm over a void") {
    VoxelGrid g(6, 3, 6);
    for (int k = 0; k < 5; ++k) g.set_state({0, 1, k}, true);
    for (int i = 1; i < 4; ++i) g.set_state({i, 1, 4}, true);
    auto phi = find_unsupported(g);
    REQUIRE(phi.size() == 2);  // (2,1,4) and (3,1,4); (1,1,4) leans on the pillar
    // Equal face distances here (the slab is one voxel deep), so the (k,j,i)
    // tie-break orders them.
    CHECK(phi[0] == VoxelIndex{2, 1, 4});
    CHECK(phi[1] == VoxelIndex{3, 1, 4});
  }
}

TEST_CASE("grow_support drops a straight pillar to the ground") {
  // Pillar, then a long arm at the top; the arm end is three cells over empty
  // ground. The cell right under it is vertically blocked (the arm itself is
  // above), so the pillar voxels are admitted with a horizontal cutter.
  VoxelGrid g(7, 5, 5);
  for (int k = 0; k < 4; ++k) g.set_state({0, 2, k}, true);
  for (int i = 1; i <= 4; ++i) g.set_state({i, 2, 3}, true);
  REQUIRE(is_stable_global(g));

  VoxelGrid work = g;
  auto phi_list = find_unsupported(work);
  REQUIRE(phi_list.size() == 3);  // (2..4, 2, 3); (1,2,3) leans on the pillar

  VoxelMask phi(7, 5, 5);
  for (const VoxelIndex& v : phi_list) phi.add(v);
  SupportGrowth growth = grow_support(work, {4, 2, 3}, ToolSpec(10), g, phi);
  REQUIRE(growth.found);
  REQUIRE(growth.ops.size() == 3);  // straight drop: k = 0, 1, 2 under the arm end
  CHECK(growth.touching.has_value());
  CHECK(growth.touching->k == 0);
  for (const InverseOp& op : growth.ops) {
    CHECK(op.kind == OpKind::Accretion);
    CHECK(op.phase == OpPhase::Pre);
    CHECK(op.v.i == 4);
    CHECK(op.v.j == 2);
  }
  // Bottom-up application order.
  CHECK(growth.ops[0].v.k == 0);
  CHECK(growth.ops[2].v.k == 2);
  CHECK(work.is_solid({4, 2, 0}));
  CHECK(is_stable_global(work));
}

TEST_CASE("grow_support fails inside a sealed cavity") {
  // Closed box with a hanging stud inside: no cutter orientation can reach
  // the interior, so no pillar can be machined away afterwards.
  VoxelGrid g(7, 7, 7);
  for (int k = 0; k < 7; ++k)
    for (int j = 0; j < 7; ++j)
      for (int i = 0; i < 7; ++i) {
        bool wall = i == 0 || j == 0 || k == 0 || i == 6 || j == 6 || k == 6;
        if (wall) g.set_state({i, j, k}, true);
      }
  g.set_state({3, 3, 5}, true);  // stud hanging from the roof... supported by roof? no:
  // (3,3,5) has support positions at k=4, all empty; it hangs via the k=6 roof? the
  // roof is above it, which is face contact at (3,3,6) - not a *supporting* neighbor,
  // but it does keep the model stable through ordinary connectivity.
  REQUIRE(is_stable_global(g));

  VoxelGrid work = g;
  auto phi_list = find_unsupported(work);
  bool stud_listed = false;
  for (const VoxelIndex& v : phi_list) stud_listed |= v == VoxelIndex{3, 3, 5};
  REQUIRE(stud_listed);

  VoxelMask phi(7, 7, 7);
  for (const VoxelIndex& v : phi_list) phi.add(v);
  SupportGrowth growth = grow_support(work, {3, 3, 5}, ToolSpec(2), g, phi);
  CHECK(!growth.found);
  CHECK(work == g);  // nothing committed
}

TEST_CASE("preprocess leaves a self-supported model untouched") {
  VoxelGrid g(5, 5, 5);
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4 - k; ++i) g.set_state({i, j, k}, true);  // a ziggurat
  VoxelGrid work = g;
  auto ops = preprocess(work, ToolSpec(10), 10);
  CHECK(ops.empty());
  CHECK(work == g);
}

TEST_CASE("preprocess output replays: pillars removed last, top-down") {
  Rng rng(55);
  VoxelGrid g = cantilever(rng, 12, 6, 10);
  REQUIRE(is_stable_global(g));

  VoxelGrid work = g;
  auto prefix = preprocess(work, ToolSpec(10), 10);
  CHECK(is_stable_global(work));
  CHECK(work.solid_count() == g.solid_count() + static_cast<int64_t>(prefix.size()));
  for (const InverseOp& op : prefix) {
    CHECK(op.kind == OpKind::Accretion);
    CHECK(op.phase == OpPhase::Pre);
    CHECK(work.is_solid(op.v));
    CHECK(!g.is_solid(op.v));  // enrichment only adds outside the model
  }

  // Forward: the prefix becomes the trailing SM ops in reverse order; they
  // must machine away cleanly from the finished model.
  PlanOptions options;
  options.config.preprocess = true;
  PlanSequence plan = plan_model(g, options);
  ReplayReport report = replay(forward_program(plan.ops), g, ToolSpec(10));
  CHECK(report.valid);
  // Pre-phase accretions exist and sit at the front of the inverse sequence.
  bool saw_plan_phase = false;
  int64_t pre_ops = 0;
  for (const InverseOp& op : plan.ops) {
    if (op.phase == OpPhase::Pre) {
      CHECK(!saw_plan_phase);  // contiguous prefix
      ++pre_ops;
    } else {
      saw_plan_phase = true;
    }
  }
  CHECK(pre_ops == static_cast<int64_t>(prefix.size()));
}

TEST_CASE("beam-class model gets a few hundred pre-processing supports") {
  // 100x20x20 beam: floor, four columns and a full top chord over a void; the
  // chord area drives the pillar count into the hundreds.
  VoxelGrid g(100, 20, 20);
  for (int j = 0; j < 20; ++j)
    for (int i = 0; i < 100; ++i) g.set_state({i, j, 0}, true);
  for (int pi = 0; pi < 4; ++pi)
    for (int k = 1; k < 19; ++k)
      for (int j = 8; j < 12; ++j)
        for (int i = 30 * pi; i < 30 * pi + 3 && i < 100; ++i) g.set_state({i, j, k}, true);
  for (int j = 8; j < 12; ++j)
    for (int i = 0; i < 100; ++i) g.set_state({i, j, 19}, true);

  VoxelGrid work = g;
  auto prefix = preprocess(work, ToolSpec(10), 10);
  CHECK(prefix.size() >= 100);
  CHECK(prefix.size() <= 3000);
  CHECK(is_stable_global(work));
}

TEST_CASE("preprocessing reduces total support on an overhang-heavy fixture") {
  // Wide deck on two thin pillars: per-voxel in-plan enhancement has to build
  // scaffolding under the whole deck, pre-processing drops a few thin pillars.
  VoxelGrid g(20, 7, 10);
  for (int k = 0; k < 8; ++k)
    for (int j = 2; j < 5; ++j) {
      g.set_state({0, j, k}, true);
      g.set_state({19, j, k}, true);
    }
  for (int j = 0; j < 7; ++j)
    for (int i = 0; i < 20; ++i) g.set_state({i, j, 8}, true);
  REQUIRE(is_stable_global(g));

  PlanOptions with, without;
  with.config.tool_length = 6;
  with.config.delta = 6;
  without = with;
  without.config.preprocess = false;

  PlanStats s_with = plan_statistics(plan_model(g, with).ops, g);
  PlanStats s_without = plan_statistics(plan_model(g, without).ops, g);
  CHECK(s_with.accretions <= s_without.accretions);
  CHECK(s_with.pre_support > 0);
}
