#include <doctest.h>

#include <algorithm>
#include <set>

#include "hmplan/grid.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace hmplan;
using namespace hmplan::testing;

TEST_CASE("new grids are empty and validated") {
  VoxelGrid g(3, 3, 3);
  CHECK(g.solid_count() == 0);
  CHECK(!g.top_layer().has_value());

  VoxelGrid big(100, 20, 20);
  CHECK(static_cast<int64_t>(big.nx()) * big.ny() * big.nz() == 40000);
  CHECK(big.solid_count() == 0);

  VoxelGrid tiny(1, 1, 1);
  CHECK(tiny.solid_count() == 0);

  CHECK_THROWS_AS(VoxelGrid(0, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(VoxelGrid(3, -1, 3), std::invalid_argument);
}

TEST_CASE("set_state updates occupancy and acceleration structures") {
  VoxelGrid g(3, 3, 3);
  g.set_state({0, 0, 0}, true);
  CHECK(g.solid_count() == 1);
  CHECK(g.column_top(0, 0) == 0);
  CHECK(g.top_layer() == 0);

  SUBCASE("set then unset is an involution") {
    VoxelGrid before = g;
    g.set_state({1, 2, 1}, true);
    g.set_state({1, 2, 1}, false);
    CHECK(g == before);
    CHECK(g.audit());
  }

  SUBCASE("idempotent writes") {
    g.set_state({0, 0, 0}, true);
    CHECK(g.solid_count() == 1);
    CHECK(g.audit());
  }

  CHECK_THROWS_AS(g.set_state({3, 0, 0}, true), std::invalid_argument);
  CHECK_THROWS_AS(g.set_state({0, -1, 0}, true), std::invalid_argument);
}

TEST_CASE("random mutation scripts keep accel equal to a rebuild") {
  Rng rng(101);
  VoxelGrid g(8, 8, 8);
  for (int op = 0; op < 500; ++op) {
    VoxelIndex v{rng.below(8), rng.below(8), rng.below(8)};
    g.set_state(v, rng.chance(0.6));
  }
  CHECK(g.audit());
  // and again after clearing everything
  for (int k = 0; k < 8; ++k)
    for (int j = 0; j < 8; ++j)
      for (int i = 0; i < 8; ++i) g.set_state({i, j, k}, false);
  CHECK(g.solid_count() == 0);
  CHECK(g.audit());
}

TEST_CASE("neighbors18 enumerates face and edge neighbors in fixed order") {
  VoxelGrid g(5, 5, 5);

  auto inner = neighbors18(g, {2, 2, 2});
  CHECK(inner.size() == 18);
  for (const VoxelIndex& w : inner) {
    int nonzero = (w.i != 2) + (w.j != 2) + (w.k != 2);
    CHECK(nonzero >= 1);
    CHECK(nonzero <= 2);  // never a vertex-only neighbor
  }
  // Documented order: ascending (dk, dj, di).
  CHECK(inner.front() == VoxelIndex{2, 1, 1});
  CHECK(inner.back() == VoxelIndex{2, 3, 3});

  // Counts frozen from enumerating the 18 offsets clipped to bounds:
  // a corner keeps 3 face + 3 edge, a domain edge keeps 4 face + 5 edge.
  CHECK(neighbors18(g, {0, 0, 0}).size() == 6);
  CHECK(neighbors18(g, {0, 0, 2}).size() == 9);

  VoxelGrid unit(1, 1, 1);
  CHECK(neighbors18(unit, {0, 0, 0}).empty());
}

TEST_CASE("supporting_neighbors are the height k-1 plus shape") {
  VoxelGrid g(5, 5, 5);
  CHECK(supporting_neighbors(g, {2, 2, 2}).size() == 5);
  CHECK(supporting_neighbors(g, {2, 2, 0}).empty());  // base needs no support
  CHECK(supporting_neighbors(g, {0, 2, 2}).size() == 4);
  for (const VoxelIndex& w : supporting_neighbors(g, {2, 2, 2})) CHECK(w.k == 1);
}

TEST_CASE("flood_components matches the union-find oracle") {
  SUBCASE("corner contact does not connect") {
    VoxelGrid g(4, 4, 4);
    g.set_state({0, 0, 0}, true);
    g.set_state({1, 1, 1}, true);  // vertex-only contact
    std::vector<VoxelIndex> seeds{{0, 0, 0}, {1, 1, 1}};
    CHECK(flood_components(g, seeds).size() == 2);
  }

  SUBCASE("solid cube is one component") {
    VoxelGrid g(4, 4, 4);
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) g.set_state({i, j, k}, true);
    std::vector<VoxelIndex> seeds{{0, 0, 0}};
    auto comps = flood_components(g, seeds);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].size() == 8);
  }

  SUBCASE("random grids") {
    Rng rng(7);
    for (int rep = 0; rep < 30; ++rep) {
      VoxelGrid g(6, 6, 6);
      for (int k = 0; k < 6; ++k)
        for (int j = 0; j < 6; ++j)
          for (int i = 0; i < 6; ++i)
            if (rng.chance(0.35)) g.set_state({i, j, k}, true);

      std::vector<VoxelIndex> seeds;
      for (int k = 0; k < 6; ++k)
        for (int j = 0; j < 6; ++j)
          for (int i = 0; i < 6; ++i)
            if (g.is_solid({i, j, k})) seeds.push_back({i, j, k});

      auto comps = flood_components(g, seeds);
      UnionFind uf = connectivity_oracle(g);

      // Same partition: two voxels share a flood component iff they share a
      // union-find root.
      size_t flood_total = 0;
      for (const auto& comp : comps) {
        flood_total += comp.size();
        int root = uf.find(static_cast<int>(cell_id(g, comp[0])));
        for (const VoxelIndex& v : comp)
          CHECK(uf.find(static_cast<int>(cell_id(g, v))) == root);
      }
      CHECK(flood_total == static_cast<size_t>(g.solid_count()));
      std::set<int> roots;
      for (const auto& comp : comps)
        roots.insert(uf.find(static_cast<int>(cell_id(g, comp[0]))));
      CHECK(roots.size() == comps.size());
    }
  }
}

TEST_CASE("flood_components honors the virtual-empty mask and region") {
  VoxelGrid g(5, 1, 1);
  for (int i = 0; i < 5; ++i) g.set_state({i, 0, 0}, true);
  VoxelMask cut(5, 1, 1);
  cut.add({2, 0, 0});
  std::vector<VoxelIndex> seeds{{0, 0, 0}, {4, 0, 0}};
  auto comps = flood_components(g, seeds, &cut);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].size() == 2);
  CHECK(comps[1].size() == 2);

  Box region{{0, 0, 0}, {1, 0, 0}};
  auto bounded = flood_components(g, seeds, nullptr, &region);
  REQUIRE(bounded.size() == 1);
  CHECK(bounded[0].size() == 2);
}

TEST_CASE("top_layer tracks erosion of the topmost layer") {
  VoxelGrid g(3, 3, 6);
  g.set_state({1, 1, 4}, true);
  CHECK(g.top_layer() == 4);
  g.set_state({1, 1, 2}, true);
  g.set_state({2, 2, 4}, true);
  g.set_state({1, 1, 4}, false);
  g.set_state({2, 2, 4}, false);
  CHECK(g.top_layer() == 2);  // scan oracle: next occupied layer down
  g.set_state({1, 1, 2}, false);
  CHECK(!g.top_layer().has_value());
}

TEST_CASE("mask bookkeeping") {
  VoxelMask m(4, 4, 4);
  m.add({1, 2, 3});
  m.add({1, 2, 3});
  CHECK(m.size() == 1);
  CHECK(m.contains({1, 2, 3}));
  CHECK(m.count_at_i(1) == 1);
  CHECK(m.count_at_k(3) == 1);
  m.remove({1, 2, 3});
  CHECK(m.size() == 0);
  CHECK(!m.contains({1, 2, 3}));
  m.add({0, 0, 0});
  m.clear();
  CHECK(m.size() == 0);
  CHECK(m.count_at_i(0) == 0);
}
