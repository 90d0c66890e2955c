#include "hmplan/nullifier.hpp"

#include <algorithm>
#include <thread>
#include <unordered_set>

#include "hmplan/presupport.hpp"
#include "hmplan/stability.hpp"

namespace hmplan {

namespace {

// Solid voxels of layer K in (j,i) order.
std::vector<VoxelIndex> layer_voxels(const VoxelGrid& g, int K) {
  std::vector<VoxelIndex> out;
  out.reserve(static_cast<size_t>(g.layer_count(K)));
  for (int j = 0; j < g.ny(); ++j) {
    int lo = g.row_min_i(j, K);
    if (lo < 0) continue;
    int hi = g.row_max_i(j, K);
    for (int i = lo; i <= hi; ++i)
      if (g.is_solid({i, j, K})) out.push_back({i, j, K});
  }
  return out;
}

size_t pack(const VoxelGrid& g, const VoxelIndex& v) {
  return (static_cast<size_t>(v.k) * g.ny() + v.j) * g.nx() + v.i;
}

}  // namespace

std::vector<VoxelIndex> collect_feasible(const VoxelGrid& g, int K, const PlanContext& ctx,
                                         VoxelMask& lambda) {
  std::vector<VoxelIndex> candidates = layer_voxels(g, K);
  std::vector<VoxelIndex> certified;

  // Self-support is independent of lambda (lambda lives on layer K, supports
  // at K-1), so it can be screened in parallel over a frozen snapshot. The
  // stability part depends on the cumulative lambda and stays sequential.
  std::vector<uint8_t> self_sup(candidates.size(), 0);
  auto screen = [&](size_t begin, size_t end) {
    VoxelIndex buf[5];
    for (size_t a = begin; a < end; ++a) {
      const VoxelIndex& v = candidates[a];
      if (v.k == 0) {
        self_sup[a] = 1;
        continue;
      }
      int n = supporting_neighbors(g, v, buf);
      for (int b = 0; b < n; ++b)
        if (g.is_solid(buf[b])) {
          self_sup[a] = 1;
          break;
        }
    }
  };
  int workers = std::max(1, ctx.threads);
  if (workers > 1 && candidates.size() >= 2048) {
    std::vector<std::thread> pool;
    size_t chunk = (candidates.size() + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
      size_t b = t * chunk, e = std::min(candidates.size(), b + chunk);
      if (b >= e) break;
      pool.emplace_back(screen, b, e);
    }
    for (auto& th : pool) th.join();
  } else {
    screen(0, candidates.size());
  }

  for (size_t a = 0; a < candidates.size(); ++a) {
    if (!self_sup[a]) continue;
    const VoxelIndex& v = candidates[a];
    if (am_collides(g, v, &lambda)) continue;  // vacuous at the top layer
    bool stable = ctx.stability == StabilityMode::Oracle
                      ? remains_stable_after_removal_oracle(g, v, &lambda)
                      : remains_stable_local(g, v, ctx.delta, &lambda);
    if (!stable) continue;
    lambda.add(v);
    certified.push_back(v);
  }
  return certified;
}

namespace {

bool erosion_feasible_now(const VoxelGrid& g, const VoxelIndex& v, const PlanContext& ctx,
                          const VoxelMask& lambda) {
  FeasibilityContext fctx{g, ctx.tool, &lambda, ctx.delta, ctx.stability};
  return is_erosion_feasible(fctx, v);
}

}  // namespace

EnhanceResult enhance(VoxelGrid& g, const VoxelIndex& v, int K, const PlanContext& ctx,
                      const VoxelMask& lambda) {
  EnhanceResult result;
  if (erosion_feasible_now(g, v, ctx, lambda)) {
    result.feasible = true;
    return result;
  }

  Box box = clamp_box(g, v, ctx.delta);
  FeasibilityContext fctx{g, ctx.tool, &lambda, ctx.delta, ctx.stability};

  // Accumulated region A: v, its solid neighbors, and everything accreted.
  std::vector<VoxelIndex> region{v};
  std::unordered_set<size_t> in_region{pack(g, v)};
  {
    VoxelIndex nbuf[18];
    int n = neighbors18(g, v, nbuf);
    for (int a = 0; a < n; ++a)
      if (g.is_solid(nbuf[a]) && in_region.insert(pack(g, nbuf[a])).second)
        region.push_back(nbuf[a]);
  }

  for (;;) {
    // Ring candidates: empty neighbors of A strictly below K, inside the box.
    std::vector<VoxelIndex> ring;
    {
      std::unordered_set<size_t> seen;
      VoxelIndex nbuf[18];
      for (const VoxelIndex& a : region) {
        int n = neighbors18(g, a, nbuf);
        for (int b = 0; b < n; ++b) {
          const VoxelIndex& w = nbuf[b];
          if (w.k >= K || g.is_solid(w) || !box.contains(w)) continue;
          if (seen.insert(pack(g, w)).second) ring.push_back(w);
        }
      }
      std::sort(ring.begin(), ring.end(), kji_less);
    }

    bool added_any = false;
    for (const VoxelIndex& w : ring) {
      if (g.is_solid(w)) continue;  // an earlier candidate this ring took it
      std::optional<SmOrientation> o = is_accretion_feasible(fctx, w);
      if (!o) continue;
      g.set_state(w, true);
      result.ops.push_back({OpKind::Accretion, w, o, OpPhase::Plan});
      if (in_region.insert(pack(g, w)).second) region.push_back(w);
      added_any = true;
    }

    if (erosion_feasible_now(g, v, ctx, lambda)) {
      result.feasible = true;
      return result;
    }
    if (!added_any) return result;  // exhausted; committed accretions stay
  }
}

std::vector<VoxelIndex> order_erosions(const std::vector<VoxelIndex>& lambda_list,
                                       const VoxelGrid& g) {
  if (lambda_list.empty()) return {};

  // Cluster by in-layer 8-adjacency.
  std::unordered_set<size_t> members;
  for (const VoxelIndex& v : lambda_list) members.insert(pack(g, v));

  std::vector<VoxelIndex> sorted = lambda_list;
  std::sort(sorted.begin(), sorted.end(), kji_less);

  std::unordered_set<size_t> assigned;
  std::vector<std::vector<VoxelIndex>> clusters;
  for (const VoxelIndex& seed : sorted) {
    if (assigned.count(pack(g, seed))) continue;
    std::vector<VoxelIndex> cluster;
    std::vector<VoxelIndex> stack{seed};
    assigned.insert(pack(g, seed));
    while (!stack.empty()) {
      VoxelIndex cur = stack.back();
      stack.pop_back();
      cluster.push_back(cur);
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          VoxelIndex w{cur.i + di, cur.j + dj, cur.k};
          if (!g.in_bounds(w)) continue;
          size_t id = pack(g, w);
          if (!members.count(id) || assigned.count(id)) continue;
          assigned.insert(id);
          stack.push_back(w);
        }
    }
    std::sort(cluster.begin(), cluster.end(), kji_less);
    clusters.push_back(std::move(cluster));
  }

  // Boustrophedon inside a cluster: rows by ascending j, i direction
  // alternating per visited row.
  auto boustrophedon = [](const std::vector<VoxelIndex>& cluster) {
    std::vector<VoxelIndex> out;
    out.reserve(cluster.size());
    bool ascending = true;
    size_t a = 0;
    while (a < cluster.size()) {
      size_t b = a;
      while (b < cluster.size() && cluster[b].j == cluster[a].j) ++b;
      if (ascending)
        for (size_t c = a; c < b; ++c) out.push_back(cluster[c]);
      else
        for (size_t c = b; c-- > a;) out.push_back(cluster[c]);
      ascending = !ascending;
      a = b;
    }
    return out;
  };

  std::vector<VoxelIndex> out;
  out.reserve(lambda_list.size());
  std::vector<bool> done(clusters.size(), false);
  // First cluster: the one holding the lexicographic minimum (clusters[0],
  // since cluster seeds were visited in sorted order).
  size_t cur = 0;
  for (size_t visited = 0; visited < clusters.size(); ++visited) {
    done[cur] = true;
    std::vector<VoxelIndex> path = boustrophedon(clusters[cur]);
    out.insert(out.end(), path.begin(), path.end());
    if (visited + 1 == clusters.size()) break;

    const VoxelIndex exit = path.back();
    size_t best = SIZE_MAX;
    int64_t best_d = 0;
    for (size_t c = 0; c < clusters.size(); ++c) {
      if (done[c]) continue;
      int64_t d = INT64_MAX;
      for (const VoxelIndex& m : clusters[c]) {
        int64_t di = m.i - exit.i, dj = m.j - exit.j;
        d = std::min(d, di * di + dj * dj);
      }
      if (best == SIZE_MAX || d < best_d) {
        best = c;
        best_d = d;
      }
    }
    cur = best;
  }
  return out;
}

void apply_mpfs_preference(VoxelGrid& g, int K, std::vector<VoxelIndex>& lambda_list,
                           VoxelMask& lambda, int M, const PlanContext& ctx,
                           std::vector<InverseOp>& out_ops) {
  if (M <= 1 || lambda_list.empty()) return;

  // In-layer clusters of the current lambda.
  std::unordered_set<size_t> members;
  for (const VoxelIndex& v : lambda_list) members.insert(pack(g, v));

  std::vector<VoxelIndex> sorted = lambda_list;
  std::sort(sorted.begin(), sorted.end(), kji_less);
  std::unordered_set<size_t> assigned;

  for (const VoxelIndex& seed : sorted) {
    if (assigned.count(pack(g, seed))) continue;
    std::vector<VoxelIndex> cluster;
    std::vector<VoxelIndex> stack{seed};
    assigned.insert(pack(g, seed));
    while (!stack.empty()) {
      VoxelIndex v = stack.back();
      stack.pop_back();
      cluster.push_back(v);
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          VoxelIndex w{v.i + di, v.j + dj, v.k};
          if (!g.in_bounds(w)) continue;
          size_t id = pack(g, w);
          if (!members.count(id) || assigned.count(id)) continue;
          assigned.insert(id);
          stack.push_back(w);
        }
    }
    if (static_cast<int>(cluster.size()) >= M) continue;

    // Retry enhancement on uncertified layer-K voxels adjacent to the small
    // cluster; successes join lambda and merge clusters in the final order.
    std::vector<VoxelIndex> adjacent;
    std::unordered_set<size_t> seen;
    for (const VoxelIndex& v : cluster)
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          VoxelIndex w{v.i + di, v.j + dj, v.k};
          if (!g.in_bounds(w) || !g.is_solid(w) || lambda.contains(w)) continue;
          if (seen.insert(pack(g, w)).second) adjacent.push_back(w);
        }
    std::sort(adjacent.begin(), adjacent.end(), kji_less);
    for (const VoxelIndex& u : adjacent) {
      if (lambda.contains(u)) continue;
      EnhanceResult res = enhance(g, u, K, ctx, lambda);
      out_ops.insert(out_ops.end(), res.ops.begin(), res.ops.end());
      if (res.feasible) {
        lambda.add(u);
        lambda_list.push_back(u);
        members.insert(pack(g, u));
      }
    }
  }
}

std::vector<InverseOp> nullify(VoxelGrid& work, const PlanOptions& options) {
  PlanContext ctx{ToolSpec(options.config.tool_length), options.config.delta,
                  options.config.stability, options.threads};
  std::vector<InverseOp> ops;
  VoxelMask lambda(work.nx(), work.ny(), work.nz());

  while (work.solid_count() > 0) {
    const int K = work.max_solid_k();
    if (options.progress) options.progress(work, K);

    lambda.clear();
    std::vector<VoxelIndex> lambda_list = collect_feasible(work, K, ctx, lambda);

    // Step 4: try to enhance everything that failed the screen.
    for (const VoxelIndex& v : layer_voxels(work, K)) {
      if (lambda.contains(v)) continue;
      EnhanceResult res = enhance(work, v, K, ctx, lambda);
      ops.insert(ops.end(), res.ops.begin(), res.ops.end());
      if (res.feasible) {
        lambda.add(v);
        lambda_list.push_back(v);
      }
    }

    if (options.config.mpfs > 0)
      apply_mpfs_preference(work, K, lambda_list, lambda, options.config.mpfs, ctx, ops);

    if (lambda_list.empty())
      throw PlanStuckError("no erosion possible on layer " + std::to_string(K) + " (" +
                               std::to_string(work.layer_count(K)) +
                               " voxels remain); this indicates a planner bug",
                           K, work);

    for (const VoxelIndex& v : order_erosions(lambda_list, work)) {
      ops.push_back({OpKind::Erosion, v, std::nullopt, OpPhase::Plan});
      work.set_state(v, false);
    }
  }
  return ops;
}

PlanSequence plan_model(const VoxelGrid& H, const PlanOptions& options) {
  if (H.solid_count() == 0) throw std::invalid_argument("input model is empty");
  if (!is_stable_global(H))
    throw ModelUnstableError(
        "input model is not stable: some material is not connected to the base layer");

  VoxelGrid work = H;
  std::vector<InverseOp> ops;
  if (options.config.preprocess) {
    ToolSpec tool(options.config.tool_length);
    ops = preprocess(work, tool, options.config.delta);
  }

  std::vector<InverseOp> plan_ops = nullify(work, options);
  ops.insert(ops.end(), plan_ops.begin(), plan_ops.end());

  int64_t accretions = 0;
  for (const InverseOp& op : ops)
    if (op.kind == OpKind::Accretion) ++accretions;
  if (static_cast<int64_t>(ops.size()) != H.solid_count() + 2 * accretions)
    throw std::logic_error("operation-count identity violated");

  return PlanSequence{H, std::move(ops), options.config};
}

}  // namespace hmplan
