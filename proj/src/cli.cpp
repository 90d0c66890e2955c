#include "hmplan/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "hmplan/io.hpp"
#include "hmplan/nullifier.hpp"
#include "hmplan/replay.hpp"
#include "hmplan/stability.hpp"
#include "hmplan/toolpath.hpp"

namespace hmplan {

namespace {

GridFileFormat parse_format(const std::string& s) {
  if (s == "auto") return GridFileFormat::Auto;
  if (s == "text") return GridFileFormat::Text;
  if (s == "bin") return GridFileFormat::Binary;
  if (s == "stl") return GridFileFormat::Stl;
  throw ParseError("--format must be one of auto|text|bin|stl");
}

int env_threads() {
  const char* env = std::getenv("HMPLAN_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  if (n == 0) return static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, n);
}

int cmd_plan(const std::string& input, const std::string& format_name, int tool_length,
             int delta, bool no_preprocess, int mpfs, bool oracle_stability,
             const std::string& out, bool stats, const std::string& progress_dump) {
  VoxelGrid model = load_grid(input, parse_format(format_name));

  PlanOptions options;
  options.config.tool_length = tool_length;
  options.config.delta = delta;
  options.config.mpfs = mpfs;
  options.config.preprocess = !no_preprocess;
  options.config.stability = oracle_stability ? StabilityMode::Oracle : StabilityMode::Local;
  options.threads = env_threads();
  if (!progress_dump.empty()) {
    std::filesystem::create_directories(progress_dump);
    options.progress = [&progress_dump](const VoxelGrid& g, int K) {
      save_grid(progress_dump + "/layer_" + std::to_string(K) + ".hmvox", g);
    };
  }

  auto t0 = std::chrono::steady_clock::now();
  std::optional<PlanSequence> plan;
  try {
    plan = plan_model(model, options);
  } catch (const ModelUnstableError& e) {
    std::cerr << "error: " << e.what() << " (add a connection to the base layer)\n";
    return 1;
  } catch (const PlanStuckError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!out.empty()) write_file(out, plan_to_json(*plan).dump(2) + "\n");
  PlanStats pstats = plan_statistics(plan->ops, plan->initial);
  std::cout << "planned " << pstats.total_ops << " ops (" << pstats.erosions << " ero, "
            << pstats.accretions << " acc) for " << model.solid_count() << " solid voxels in "
            << elapsed << " s\n";
  if (stats) std::cout << plan_stats_to_json(pstats).dump(2) << "\n";
  return 0;
}

int cmd_replay(const std::string& plan_path, const std::string& target_path, bool audit,
               bool full_reflood, const std::string& report_path) {
  PlanSequence plan = plan_from_json(nlohmann::ordered_json::parse(read_file(plan_path)));
  VoxelGrid target = load_grid(target_path);

  ReplayOptions opts;
  opts.audit = audit;
  opts.full_reflood = full_reflood;
  ReplayReport report =
      replay(forward_program(plan.ops), target, ToolSpec(plan.config.tool_length), opts);

  if (!report_path.empty()) write_file(report_path, replay_report_to_json(report).dump(2) + "\n");
  if (report.valid) {
    std::cout << "valid, exact match (" << report.stats.total_ops << " ops, "
              << report.stats.tool_switches << " tool engagements)\n";
    return 0;
  }
  if (report.first_violation) {
    const Violation& v = *report.first_violation;
    std::cout << "INVALID: step " << v.step << " " << to_string(v.reason) << " at (" << v.v.i
              << "," << v.v.j << "," << v.v.k << ")";
    if (audit) std::cout << "; " << report.violations.size() << " violations total";
    std::cout << "\n";
  } else {
    std::cout << "INVALID: final state does not match the target\n";
  }
  return 1;
}

int cmd_stats(const std::string& plan_path) {
  PlanSequence plan = plan_from_json(nlohmann::ordered_json::parse(read_file(plan_path)));
  std::cout << plan_stats_to_json(plan_statistics(plan.ops, plan.initial)).dump(2) << "\n";
  return 0;
}

int cmd_toolpath(const std::string& plan_path, double voxel_size, double nozzle,
                 const std::string& out, const std::string& gcode_out) {
  PlanSequence plan = plan_from_json(nlohmann::ordered_json::parse(read_file(plan_path)));
  std::vector<Patch> patches = group_patches(forward_program(plan.ops));
  ToolpathDocument doc = emit_toolpath(patches, voxel_size, nozzle, plan.config.tool_length);
  if (!out.empty()) write_file(out, toolpath_to_json(doc).dump(2) + "\n");
  if (!gcode_out.empty()) write_file(gcode_out, toolpath_to_gcode(doc));
  std::cout << doc.paths.size() << " patches, " << doc.tool_change_count()
            << " tool engagements\n";
  return 0;
}

int cmd_voxelize(const std::string& stl_path, int res, const std::string& out,
                 const std::string& format_name) {
  VoxelGrid g = voxelize_mesh(load_binary_stl(stl_path), res);
  GridFileFormat fmt = format_name == "bin" ? GridFileFormat::Binary : GridFileFormat::Text;
  if (!out.empty())
    save_grid(out, g, fmt);
  else
    std::cout << serialize_grid_text(g);
  std::cerr << "voxelized to " << g.nx() << "x" << g.ny() << "x" << g.nz() << ", "
            << g.solid_count() << " solid voxels\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"hmplan - inverse-search process planner for hybrid additive-subtractive "
               "manufacturing"};
  app.require_subcommand(1);

  // plan
  std::string in_path, in_format = "auto", out_path, progress_dump;
  int tool_length = 10, delta = 10, mpfs = 0;
  unsigned seed = 0;
  bool no_preprocess = false, want_stats = false, oracle_stability = false;
  CLI::App* plan = app.add_subcommand("plan", "compute a fabrication plan for a model");
  plan->add_option("--input", in_path, "input model file")->required();
  plan->add_option("--format", in_format, "input format: auto|text|bin|stl");
  plan->add_option("--tool-length", tool_length, "SM tool length in voxels (>= 2)");
  plan->add_option("--delta", delta, "localized stability search radius");
  plan->add_flag("--no-preprocess", no_preprocess, "skip support pre-processing");
  plan->add_option("--mpfs", mpfs, "minimum printable feature size (voxels, 0 = off)");
  plan->add_option("--seed", seed, "reserved; plans are fully deterministic");
  plan->add_flag("--oracle-stability", oracle_stability,
                 "use the global stability check instead of the localized one");
  plan->add_option("--out", out_path, "write the plan JSON here");
  plan->add_flag("--stats", want_stats, "print plan statistics");
  plan->add_option("--progress-dump", progress_dump,
                   "write layer_<K>.hmvox snapshots to this directory");

  // replay
  std::string rp_plan, rp_target, rp_report;
  bool rp_audit = false, rp_full = false;
  CLI::App* rp = app.add_subcommand("replay", "verify a plan by forward replay");
  rp->add_option("--plan", rp_plan, "plan JSON")->required();
  rp->add_option("--target", rp_target, "target model file")->required();
  rp->add_flag("--audit", rp_audit, "collect every violation instead of failing fast");
  rp->add_flag("--full-reflood", rp_full, "re-run the global base flood after every SM op");
  rp->add_option("--report", rp_report, "write the replay report JSON here");

  // stats
  std::string st_plan;
  CLI::App* st = app.add_subcommand("stats", "print statistics for a plan");
  st->add_option("--plan", st_plan, "plan JSON")->required();

  // toolpath
  std::string tp_plan, tp_out, tp_gcode;
  double tp_voxel = 1.2, tp_nozzle = 0.6;
  CLI::App* tp = app.add_subcommand("toolpath", "emit machine-neutral toolpaths for a plan");
  tp->add_option("--plan", tp_plan, "plan JSON")->required();
  tp->add_option("--voxel-size", tp_voxel, "voxel edge length in mm");
  tp->add_option("--nozzle", tp_nozzle, "nozzle diameter in mm");
  tp->add_option("--out", tp_out, "write the toolpath JSON here");
  tp->add_option("--gcode", tp_gcode, "also write a flat G-code-like rendering");

  // voxelize
  std::string vx_stl, vx_out, vx_format = "text";
  int vx_res = 64;
  CLI::App* vx = app.add_subcommand("voxelize", "voxelize a binary STL mesh");
  vx->add_option("--stl", vx_stl, "binary STL file")->required();
  vx->add_option("--res", vx_res, "voxels along the longest axis");
  vx->add_option("--out", vx_out, "output grid file (stdout if omitted)");
  vx->add_option("--out-format", vx_format, "output format: text|bin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (plan->parsed())
      return cmd_plan(in_path, in_format, tool_length, delta, no_preprocess, mpfs,
                      oracle_stability, out_path, want_stats, progress_dump);
    if (rp->parsed()) return cmd_replay(rp_plan, rp_target, rp_audit, rp_full, rp_report);
    if (st->parsed()) return cmd_stats(st_plan);
    if (tp->parsed()) return cmd_toolpath(tp_plan, tp_voxel, tp_nozzle, tp_out, tp_gcode);
    if (vx->parsed()) return cmd_voxelize(vx_stl, vx_res, vx_out, vx_format);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace hmplan
