#include "hmplan/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace hmplan {

using nlohmann::ordered_json;

std::string serialize_grid_text(const VoxelGrid& g) {
  std::string out = "hmvox " + std::to_string(g.nx()) + " " + std::to_string(g.ny()) + " " +
                    std::to_string(g.nz()) + "\n";
  out.reserve(out.size() + static_cast<size_t>(g.nx() + 1) * g.ny() * g.nz() + g.nz());
  for (int k = 0; k < g.nz(); ++k) {
    if (k > 0) out.push_back('\n');
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) out.push_back(g.is_solid({i, j, k}) ? '#' : '.');
      out.push_back('\n');
    }
  }
  return out;
}

VoxelGrid parse_grid_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;

  auto next_line = [&](bool allow_eof) -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    if (!allow_eof)
      throw ParseError("unexpected end of input after line " + std::to_string(line_no));
    return false;
  };

  if (!next_line(false)) {}
  std::istringstream header(line);
  std::string magic;
  int nx = 0, ny = 0, nz = 0;
  header >> magic >> nx >> ny >> nz;
  if (magic != "hmvox" || header.fail())
    throw ParseError("line 1: expected header \"hmvox <nx> <ny> <nz>\"");
  if (nx < 1 || ny < 1 || nz < 1) throw ParseError("line 1: dimensions must be positive");
  // Every cell needs at least one character, so the declared size cannot
  // exceed the input length; rejects absurd headers before allocating.
  if (static_cast<uint64_t>(nx) * static_cast<uint64_t>(ny) * static_cast<uint64_t>(nz) >
      text.size())
    throw ParseError("line 1: declared dimensions exceed the input size");

  VoxelGrid g(nx, ny, nz);
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      // Blank lines between blocks are tolerated anywhere between rows.
      do {
        next_line(false);
      } while (line.empty());
      if (static_cast<int>(line.size()) != nx)
        throw ParseError("line " + std::to_string(line_no) + ": expected " +
                         std::to_string(nx) + " characters for layer " + std::to_string(k) +
                         " row " + std::to_string(j) + ", got " +
                         std::to_string(line.size()));
      for (int i = 0; i < nx; ++i) {
        char c = line[i];
        if (c == '#')
          g.set_state({i, j, k}, true);
        else if (c != '.')
          throw ParseError("line " + std::to_string(line_no) + ": illegal character '" +
                           std::string(1, c) + "'");
      }
    }
  }
  return g;
}

std::vector<uint8_t> serialize_grid_binary(const VoxelGrid& g) {
  std::vector<uint8_t> out;
  size_t cells = static_cast<size_t>(g.nx()) * g.ny() * g.nz();
  out.reserve(5 + 12 + (cells + 7) / 8);
  const char magic[5] = {'H', 'M', 'V', 'X', '1'};
  out.insert(out.end(), magic, magic + 5);
  for (uint32_t dim : {static_cast<uint32_t>(g.nx()), static_cast<uint32_t>(g.ny()),
                       static_cast<uint32_t>(g.nz())})
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<uint8_t>(dim >> (8 * b)));

  out.resize(17 + (cells + 7) / 8, 0);
  size_t bit = 0;
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i, ++bit)
        if (g.is_solid({i, j, k})) out[17 + bit / 8] |= static_cast<uint8_t>(1u << (bit % 8));
  return out;
}

VoxelGrid parse_grid_binary(std::span<const uint8_t> bytes) {
  if (bytes.size() < 17 || std::memcmp(bytes.data(), "HMVX1", 5) != 0)
    throw ParseError("not a binary grid file (bad magic)");
  auto dim = [&](size_t off) {
    uint32_t d = 0;
    for (int b = 0; b < 4; ++b) d |= static_cast<uint32_t>(bytes[off + b]) << (8 * b);
    return d;
  };
  uint32_t nx = dim(5), ny = dim(9), nz = dim(13);
  if (nx < 1 || ny < 1 || nz < 1 || nx > (1u << 20) || ny > (1u << 20) || nz > (1u << 20))
    throw ParseError("binary grid: implausible dimensions");
  size_t cells = static_cast<size_t>(nx) * ny * nz;
  if (bytes.size() != 17 + (cells + 7) / 8)
    throw ParseError("binary grid: truncated payload (expected " +
                     std::to_string(17 + (cells + 7) / 8) + " bytes, got " +
                     std::to_string(bytes.size()) + ")");
  VoxelGrid g(static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(nz));
  size_t bit = 0;
  for (uint32_t k = 0; k < nz; ++k)
    for (uint32_t j = 0; j < ny; ++j)
      for (uint32_t i = 0; i < nx; ++i, ++bit)
        if (bytes[17 + bit / 8] >> (bit % 8) & 1)
          g.set_state({static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)}, true);
  return g;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw ParseError("short write to " + path);
}

VoxelGrid load_grid(const std::string& path, GridFileFormat format, int stl_resolution) {
  std::string data = read_file(path);
  if (format == GridFileFormat::Auto) {
    if (data.size() >= 5 && std::memcmp(data.data(), "HMVX1", 5) == 0)
      format = GridFileFormat::Binary;
    else if (data.rfind("hmvox", 0) == 0)
      format = GridFileFormat::Text;
    else if (path.size() > 4 && (path.ends_with(".stl") || path.ends_with(".STL")))
      format = GridFileFormat::Stl;
    else
      throw ParseError(path + ": unrecognized grid format");
  }
  switch (format) {
    case GridFileFormat::Text: return parse_grid_text(data);
    case GridFileFormat::Binary:
      return parse_grid_binary(
          std::span(reinterpret_cast<const uint8_t*>(data.data()), data.size()));
    case GridFileFormat::Stl: return voxelize_mesh(load_binary_stl(path), stl_resolution);
    case GridFileFormat::Auto: break;
  }
  throw ParseError("unsupported format");
}

void save_grid(const std::string& path, const VoxelGrid& g, GridFileFormat format) {
  if (format == GridFileFormat::Binary) {
    std::vector<uint8_t> bytes = serialize_grid_binary(g);
    write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  } else {
    write_file(path, serialize_grid_text(g));
  }
}

ordered_json plan_to_json(const PlanSequence& plan) {
  ordered_json j;
  j["version"] = 1;
  j["resolution"] = {plan.initial.nx(), plan.initial.ny(), plan.initial.nz()};
  ordered_json tool;
  tool["L"] = plan.config.tool_length;
  tool["delta"] = plan.config.delta;
  if (plan.config.mpfs > 0) tool["mpfs"] = plan.config.mpfs;
  j["tool"] = tool;
  j["initial"] = serialize_grid_text(plan.initial);
  ordered_json ops = ordered_json::array();
  for (const InverseOp& op : plan.ops) {
    ordered_json o;
    o["t"] = op.kind == OpKind::Erosion ? "ero" : "acc";
    o["v"] = {op.v.i, op.v.j, op.v.k};
    if (op.orient) o["o"] = to_string(*op.orient);
    o["phase"] = op.phase == OpPhase::Pre ? "pre" : "plan";
    ops.push_back(std::move(o));
  }
  j["ops"] = std::move(ops);
  return j;
}

PlanSequence plan_from_json(const ordered_json& j) {
  if (!j.contains("version") || j["version"].get<int>() != 1)
    throw ParseError("plan file: unsupported version");
  VoxelGrid initial = parse_grid_text(j.at("initial").get<std::string>());
  auto res = j.at("resolution");
  if (res.size() != 3 || res[0].get<int>() != initial.nx() || res[1].get<int>() != initial.ny() ||
      res[2].get<int>() != initial.nz())
    throw ParseError("plan file: resolution does not match the inlined model");

  PlanConfig config;
  config.tool_length = j.at("tool").at("L").get<int>();
  config.delta = j.at("tool").at("delta").get<int>();
  config.mpfs = j.at("tool").value("mpfs", 0);

  std::vector<InverseOp> ops;
  for (const auto& o : j.at("ops")) {
    InverseOp op;
    std::string t = o.at("t").get<std::string>();
    if (t == "ero")
      op.kind = OpKind::Erosion;
    else if (t == "acc")
      op.kind = OpKind::Accretion;
    else
      throw ParseError("plan file: unknown op kind \"" + t + "\"");
    auto v = o.at("v");
    if (v.size() != 3) throw ParseError("plan file: op voxel must have three coordinates");
    op.v = {v[0].get<int>(), v[1].get<int>(), v[2].get<int>()};
    if (o.contains("o")) {
      auto orient = sm_orientation_from_string(o["o"].get<std::string>());
      if (!orient) throw ParseError("plan file: unknown orientation");
      op.orient = orient;
    }
    if (op.kind == OpKind::Accretion && !op.orient)
      throw ParseError("plan file: accretion without orientation");
    if (op.kind == OpKind::Erosion && op.orient)
      throw ParseError("plan file: erosion with orientation");
    std::string phase = o.at("phase").get<std::string>();
    if (phase == "pre")
      op.phase = OpPhase::Pre;
    else if (phase == "plan")
      op.phase = OpPhase::Plan;
    else
      throw ParseError("plan file: unknown phase \"" + phase + "\"");
    ops.push_back(op);
  }
  return PlanSequence{std::move(initial), std::move(ops), config};
}

ordered_json replay_report_to_json(const ReplayReport& report) {
  ordered_json j;
  j["valid"] = report.valid;
  if (report.first_violation) {
    const Violation& v = *report.first_violation;
    j["first_violation"] = {{"step", v.step},
                            {"reason", to_string(v.reason)},
                            {"v", {v.v.i, v.v.j, v.v.k}}};
  } else {
    j["first_violation"] = nullptr;
  }
  if (!report.violations.empty()) {
    ordered_json arr = ordered_json::array();
    for (const Violation& v : report.violations)
      arr.push_back({{"step", v.step}, {"reason", to_string(v.reason)}, {"v", {v.v.i, v.v.j, v.v.k}}});
    j["violations"] = std::move(arr);
  }
  ordered_json stats;
  stats["total_ops"] = report.stats.total_ops;
  stats["am_ops"] = report.stats.am_ops;
  stats["sm_ops"] = report.stats.sm_ops;
  stats["support_voxels"] = report.stats.support_voxels;
  stats["tool_switches"] = report.stats.tool_switches;
  ordered_json layers = ordered_json::array();
  for (const auto& [k, c] : report.stats.per_layer)
    layers.push_back({{"k", k}, {"am", c.am}, {"sm", c.sm}});
  stats["per_layer"] = std::move(layers);
  j["stats"] = std::move(stats);
  j["final_matches_target"] = report.final_matches_target;
  return j;
}

ordered_json plan_stats_to_json(const PlanStats& stats) {
  ordered_json j;
  j["total_ops"] = stats.total_ops;
  j["erosions"] = stats.erosions;
  j["accretions"] = stats.accretions;
  j["support_voxels"] = {{"pre", stats.pre_support},
                         {"plan", stats.inplan_support},
                         {"total", stats.pre_support + stats.inplan_support}};
  j["tool_switches"] = stats.tool_switches;
  j["operation_density"] = stats.operation_density;
  j["count_identity"] = stats.count_identity;
  ordered_json layers = ordered_json::array();
  for (const auto& [k, n] : stats.ops_per_layer) layers.push_back({{"k", k}, {"ops", n}});
  j["ops_per_layer"] = std::move(layers);
  return j;
}

ordered_json toolpath_to_json(const ToolpathDocument& doc) {
  ordered_json j;
  j["version"] = doc.version;
  j["header"] = {{"voxel_size_mm", doc.voxel_size_mm},
                 {"nozzle_mm", doc.nozzle_mm},
                 {"tool_length_voxels", doc.tool_length_voxels}};
  ordered_json patches = ordered_json::array();
  for (const ToolpathPath& p : doc.paths) {
    ordered_json e;
    e["kind"] = p.kind == ForwardKind::AM ? "AM" : "SM";
    if (p.orient) e["orientation"] = to_string(*p.orient);
    e["tool_change"] = p.tool_change;
    if (!p.markers.empty()) e["markers"] = p.markers;
    ordered_json line = ordered_json::array();
    for (const auto& pt : p.polyline) line.push_back({pt[0], pt[1], pt[2]});
    e["polyline"] = std::move(line);
    patches.push_back(std::move(e));
  }
  j["patches"] = std::move(patches);
  return j;
}

ToolpathDocument toolpath_from_json(const ordered_json& j) {
  ToolpathDocument doc;
  doc.version = j.at("version").get<int>();
  doc.voxel_size_mm = j.at("header").at("voxel_size_mm").get<double>();
  doc.nozzle_mm = j.at("header").at("nozzle_mm").get<double>();
  doc.tool_length_voxels = j.at("header").at("tool_length_voxels").get<int>();
  for (const auto& e : j.at("patches")) {
    ToolpathPath p;
    std::string kind = e.at("kind").get<std::string>();
    if (kind == "AM")
      p.kind = ForwardKind::AM;
    else if (kind == "SM")
      p.kind = ForwardKind::SM;
    else
      throw ParseError("toolpath file: unknown patch kind");
    if (e.contains("orientation")) {
      auto o = sm_orientation_from_string(e["orientation"].get<std::string>());
      if (!o) throw ParseError("toolpath file: unknown orientation");
      p.orient = o;
    }
    p.tool_change = e.at("tool_change").get<bool>();
    if (e.contains("markers")) p.markers = e["markers"].get<std::vector<std::string>>();
    for (const auto& pt : e.at("polyline"))
      p.polyline.push_back({pt[0].get<double>(), pt[1].get<double>(), pt[2].get<double>()});
    doc.paths.push_back(std::move(p));
  }
  return doc;
}

std::string toolpath_to_gcode(const ToolpathDocument& doc) {
  std::ostringstream out;
  out << "; hmplan toolpath, voxel " << doc.voxel_size_mm << "mm, nozzle " << doc.nozzle_mm
      << "mm, tool length " << doc.tool_length_voxels << " voxels\n";
  int path_no = 0;
  for (const ToolpathPath& p : doc.paths) {
    ++path_no;
    if (p.tool_change)
      out << "; tool change -> " << (p.kind == ForwardKind::AM ? "extruder" : "spindle") << "\n";
    out << "; patch " << path_no << " " << (p.kind == ForwardKind::AM ? "AM" : "SM");
    if (p.orient) out << " " << to_string(*p.orient);
    out << "\n";
    for (const std::string& m : p.markers) out << "; " << m << "\n";
    bool first = true;
    for (const auto& pt : p.polyline) {
      out << (first ? "G0" : "G1") << " X" << pt[0] << " Y" << pt[1] << " Z" << pt[2] << "\n";
      first = false;
    }
  }
  return out.str();
}

}  // namespace hmplan
