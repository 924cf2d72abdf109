// Copyright 2026 The stpart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stpart/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "stpart/scenario_io.hpp"

namespace stpart {

using nlohmann::json;

namespace {

std::string fmt(const char * f, ...)
{
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

json number_or_inf(double v)
{
  if (std::isinf(v)) { return v > 0 ? "inf" : "-inf"; }
  return v;
}

json path_json(const SignaturePath & path)
{
  json out = json::array();
  for (const auto & s : path.steps) { out.push_back(s.str()); }
  return out;
}

json box_json(const OrientedBox & b)
{
  return {
    {"center", {b.center.x(), b.center.y()}},
    {"heading", b.heading},
    {"half_length", b.half_length},
    {"half_width", b.half_width}};
}

OrientedBox box_from_json(const json & j)
{
  OrientedBox b;
  b.center = Vec2(j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>());
  b.heading = j.at("heading").get<double>();
  b.half_length = j.at("half_length").get<double>();
  b.half_width = j.at("half_width").get<double>();
  return b;
}

// Convex clip of a polygon by a half-plane (Sutherland-Hodgman).
std::vector<Vec2> clip(const std::vector<Vec2> & poly, const HalfPlane & h)
{
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 & a = poly[i];
    const Vec2 & b = poly[(i + 1) % n];
    const double da = h.normal.dot(a) - h.offset;
    const double db = h.normal.dot(b) - h.offset;
    if (da <= 0) { out.push_back(a); }
    if ((da < 0 && db > 0) || (da > 0 && db < 0)) { out.push_back(a + (b - a) * (da / (da - db))); }
  }
  return out;
}

std::vector<Vec2> polygon_of(const Polyhedron & p, const ViewBox & v)
{
  std::vector<Vec2> poly = {
    {v.s_min, v.r_min}, {v.s_max, v.r_min}, {v.s_max, v.r_max}, {v.s_min, v.r_max}};
  for (const auto & row : p.rows()) {
    poly = clip(poly, row);
    if (poly.empty()) { break; }
  }
  return poly;
}

const char * color_of(const Signature & sig)
{
  static const char * palette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
                                   "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};
  std::uint32_t h = 2166136261u;
  for (char c : sig.str()) {
    h ^= static_cast<unsigned char>(c);
    h *= 16777619u;
  }
  return palette[h % (sizeof(palette) / sizeof(palette[0]))];
}

struct Canvas
{
  ViewBox view;
  double x0 = 0.0;
  double y0 = 0.0;
  double width = 960.0;
  double height = 200.0;

  double x(double s) const { return x0 + (s - view.s_min) / (view.s_max - view.s_min) * width; }
  double y(double r) const { return y0 + (view.r_max - r) / (view.r_max - view.r_min) * height; }
};

std::string points(const Canvas & c, const std::vector<Vec2> & poly)
{
  std::string out;
  for (const auto & p : poly) { out += fmt("%s%.2f,%.2f", out.empty() ? "" : " ", c.x(p.x()), c.y(p.y())); }
  return out;
}

void draw_panel(std::ostringstream & svg, const PartitionDump & dump, const Canvas & c)
{
  svg << fmt(
    "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"#555555\"/>\n", c.x0, c.y0, c.width, c.height);
  for (const auto & cell : dump.cells) {
    const auto poly = polygon_of(cell.poly, c.view);
    if (poly.size() < 3) { continue; }
    svg << fmt(
      "<polygon points=\"%s\" fill=\"%s\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n", points(c, poly).c_str(),
      color_of(cell.signature));
  }
  for (const auto & box : dump.obstacles) {
    const auto poly = polygon_of(box.polyhedron(), c.view);
    if (poly.size() < 3) { continue; }
    svg << fmt(
      "<polygon points=\"%s\" fill=\"none\" stroke=\"#000000\" stroke-dasharray=\"4,2\"/>\n", points(c, poly).c_str());
  }
  for (const auto & cell : dump.cells) {
    const Vec2 & w = cell.witness;
    if (w.x() < c.view.s_min || w.x() > c.view.s_max || w.y() < c.view.r_min || w.y() > c.view.r_max) { continue; }
    svg << fmt(
      "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" text-anchor=\"middle\">%s</text>\n", c.x(w.x()), c.y(w.y()),
      cell.signature.str().c_str());
  }
  svg << fmt(
    "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\">step %d, t = %.3f s</text>\n", c.x0, c.y0 - 4.0, dump.step,
    dump.theta);
}

}  // namespace

ViewBox default_view(const Scenario & scn)
{
  double lo = scn.ego.initial(0);
  double hi = lo;
  for (const auto & track : scn.obstacles) {
    for (const auto & pose : track.poses) {
      lo = std::min(lo, pose.s);
      hi = std::max(hi, pose.s);
    }
  }
  lo = std::max(scn.road.s_min(), lo - 20.0);
  hi = std::min(scn.road.s_max(), hi + 20.0);
  double rlo = scn.road.r_min_values().front();
  double rhi = scn.road.r_max_values().front();
  for (double v : scn.road.r_min_values()) { rlo = std::min(rlo, v); }
  for (double v : scn.road.r_max_values()) { rhi = std::max(rhi, v); }
  return {lo, hi, rlo, rhi};
}

PartitionDump make_partition_dump(const Scenario & scn, int step, std::vector<CellSlice> cells)
{
  PartitionDump d;
  d.step = step;
  d.theta = scn.theta(step);
  d.view = default_view(scn);
  d.road = scn.road;
  d.obstacles = inflated_boxes(scn, step);
  d.cells = std::move(cells);
  return d;
}

std::string partition_dump_json(const PartitionDump & dump)
{
  json cells = json::array();
  for (const auto & c : dump.cells) {
    json rows = json::array();
    for (const auto & h : c.poly.rows()) { rows.push_back({h.normal.x(), h.normal.y(), h.offset}); }
    cells.push_back(
      {{"signature", c.signature.str()}, {"rows", rows}, {"witness", {c.witness.x(), c.witness.y()}}});
  }
  json obstacles = json::array();
  for (const auto & b : dump.obstacles) { obstacles.push_back(box_json(b)); }
  json doc = {
    {"format_version", kFormatVersion},
    {"step", dump.step},
    {"theta", dump.theta},
    {"view", {{"s_min", dump.view.s_min}, {"s_max", dump.view.s_max}, {"r_min", dump.view.r_min}, {"r_max", dump.view.r_max}}},
    {"road",
     {{"breakpoints", dump.road.breakpoints()}, {"r_min", dump.road.r_min_values()}, {"r_max", dump.road.r_max_values()}}},
    {"obstacles", obstacles},
    {"cells", cells}};
  return doc.dump(2) + "\n";
}

PartitionDump parse_partition_dump(std::string_view text)
{
  try {
    const json doc = json::parse(text.begin(), text.end());
    PartitionDump d;
    d.step = doc.at("step").get<int>();
    d.theta = doc.at("theta").get<double>();
    const json & v = doc.at("view");
    d.view = {v.at("s_min").get<double>(), v.at("s_max").get<double>(), v.at("r_min").get<double>(), v.at("r_max").get<double>()};
    const json & road = doc.at("road");
    d.road = RoadModel(
      road.at("breakpoints").get<std::vector<double>>(), road.at("r_min").get<std::vector<double>>(),
      road.at("r_max").get<std::vector<double>>());
    for (const auto & b : doc.at("obstacles")) { d.obstacles.push_back(box_from_json(b)); }
    for (const auto & c : doc.at("cells")) {
      CellSlice cell;
      cell.signature = Signature::parse(c.at("signature").get<std::string>());
      cell.step = d.step;
      for (const auto & r : c.at("rows")) {
        cell.poly.add_row({Vec2(r.at(0).get<double>(), r.at(1).get<double>()), r.at(2).get<double>()});
      }
      cell.witness = Vec2(c.at("witness").at(0).get<double>(), c.at("witness").at(1).get<double>());
      d.cells.push_back(std::move(cell));
    }
    return d;
  } catch (const json::exception & e) {
    throw std::runtime_error(std::string("malformed partition dump: ") + e.what());
  }
}

std::string render_partition_svg(const PartitionDump & dump)
{
  Canvas c;
  c.view = dump.view;
  c.x0 = 20.0;
  c.y0 = 30.0;
  std::ostringstream svg;
  svg << fmt(
    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n", c.width + 40.0, c.height + 50.0);
  draw_panel(svg, dump, c);
  svg << "</svg>\n";
  return svg.str();
}

std::string render_overlay_svg(const std::vector<PartitionDump> & dumps, const Trajectory & traj)
{
  const double panel = 200.0;
  const double gap = 40.0;
  std::ostringstream svg;
  svg << fmt(
    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"%.0f\">\n",
    static_cast<double>(dumps.size()) * (panel + gap) + 20.0);
  for (std::size_t i = 0; i < dumps.size(); ++i) {
    Canvas c;
    c.view = dumps[i].view;
    c.x0 = 20.0;
    c.y0 = 30.0 + static_cast<double>(i) * (panel + gap);
    c.height = panel;
    draw_panel(svg, dumps[i], c);

    std::vector<Vec2> line;
    for (const auto & x : traj.states) { line.emplace_back(x(0), x(1)); }
    svg << fmt(
      "<polyline points=\"%s\" fill=\"none\" stroke=\"#00bcd4\" stroke-width=\"3\"/>\n", points(c, line).c_str());
    const std::size_t p = static_cast<std::size_t>(dumps[i].step);
    if (p < traj.states.size()) {
      const EgoState & x = traj.states[p];
      svg << fmt(
        "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"5\" fill=\"#d32f2f\"/>\n", c.x(x(0)), c.y(x(1)));
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string graph_json(const TransitionGraph & graph)
{
  json layers = json::array();
  for (int p = 0; p <= graph.steps(); ++p) {
    json layer = json::array();
    for (const auto & c : graph.layer(p)) {
      layer.push_back({{"signature", c.signature.str()}, {"witness", {c.witness.x(), c.witness.y()}}});
    }
    layers.push_back(layer);
  }
  json edges = json::array();
  for (const auto & e : graph.edges()) {
    edges.push_back(
      {{"step", e.step},
       {"from", graph.layer(e.step)[static_cast<std::size_t>(e.from)].signature.str()},
       {"to", graph.layer(e.step + 1)[static_cast<std::size_t>(e.to)].signature.str()}});
  }
  json doc = {
    {"format_version", kFormatVersion}, {"tau", graph.tau()}, {"steps", graph.steps()}, {"layers", layers},
    {"edges", edges}};
  return doc.dump(2) + "\n";
}

std::string graph_dot(const TransitionGraph & graph)
{
  std::ostringstream out;
  out << "digraph transitions {\n  rankdir=LR;\n";
  auto name = [](int p, const Signature & s) { return "\"p" + std::to_string(p) + "_" + s.str() + "\""; };
  for (int p = 0; p <= graph.steps(); ++p) {
    out << "  { rank=same;";
    for (const auto & c : graph.layer(p)) { out << " " << name(p, c.signature) << ";"; }
    out << " }\n";
  }
  for (const auto & e : graph.edges()) {
    out << "  " << name(e.step, graph.layer(e.step)[static_cast<std::size_t>(e.from)].signature) << " -> "
        << name(e.step + 1, graph.layer(e.step + 1)[static_cast<std::size_t>(e.to)].signature) << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::vector<ValiditySet> validity_table(const TransitionGraph & graph)
{
  std::vector<ValiditySet> out;
  const auto sigs = graph.signatures();
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    for (std::size_t j = i + 1; j < sigs.size(); ++j) { out.push_back(validity_set(graph, sigs[i], sigs[j])); }
  }
  return out;
}

namespace {
constexpr const char * kEmptySet = "\xE2\x88\x85";
}

std::string validity_csv(const std::vector<ValiditySet> & table, double tau)
{
  std::ostringstream out;
  out << "from,to,steps,seconds\n";
  for (const auto & v : table) {
    out << v.from.str() << "," << v.to.str() << ",";
    if (v.empty()) {
      out << kEmptySet << "," << kEmptySet << "\n";
      continue;
    }
    std::string steps, secs;
    for (const auto & [a, b] : v.intervals) {
      steps += (steps.empty() ? "" : " ") + fmt("[%d;%d]", a, b);
      secs += (secs.empty() ? "" : " ") + fmt("[%.6g;%.6g)", a * tau, (b + 1) * tau);
    }
    out << steps << "," << secs << "\n";
  }
  return out.str();
}

std::vector<ValiditySet> parse_validity_csv(std::string_view text)
{
  std::vector<ValiditySet> out;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "from,to,steps,seconds") {
    throw std::runtime_error("validity CSV: unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) { continue; }
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) { cols.push_back(col); }
    if (cols.size() != 4) { throw std::runtime_error("validity CSV: expected 4 columns: " + line); }
    ValiditySet v{Signature::parse(cols[0]), Signature::parse(cols[1]), {}};
    if (cols[2] != kEmptySet) {
      std::stringstream ss(cols[2]);
      std::string tok;
      while (ss >> tok) {
        int a = 0, b = 0;
        if (std::sscanf(tok.c_str(), "[%d;%d]", &a, &b) != 2) {
          throw std::runtime_error("validity CSV: bad interval " + tok);
        }
        v.intervals.emplace_back(a, b);
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::string trajectory_csv(const Trajectory & traj)
{
  std::ostringstream out;
  out << "p,theta,s,r,s_dot,r_dot,a_lon,a_lat,signature\n";
  for (std::size_t p = 0; p < traj.states.size(); ++p) {
    const EgoState & x = traj.states[p];
    out << fmt("%zu,%.6f,%.6f,%.6f,%.6f,%.6f,", p, traj.tau * static_cast<double>(p), x(0), x(1), x(2), x(3));
    if (p < traj.controls.size()) {
      out << fmt("%.6f,%.6f,", traj.controls[p](0), traj.controls[p](1));
    } else {
      out << ",,";
    }
    out << (p < traj.path.steps.size() ? traj.path.steps[p].str() : std::string()) << "\n";
  }
  return out.str();
}

std::string trajectory_json(const Trajectory & traj, double margin, double margin_min)
{
  json states = json::array();
  for (const auto & x : traj.states) { states.push_back({x(0), x(1), x(2), x(3)}); }
  json controls = json::array();
  for (const auto & u : traj.controls) { controls.push_back({u(0), u(1)}); }
  json doc = {
    {"format_version", kFormatVersion},
    {"tau", traj.tau},
    {"cost", traj.cost},
    {"margin", number_or_inf(margin)},
    {"margin_min", number_or_inf(margin_min)},
    {"path", path_json(traj.path)},
    {"states", states},
    {"controls", controls}};
  return doc.dump(2) + "\n";
}

bool oracle_matches(const PlanResult & plan, const PlanResult & oracle)
{
  if (plan.found() != oracle.found()) { return false; }
  if (!plan.found()) { return true; }
  return std::abs(plan.cost - oracle.cost) <= 1e-5 * std::max(1.0, std::abs(oracle.cost));
}

namespace {

json stats_json(const SearchStats & s)
{
  return {
    {"generated", s.generated},
    {"expanded", s.expanded},
    {"completed", s.completed},
    {"pruned_infeasible", s.pruned_infeasible},
    {"pruned_bound", s.pruned_bound},
    {"pruned_margin", s.pruned_margin},
    {"pruned_corridor_corner", s.pruned_corridor},
    {"qp_solves", s.qp_solves},
    {"qp_failures", s.qp_failures},
    {"cache_hits", s.cache_hits}};
}

json provenance_json(const PlannerConfig & c, const std::string & scenario);

json result_json(const PlanResult & r)
{
  json j = {
    {"status", r.found() ? "found" : "no_feasible_plan"},
    {"path", path_json(r.path)},
    {"cost", r.found() ? json(r.cost) : json(nullptr)},
    {"margin", r.found() ? number_or_inf(r.margin) : json(nullptr)},
    {"stats", stats_json(r.stats)},
    {"warnings", r.warnings}};
  return j;
}

}  // namespace

std::string plan_report_json(const PlanReport & report, bool with_timing)
{
  json doc = result_json(report.result);
  doc["format_version"] = kFormatVersion;
  if (with_timing) {
    doc["timing"] = {
      {"partitioning_ms", report.result.timing.partitioning},
      {"graph_exploration_ms", report.result.timing.graph_exploration},
      {"optimal_path_computation_ms", report.result.timing.optimal_path}};
  }
  if (report.oracle) {
    json o = result_json(*report.oracle);
    o["match"] = oracle_matches(report.result, *report.oracle);
    doc["oracle"] = o;
  }
  if (!report.sweep.empty()) {
    json rows = json::array();
    for (const auto & row : report.sweep) {
      const bool found = row.status == PlanStatus::kFound;
      rows.push_back(
        {{"margin_min", number_or_inf(row.margin_min)},
         {"status", found ? "found" : "no_feasible_plan"},
         {"path", path_json(row.path)},
         {"cost", found ? json(row.cost) : json(nullptr)},
         {"margin", found ? number_or_inf(row.path_margin) : json(nullptr)}});
    }
    doc["sweep"] = rows;
  }
  doc["provenance"] = provenance_json(report.config, report.scenario);
  return doc.dump(2) + "\n";
}

std::string run_manifest_json(
  const std::string & command, const PlannerConfig & config, const std::string & scenario,
  const std::vector<std::string> & files)
{
  json doc = {{"command", command}, {"files", files}, {"provenance", provenance_json(config, scenario)}};
  return doc.dump(2) + "\n";
}

namespace {

json provenance_json(const PlannerConfig & c, const std::string & scenario)
{
  return {
    {"format_version", kFormatVersion},
    {"scenario", scenario},
    {"seed", c.tol.seed},
    {"tolerances", {{"eps_lp", c.tol.eps_lp}, {"eps_strict", c.tol.eps_strict}, {"qp_tol", c.tol.qp_tol}}},
    {"config",
     {{"margin_min", number_or_inf(c.margin_min)},
      {"qp_max_iter", c.qp.max_iter},
      {"qp_target_tol", c.qp.tol},
      {"qp_accept_tol", c.qp.accept_tol},
      {"validation_samples", c.validation.samples},
      {"validation_tol", c.validation.tol},
      {"oracle_path_cap", c.oracle_path_cap}}}};
}

}  // namespace

}  // namespace stpart
