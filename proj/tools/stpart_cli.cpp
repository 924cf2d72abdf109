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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stpart/export.hpp"
#include "stpart/planner.hpp"
#include "stpart/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace stpart;

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kParse = 2, kInfeasibleScenario = 3, kNoPlan = 4 };

struct Options
{
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir = ".";
  double eps_lp = kEpsLp;
  double eps_strict = kEpsStrict;
  double qp_tol = 1e-6;
  bool no_svg = false;
  bool no_graph = false;
  bool no_csv = false;
  bool no_timing = false;

  std::string scenario;
  std::string step = "all";
  std::optional<double> margin;
  bool oracle = false;
  std::vector<double> sweep;
};

PlannerConfig make_config(const Options & o, const Scenario & scn)
{
  PlannerConfig c;
  c.tol.seed = o.seed;
  c.tol.eps_lp = o.eps_lp;
  c.tol.eps_strict = o.eps_strict;
  c.tol.qp_tol = o.qp_tol;
  c.qp.accept_tol = o.qp_tol;
  c.margin_min = o.margin.value_or(scn.margin_min);
  return c;
}

class Writer
{
public:
  explicit Writer(const std::string & dir) : dir_(dir) { fs::create_directories(dir_); }

  void write(const std::string & name, const std::string & content)
  {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) { throw std::runtime_error("cannot write " + (dir_ / name).string()); }
    out << content;
    files_.push_back(name);
  }

  const std::vector<std::string> & files() const { return files_; }

private:
  fs::path dir_;
  std::vector<std::string> files_;
};

Scenario load_checked(const Options & o)
{
  Scenario scn = load_scenario(o.scenario);
  scn.validate();
  for (const auto & w : rotation_warnings(scn)) { std::cerr << "warning: " << w << "\n"; }
  return scn;
}

std::string step_name(const char * prefix, int p, const char * ext)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%03d.%s", prefix, p, ext);
  return buf;
}

int cmd_partition(const Options & o)
{
  const Scenario scn = load_checked(o);
  const PlannerConfig cfg = make_config(o, scn);
  std::vector<int> steps;
  if (o.step == "all") {
    for (int p = 0; p <= scn.steps(); ++p) { steps.push_back(p); }
  } else {
    int p = -1;
    try {
      p = std::stoi(o.step);
    } catch (const std::exception &) {
    }
    if (p < 0 || p > scn.steps()) {
      std::cerr << "error: --step must be 'all' or an integer in [0, " << scn.steps() << "]\n";
      return kParse;
    }
    steps.push_back(p);
  }

  Writer out(o.out_dir);
  for (int p : steps) {
    const PartitionDump dump = make_partition_dump(scn, p, partition_step(scn, p, cfg.tol));
    out.write(step_name("cells", p, "json"), partition_dump_json(dump));
    if (!o.no_svg) { out.write(step_name("cells", p, "svg"), render_partition_svg(dump)); }
    std::cout << "step " << p << ": " << dump.cells.size() << " cells\n";
  }
  out.write("run.json", run_manifest_json("partition", cfg, o.scenario, out.files()));
  return kOk;
}

int cmd_graph(const Options & o)
{
  const Scenario scn = load_checked(o);
  const PlannerConfig cfg = make_config(o, scn);
  const TransitionGraph graph = build_graph(scn, cfg.tol);

  Writer out(o.out_dir);
  if (!o.no_graph) {
    out.write("graph.json", graph_json(graph));
    out.write("graph.dot", graph_dot(graph));
  }
  const auto table = validity_table(graph);
  out.write("validity.csv", validity_csv(table, scn.tau));
  out.write("run.json", run_manifest_json("graph", cfg, o.scenario, out.files()));
  std::cout << graph.vertex_count() << " vertices, " << graph.edges().size() << " edges over " << graph.steps() + 1
            << " layers\n";
  return kOk;
}

int cmd_plan(const Options & o)
{
  const Scenario scn = load_checked(o);
  const PlannerConfig cfg = make_config(o, scn);

  PlanReport report;
  report.config = cfg;
  report.scenario = o.scenario;

  // Same phases as plan(scn, config), kept here so the layers can be reused for artifacts.
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<CellSlice>> layers;
  for (int p = 0; p <= scn.steps(); ++p) { layers.push_back(partition_step(scn, p, cfg.tol)); }
  const double partitioning = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  t0 = std::chrono::steady_clock::now();
  const TransitionGraph graph(layers, scn.tau, cfg.tol);
  const double linking = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  if (initial_signatures(scn, graph, cfg.tol).empty()) {
    std::cerr << "error: initial position is not inside any free cell\n";
    return kInfeasibleScenario;
  }

  report.result = plan(scn, graph, cfg);
  report.result.timing.partitioning = partitioning;
  report.result.timing.graph_exploration += linking;
  if (o.oracle) { report.oracle = enumerate_oracle(scn, graph, cfg); }
  if (!o.sweep.empty()) { report.sweep = margin_sweep(scn, graph, o.sweep, cfg); }

  Writer out(o.out_dir);
  const PlanResult & r = report.result;
  if (r.found()) {
    if (!o.no_csv) { out.write("trajectory.csv", trajectory_csv(*r.trajectory)); }
    out.write("trajectory.json", trajectory_json(*r.trajectory, r.margin, cfg.margin_min));
    if (!o.no_svg) {
      std::vector<PartitionDump> dumps;
      for (int p = 0; p <= scn.steps(); ++p) {
        dumps.push_back(make_partition_dump(scn, p, layers[static_cast<std::size_t>(p)]));
      }
      out.write("overlay.svg", render_overlay_svg(dumps, *r.trajectory));
    }
  }
  out.write("plan_report.json", plan_report_json(report, !o.no_timing));

  for (const auto & w : r.warnings) { std::cerr << "warning: " << w << "\n"; }
  if (report.oracle) {
    std::cout << "oracle match: " << (oracle_matches(r, *report.oracle) ? "true" : "false") << "\n";
  }
  for (const auto & row : report.sweep) {
    std::cout << "sweep margin " << row.margin_min << ": "
              << (row.status == PlanStatus::kFound ? std::to_string(row.cost) : std::string("no feasible plan"))
              << "\n";
  }
  if (!r.found()) {
    std::cerr << "no feasible plan\n";
    return kNoPlan;
  }
  std::string path;
  for (const auto & s : r.path.steps) { path += (path.empty() ? "" : " ") + s.letters(); }
  std::cout << "cost " << r.cost << ", margin " << r.margin << "\npath " << path << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Semantic space-time partitioning and maneuver planning"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--seed", o.seed, "Seed of the LP constraint shuffle");
  app.add_option("--out-dir", o.out_dir, "Directory for emitted files");
  app.add_option("--eps-lp", o.eps_lp, "Feasibility relaxation (m)")->check(CLI::PositiveNumber);
  app.add_option("--eps-strict", o.eps_strict, "Boundary shift between sibling cells (m)")->check(CLI::PositiveNumber);
  app.add_option("--qp-tol", o.qp_tol, "QP residual acceptance")->check(CLI::PositiveNumber);
  app.add_flag("--no-svg", o.no_svg, "Skip SVG output");
  app.add_flag("--no-graph", o.no_graph, "Skip graph JSON/DOT output");
  app.add_flag("--no-csv", o.no_csv, "Skip trajectory CSV output");
  app.add_flag("--no-timing", o.no_timing, "Omit wall-clock timings so reports are reproducible");

  auto * part = app.add_subcommand("partition", "Partition free space per step");
  part->add_option("scenario", o.scenario, "Scenario file")->required();
  part->add_option("--step", o.step, "Step index or 'all'");

  auto * graph = app.add_subcommand("graph", "Build the transition graph and validity sets");
  graph->add_option("scenario", o.scenario, "Scenario file")->required();

  auto * planc = app.add_subcommand("plan", "Search for the optimal maneuver");
  planc->add_option("scenario", o.scenario, "Scenario file")->required();
  planc->add_option("--margin", o.margin, "Minimum time margin (s); defaults to the scenario value");
  planc->add_flag("--oracle", o.oracle, "Cross-check against exhaustive enumeration");
  planc->add_option("--sweep", o.sweep, "Comma-separated margins to sweep")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*part) { return cmd_partition(o); }
    if (*graph) { return cmd_graph(o); }
    return cmd_plan(o);
  } catch (const ParseError & e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ScenarioError & e) {
    std::cerr << "infeasible scenario: " << e.what() << "\n";
    return kInfeasibleScenario;
  } catch (const std::exception & e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
