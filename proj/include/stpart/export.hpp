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

#ifndef STPART_EXPORT_HPP_
#define STPART_EXPORT_HPP_

/**
 * @file
 * @brief Deterministic JSON, CSV, DOT and SVG artifacts.
 *
 * Every writer is a pure function of its inputs; numbers go through fixed
 * formatting so equal inputs give identical bytes.
 */

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stpart/planner.hpp"

namespace stpart {

struct ViewBox
{
  double s_min = 0.0;
  double s_max = 1.0;
  double r_min = 0.0;
  double r_max = 1.0;
};

/// Everything needed to draw one step of the partition.
struct PartitionDump
{
  int step = 0;
  double theta = 0.0;
  ViewBox view;
  RoadModel road;
  std::vector<OrientedBox> obstacles;
  std::vector<CellSlice> cells;
};

/// Window around the obstacles and the ego over the whole horizon, clipped to the road.
ViewBox default_view(const Scenario & scn);

PartitionDump make_partition_dump(const Scenario & scn, int step, std::vector<CellSlice> cells);

std::string partition_dump_json(const PartitionDump & dump);
/// Throws std::runtime_error on malformed input.
PartitionDump parse_partition_dump(std::string_view text);

/// Cells filled by signature and labeled at their witness points.
std::string render_partition_svg(const PartitionDump & dump);

/// One panel per step with the trajectory drawn over it.
std::string render_overlay_svg(const std::vector<PartitionDump> & dumps, const Trajectory & traj);

std::string graph_json(const TransitionGraph & graph);
/// Layers become ranks; vertices are named "p<step>_<signature>".
std::string graph_dot(const TransitionGraph & graph);

/// Validity sets of every unordered pair of signatures seen in the graph.
std::vector<ValiditySet> validity_table(const TransitionGraph & graph);
/// Columns from,to,steps,seconds. Empty sets are written as the empty-set sign.
std::string validity_csv(const std::vector<ValiditySet> & table, double tau);
std::vector<ValiditySet> parse_validity_csv(std::string_view text);

/// Columns p,theta,s,r,s_dot,r_dot,a_lon,a_lat,signature; controls empty on the last row.
std::string trajectory_csv(const Trajectory & traj);
std::string trajectory_json(const Trajectory & traj, double margin, double margin_min);

struct PlanReport
{
  PlannerConfig config;
  std::string scenario;
  PlanResult result;
  std::optional<PlanResult> oracle;
  std::vector<SweepRow> sweep;
};

/// True when both found with costs within 1e-5 relative, or both found nothing.
bool oracle_matches(const PlanResult & plan, const PlanResult & oracle);

/// Report JSON. With `with_timing` false the timing block is omitted, which
/// makes the document reproducible byte for byte.
std::string plan_report_json(const PlanReport & report, bool with_timing = true);

/// Provenance block plus the list of files a command wrote.
std::string run_manifest_json(
  const std::string & command, const PlannerConfig & config, const std::string & scenario,
  const std::vector<std::string> & files);

}  // namespace stpart

#endif  // STPART_EXPORT_HPP_
