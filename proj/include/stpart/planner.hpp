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

#ifndef STPART_PLANNER_HPP_
#define STPART_PLANNER_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stpart/optimizer.hpp"
#include "stpart/spacetime_graph.hpp"

namespace stpart {

struct PlannerConfig
{
  double margin_min = 1.0;
  Tolerances tol;
  QpSettings qp;
  ValidationOptions validation;
  /// enumerate_oracle refuses graphs with more signature paths than this.
  std::size_t oracle_path_cap = 2'000'000;
};

/// Oracle refused to run because the path count exceeds the cap.
class OracleCapExceeded : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct SearchStats
{
  std::size_t generated = 0;
  std::size_t expanded = 0;
  std::size_t pruned_infeasible = 0;
  std::size_t pruned_bound = 0;
  std::size_t pruned_margin = 0;
  std::size_t pruned_corridor = 0;
  std::size_t qp_solves = 0;
  std::size_t qp_failures = 0;
  std::size_t cache_hits = 0;
  std::size_t completed = 0;
};

/// Wall-clock per phase in milliseconds.
struct PhaseTiming
{
  double partitioning = 0.0;
  double graph_exploration = 0.0;
  double optimal_path = 0.0;
};

enum class PlanStatus { kFound, kNoFeasiblePlan };

struct PlanResult
{
  PlanStatus status = PlanStatus::kNoFeasiblePlan;
  std::optional<Trajectory> trajectory;
  SignaturePath path;
  double cost = std::numeric_limits<double>::infinity();
  double margin = 0.0;
  SearchStats stats;
  PhaseTiming timing;
  std::vector<std::string> warnings;

  bool found() const { return status == PlanStatus::kFound; }
};

/// Bound of an expanded prefix next to the final cost of one of its completions.
struct BoundRecord
{
  std::vector<Signature> prefix;
  double bound = 0.0;
};

/**
 * @brief Best-first branch and bound over signature paths.
 *
 * Nodes are ordered by their prefix bound, then lexicographically by prefix.
 * When `expanded` is given, every expanded node is appended to it.
 */
PlanResult plan(
  const Scenario & scn, const TransitionGraph & graph, const PlannerConfig & config,
  std::vector<BoundRecord> * expanded = nullptr);

/// Partitions, builds the graph and plans; fills every timing field.
PlanResult plan(const Scenario & scn, const PlannerConfig & config);

/// Number of full signature paths starting in a cell that contains x_0.
double count_paths(const Scenario & scn, const TransitionGraph & graph, const Tolerances & tol = {});

/**
 * @brief Solves the full QP of every margin-feasible path and keeps the best.
 *
 * Infeasible prefixes are cut (their completions are infeasible as well).
 * Throws OracleCapExceeded when count_paths exceeds the configured cap.
 */
PlanResult enumerate_oracle(const Scenario & scn, const TransitionGraph & graph, const PlannerConfig & config);

struct SweepRow
{
  double margin_min = 0.0;
  PlanStatus status = PlanStatus::kNoFeasiblePlan;
  SignaturePath path;
  double cost = std::numeric_limits<double>::infinity();
  double path_margin = 0.0;
};

std::vector<SweepRow> margin_sweep(
  const Scenario & scn, const TransitionGraph & graph, std::span<const double> margins, PlannerConfig config);

/// Cells of layer 0 whose closure holds the initial position.
std::vector<Signature> initial_signatures(const Scenario & scn, const TransitionGraph & graph, const Tolerances & tol = {});

}  // namespace stpart

#endif  // STPART_PLANNER_HPP_
