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

#include "stpart/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <utility>

namespace stpart {

namespace {

using Clock = std::chrono::steady_clock;
using Prefix = std::vector<Signature>;

double elapsed_ms(Clock::time_point since)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

bool margin_ok(double margin, double margin_min) { return margin + 1e-9 >= margin_min; }

double tie_eps(double incumbent) { return 1e-9 * (1.0 + std::abs(incumbent)); }

// Partial-QP evaluation shared by both searches.
class PrefixSolver
{
public:
  PrefixSolver(const Scenario & scn, const TransitionGraph & graph, const PlannerConfig & config, PlanResult & result)
  : scn_(scn), graph_(graph), config_(config), result_(result)
  {
  }

  /// Optimal outcome, or nullopt when the prefix is infeasible or the solver failed.
  const SolveOutcome * evaluate(const Prefix & prefix)
  {
    auto it = cache_.find(prefix);
    if (it != cache_.end()) {
      ++result_.stats.cache_hits;
    } else {
      ++result_.stats.qp_solves;
      SolveOutcome out = solve(assemble_prefix(scn_, graph_, prefix), config_.qp);
      if (!out.optimal() && out.status != QpStatus::kInfeasible) {
        ++result_.stats.qp_failures;
        std::string names;
        for (const auto & s : prefix) { names += (names.empty() ? "" : " ") + s.str(); }
        result_.warnings.push_back(
          "QP " + std::string(to_string(out.status)) + " on prefix [" + names + "]; treated as infeasible");
      }
      it = cache_.emplace(prefix, std::move(out)).first;
    }
    return it->second.optimal() ? &it->second : nullptr;
  }

private:
  const Scenario & scn_;
  const TransitionGraph & graph_;
  const PlannerConfig & config_;
  PlanResult & result_;
  std::map<Prefix, SolveOutcome> cache_;
};

bool better(double cost, const Prefix & path, const PlanResult & best)
{
  if (!best.trajectory) { return true; }
  const double eps = tie_eps(best.cost);
  if (cost < best.cost - eps) { return true; }
  return cost <= best.cost + eps && path < best.path.steps;
}

void accept(PlanResult & result, const TransitionGraph & graph, const Trajectory & traj)
{
  result.status = PlanStatus::kFound;
  result.trajectory = traj;
  result.path = traj.path;
  result.cost = traj.cost;
  result.margin = time_margin(graph, traj.path);
}

}  // namespace

std::vector<Signature> initial_signatures(const Scenario & scn, const TransitionGraph & graph, const Tolerances & tol)
{
  std::vector<Signature> out;
  const Vec2 z0 = scn.ego.initial.head<2>();
  for (const auto & cell : graph.layer(0)) {
    if (cell.poly.contains(z0, tol.eps_lp + tol.eps_strict)) { out.push_back(cell.signature); }
  }
  return out;
}

PlanResult plan(
  const Scenario & scn, const TransitionGraph & graph, const PlannerConfig & config,
  std::vector<BoundRecord> * expanded)
{
  const auto start = Clock::now();
  PlanResult result;
  PrefixSolver solver(scn, graph, config, result);
  const int P = graph.steps();

  // Ordered by (bound, prefix): pops the lowest bound, ties go to the smaller prefix.
  std::set<std::pair<double, Prefix>> open;

  auto consider = [&](Prefix prefix) {
    ++result.stats.generated;
    const SolveOutcome * out = solver.evaluate(prefix);
    if (!out) {
      ++result.stats.pruned_infeasible;
      return;
    }
    const Trajectory & traj = *out->trajectory;
    if (result.trajectory && traj.cost >= result.cost - tie_eps(result.cost)) {
      ++result.stats.pruned_bound;
      return;
    }
    if (static_cast<int>(prefix.size()) == P + 1) {
      ++result.stats.completed;
      if (!validate_trajectory(scn, graph, traj, config.validation).passed()) {
        ++result.stats.pruned_corridor;
        return;
      }
      if (better(traj.cost, prefix, result)) { accept(result, graph, traj); }
      return;
    }
    open.emplace(traj.cost, std::move(prefix));
  };

  for (const auto & sig : initial_signatures(scn, graph, config.tol)) { consider({sig}); }

  while (!open.empty()) {
    auto node = open.extract(open.begin()).value();
    const double bound = node.first;
    Prefix & prefix = node.second;
    if (result.trajectory && bound >= result.cost - tie_eps(result.cost)) {
      ++result.stats.pruned_bound;
      continue;
    }
    ++result.stats.expanded;
    if (expanded) { expanded->push_back({prefix, bound}); }

    const int p = static_cast<int>(prefix.size()) - 1;
    const auto idx = graph.find(p, prefix.back());
    for (int next : graph.successors(p, *idx)) {
      const Signature & sig = graph.layer(p + 1)[static_cast<std::size_t>(next)].signature;
      if (sig != prefix.back() && !margin_ok(transition_margin(graph, p, prefix.back(), sig), config.margin_min)) {
        ++result.stats.generated;
        ++result.stats.pruned_margin;
        continue;
      }
      Prefix child = prefix;
      child.push_back(sig);
      consider(std::move(child));
    }
  }

  result.timing.graph_exploration = elapsed_ms(start);

  if (result.trajectory) {
    // Final solve of the selected path on its own, timed separately.
    const auto t0 = Clock::now();
    const SolveOutcome final_out = solve(assemble(scn, graph, result.path), config.qp);
    result.timing.optimal_path = elapsed_ms(t0);
    if (final_out.optimal()) { accept(result, graph, *final_out.trajectory); }
  }
  return result;
}

PlanResult plan(const Scenario & scn, const PlannerConfig & config)
{
  auto t0 = Clock::now();
  std::vector<std::vector<CellSlice>> layers;
  for (int p = 0; p <= scn.steps(); ++p) { layers.push_back(partition_step(scn, p, config.tol)); }
  const double partitioning = elapsed_ms(t0);

  t0 = Clock::now();
  const TransitionGraph graph(std::move(layers), scn.tau, config.tol);
  const double linking = elapsed_ms(t0);

  PlanResult result = plan(scn, graph, config);
  result.timing.partitioning = partitioning;
  result.timing.graph_exploration += linking;
  return result;
}

double count_paths(const Scenario & scn, const TransitionGraph & graph, const Tolerances & tol)
{
  const int P = graph.steps();
  std::vector<double> ways(graph.layer(P).size(), 1.0);
  for (int p = P - 1; p >= 0; --p) {
    std::vector<double> here(graph.layer(p).size(), 0.0);
    for (std::size_t a = 0; a < here.size(); ++a) {
      for (int b : graph.successors(p, static_cast<int>(a))) { here[a] += ways[static_cast<std::size_t>(b)]; }
    }
    ways = std::move(here);
  }
  double total = 0.0;
  for (const auto & sig : initial_signatures(scn, graph, tol)) { total += ways[static_cast<std::size_t>(*graph.find(0, sig))]; }
  return total;
}

PlanResult enumerate_oracle(const Scenario & scn, const TransitionGraph & graph, const PlannerConfig & config)
{
  const double total = count_paths(scn, graph, config.tol);
  if (total > static_cast<double>(config.oracle_path_cap)) {
    throw OracleCapExceeded(
      "graph has " + std::to_string(static_cast<long long>(total)) + " signature paths, cap is " +
      std::to_string(config.oracle_path_cap));
  }

  const auto start = Clock::now();
  PlanResult result;
  PrefixSolver solver(scn, graph, config, result);
  const int P = graph.steps();

  std::function<void(Prefix &)> dfs = [&](Prefix & prefix) {
    ++result.stats.generated;
    const SolveOutcome * out = solver.evaluate(prefix);
    if (!out) {
      ++result.stats.pruned_infeasible;
      return;
    }
    const int p = static_cast<int>(prefix.size()) - 1;
    if (p == P) {
      ++result.stats.completed;
      const Trajectory & traj = *out->trajectory;
      if (!validate_trajectory(scn, graph, traj, config.validation).passed()) {
        ++result.stats.pruned_corridor;
        return;
      }
      if (better(traj.cost, prefix, result)) { accept(result, graph, traj); }
      return;
    }
    ++result.stats.expanded;
    const auto idx = graph.find(p, prefix.back());
    for (int next : graph.successors(p, *idx)) {
      const Signature & sig = graph.layer(p + 1)[static_cast<std::size_t>(next)].signature;
      if (sig != prefix.back() && !margin_ok(transition_margin(graph, p, prefix.back(), sig), config.margin_min)) {
        ++result.stats.pruned_margin;
        continue;
      }
      prefix.push_back(sig);
      dfs(prefix);
      prefix.pop_back();
    }
  };

  for (const auto & sig : initial_signatures(scn, graph, config.tol)) {
    Prefix prefix{sig};
    dfs(prefix);
  }
  result.timing.graph_exploration = elapsed_ms(start);
  return result;
}

std::vector<SweepRow> margin_sweep(
  const Scenario & scn, const TransitionGraph & graph, std::span<const double> margins, PlannerConfig config)
{
  std::vector<SweepRow> rows;
  for (double m : margins) {
    config.margin_min = m;
    const PlanResult r = plan(scn, graph, config);
    rows.push_back({m, r.status, r.path, r.cost, r.found() ? r.margin : 0.0});
  }
  return rows;
}

}  // namespace stpart
