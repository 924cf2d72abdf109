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

#include <doctest.h>

#include <random>

#include "../common/scenarios.hpp"
#include "stpart/planner.hpp"

using namespace stpart;

namespace {

bool is_prefix(const std::vector<Signature> & prefix, const SignaturePath & path)
{
  if (prefix.size() > path.steps.size()) { return false; }
  return std::equal(prefix.begin(), prefix.end(), path.steps.begin());
}

bool visits(const SignaturePath & path, const char * letters)
{
  for (const auto & s : path.steps) {
    if (s.letters() == letters) { return true; }
  }
  return false;
}

testing::RandomScenarioOptions small_options()
{
  testing::RandomScenarioOptions opt;
  opt.max_obstacles = 2;
  opt.max_steps = 6;
  opt.max_trapezes = 2;
  return opt;
}

}  // namespace

TEST_CASE("best-first search matches exhaustive enumeration")
{
  std::mt19937_64 rng(41);
  int found = 0;
  for (int i = 0; i < 8; ++i) {
    auto scn = testing::random_scenario(rng, small_options());
    const auto g = build_graph(scn);
    PlannerConfig cfg;
    cfg.margin_min = i % 2 == 0 ? 0.0 : 0.5;
    const auto a = plan(scn, g, cfg);
    const auto b = enumerate_oracle(scn, g, cfg);
    CHECK(a.found() == b.found());
    if (a.found() && b.found()) {
      ++found;
      CHECK(a.cost == doctest::Approx(b.cost).epsilon(1e-5));
      CHECK(a.margin >= cfg.margin_min - 1e-9);
    }
  }
  CHECK(found > 0);
}

TEST_CASE("prefix bounds never exceed the optimum below them")
{
  const auto scn = testing::golden();
  const auto g = build_graph(scn);
  PlannerConfig cfg;
  cfg.margin_min = 0.0;
  std::vector<BoundRecord> records;
  const auto r = plan(scn, g, cfg, &records);
  REQUIRE(r.found());
  REQUIRE_FALSE(records.empty());
  int on_path = 0;
  for (const auto & rec : records) {
    if (is_prefix(rec.prefix, r.path)) {
      ++on_path;
      CHECK(rec.bound <= r.cost * (1.0 + 1e-9) + 1e-9);
    }
  }
  CHECK(on_path > 0);
  // Bounds only grow as prefixes get longer.
  for (const auto & a : records) {
    for (const auto & b : records) {
      if (a.prefix.size() < b.prefix.size() && std::equal(a.prefix.begin(), a.prefix.end(), b.prefix.begin())) {
        CHECK(a.bound <= b.bound + 1e-6 * (1.0 + std::abs(b.bound)));
      }
    }
  }
}

TEST_CASE("returned plans respect the margin and are reproducible")
{
  const auto scn = testing::golden();
  const auto g = build_graph(scn);
  for (double m : {0.0, 0.5, 1.0, 2.0}) {
    PlannerConfig cfg;
    cfg.margin_min = m;
    const auto a = plan(scn, g, cfg);
    const auto b = plan(scn, g, cfg);
    REQUIRE(a.found());
    CHECK(a.margin >= m);
    CHECK(time_margin(g, a.path) == a.margin);
    CHECK(a.path == b.path);
    CHECK(a.cost == b.cost);
    CHECK(validate_trajectory(scn, g, *a.trajectory).passed());
  }
}

TEST_CASE("golden scenario switches maneuver with the margin requirement")
{
  const auto scn = testing::golden();
  const auto g = build_graph(scn);
  const std::vector<double> margins{0.0, 1.0};
  const auto rows = margin_sweep(scn, g, margins, PlannerConfig{});
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[0].status == PlanStatus::kFound);
  REQUIRE(rows[1].status == PlanStatus::kFound);
  CHECK(visits(rows[0].path, "lf"));
  CHECK(rows[0].path_margin < 1.0);
  CHECK_FALSE(visits(rows[1].path, "lf"));
  CHECK(rows[1].cost > rows[0].cost);
}

TEST_CASE("margin sweep cost is nondecreasing")
{
  std::mt19937_64 rng(43);
  for (int i = 0; i < 4; ++i) {
    const auto scn = testing::random_scenario(rng, small_options());
    const auto g = build_graph(scn);
    const std::vector<double> margins{0.0, 0.5, 1.0, 1.5, 3.0};
    const auto rows = margin_sweep(scn, g, margins, PlannerConfig{});
    for (std::size_t k = 1; k < rows.size(); ++k) {
      if (rows[k].status == PlanStatus::kFound) {
        REQUIRE(rows[k - 1].status == PlanStatus::kFound);
        CHECK(rows[k].cost >= rows[k - 1].cost * (1.0 - 1e-9) - 1e-9);
      }
    }
  }
}

TEST_CASE("unreachable margin yields no plan")
{
  const auto scn = testing::golden();
  const auto g = build_graph(scn);
  PlannerConfig cfg;
  cfg.margin_min = 1e6;
  // Every path that changes cell has a finite margin; staying in br is infeasible.
  const auto r = plan(scn, g, cfg);
  if (r.found()) {
    CHECK(std::isinf(r.margin));
  } else {
    CHECK(r.status == PlanStatus::kNoFeasiblePlan);
    CHECK_FALSE(r.trajectory);
  }
}

TEST_CASE("oracle refuses graphs with too many paths")
{
  const auto scn = testing::golden();
  const auto g = build_graph(scn);
  PlannerConfig cfg;
  cfg.oracle_path_cap = 3;
  CHECK(count_paths(scn, g) > 3);
  CHECK_THROWS_AS(enumerate_oracle(scn, g, cfg), OracleCapExceeded);
}

TEST_CASE("initial signatures contain the start position")
{
  const auto scn = testing::golden();
  const auto g = build_graph(scn);
  const auto init = initial_signatures(scn, g);
  REQUIRE(init.size() == 1);
  CHECK(init.front().letters() == "br");
}

TEST_CASE("end-to-end planning reports phase timings")
{
  const auto scn = testing::golden();
  const auto r = plan(scn, PlannerConfig{});
  REQUIRE(r.found());
  CHECK(r.timing.partitioning > 0.0);
  CHECK(r.timing.graph_exploration > 0.0);
  CHECK(r.timing.optimal_path > 0.0);
  CHECK(r.stats.qp_solves > 0);
  CHECK(r.stats.expanded <= r.stats.generated);
}
