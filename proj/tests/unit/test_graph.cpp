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

#include <cmath>
#include <functional>
#include <set>

#include "../common/oracles.hpp"
#include "../common/scenarios.hpp"
#include "stpart/planner.hpp"
#include "stpart/spacetime_graph.hpp"

using namespace stpart;

namespace {

// Discrete margin straight from its definition: the longest run of layers,
// starting at the transition step, over which the pair stays adjacent.
double margin_by_definition(const TransitionGraph & g, int i, const Signature & a, const Signature & b)
{
  double best = 0.0;
  for (int p = i; p <= g.steps(); ++p) {
    bool all = true;
    for (int q = i; q <= p; ++q) { all = all && g.adjacent_at(q, a, b); }
    if (!all) { break; }
    if (p == g.steps()) { return kInfiniteMargin; }
    best = std::max(best, g.tau() * (p - i + 1));
  }
  return best;
}

}  // namespace

TEST_CASE("adjacency is symmetric and matches a brute force closure test")
{
  std::mt19937_64 rng(8);
  const Tolerances tol;
  for (int i = 0; i < 12; ++i) {
    const auto scn = testing::random_scenario(rng);
    const auto cells = partition_step(scn, 0);
    for (const auto & a : cells) {
      for (const auto & b : cells) {
        const bool ab = adjacency(a, b);
        CHECK(ab == adjacency(b, a));
        if (a.signature == b.signature) {
          CHECK(ab);
          continue;
        }
        const double v = testing::vertex_enumeration_violation(intersect(a.poly, b.poly), tol.eps_lp + tol.eps_strict);
        CHECK(ab == (v <= 1e-9));
      }
    }
  }
}

TEST_CASE("edges connect cells adjacent at the earlier layer")
{
  std::mt19937_64 rng(12);
  for (int i = 0; i < 6; ++i) {
    const auto scn = testing::random_scenario(rng);
    const auto g = build_graph(scn);
    CHECK(g.steps() == scn.steps());
    for (const auto & e : g.edges()) {
      const auto & from = g.layer(e.step)[static_cast<std::size_t>(e.from)];
      const auto & to = g.layer(e.step + 1)[static_cast<std::size_t>(e.to)];
      CHECK(g.adjacent_at(e.step, from.signature, to.signature));
    }
    std::size_t expected = 0;
    for (int p = 0; p < g.steps(); ++p) {
      for (const auto & a : g.layer(p)) {
        for (const auto & b : g.layer(p + 1)) { expected += g.adjacent_at(p, a.signature, b.signature) ? 1 : 0; }
      }
    }
    CHECK(g.edges().size() == expected);
  }
}

TEST_CASE("validity sets reproduce per-layer adjacency")
{
  std::mt19937_64 rng(13);
  for (int i = 0; i < 6; ++i) {
    const auto scn = testing::random_scenario(rng);
    const auto g = build_graph(scn);
    const auto sigs = g.signatures();
    for (const auto & a : sigs) {
      for (const auto & b : sigs) {
        const auto v = validity_set(g, a, b);
        for (int p = 0; p <= g.steps(); ++p) {
          bool inside = false;
          for (auto [lo, hi] : v.intervals) { inside = inside || (lo <= p && p <= hi); }
          CHECK(inside == g.adjacent_at(p, a, b));
        }
        for (std::size_t k = 1; k < v.intervals.size(); ++k) {
          CHECK(v.intervals[k].first > v.intervals[k - 1].second + 1);
        }
      }
    }
  }
}

TEST_CASE("transition margins agree with the definition")
{
  std::mt19937_64 rng(14);
  for (int i = 0; i < 6; ++i) {
    const auto scn = testing::random_scenario(rng);
    const auto g = build_graph(scn);
    const auto sigs = g.signatures();
    for (const auto & a : sigs) {
      for (const auto & b : sigs) {
        if (a == b) { continue; }
        for (int p = 0; p <= g.steps(); ++p) {
          const double m = transition_margin(g, p, a, b);
          const double ref = margin_by_definition(g, p, a, b);
          CHECK(((std::isinf(m) && std::isinf(ref)) || m == doctest::Approx(ref)));
          // Within one validity interval, later transitions keep less margin.
          if (p > 0 && std::isfinite(m) && g.adjacent_at(p - 1, a, b)) { CHECK(m <= transition_margin(g, p - 1, a, b) + 1e-12); }
        }
      }
    }
  }
}

TEST_CASE("path margin is the minimum over its transitions")
{
  std::mt19937_64 rng(15);
  for (int i = 0; i < 6; ++i) {
    const auto scn = testing::random_scenario(rng);
    const auto g = build_graph(scn);
    // Walk a deterministic random path through the graph.
    const auto init = initial_signatures(scn, g);
    if (init.empty()) { continue; }
    SignaturePath path{{init.front()}};
    int idx = *g.find(0, init.front());
    bool ok = true;
    for (int p = 0; p < g.steps() && ok; ++p) {
      const auto & succ = g.successors(p, idx);
      if (succ.empty()) {
        ok = false;
        break;
      }
      idx = succ[rng() % succ.size()];
      path.steps.push_back(g.layer(p + 1)[static_cast<std::size_t>(idx)].signature);
    }
    if (!ok) { continue; }
    CHECK(is_valid_path(g, path));
    double expected = kInfiniteMargin;
    for (const auto & t : path.transitions()) { expected = std::min(expected, margin_by_definition(g, t.step, t.from, t.to)); }
    const double m = time_margin(g, path);
    CHECK(((std::isinf(m) && std::isinf(expected)) || m == doctest::Approx(expected)));
  }
}

TEST_CASE("a path that never changes cell has infinite margin")
{
  auto scn = testing::empty_two_lane(3, 0.5, 10.0);
  const auto g = build_graph(scn);
  REQUIRE(g.signatures().size() == 1);
  SignaturePath path{std::vector<Signature>(4, g.signatures().front())};
  CHECK(is_valid_path(g, path));
  CHECK(std::isinf(time_margin(g, path)));
  path.steps.pop_back();
  CHECK_FALSE(is_valid_path(g, path));
}

TEST_CASE("path count matches explicit enumeration")
{
  std::mt19937_64 rng(16);
  testing::RandomScenarioOptions opt;
  opt.max_obstacles = 2;
  opt.max_steps = 6;
  for (int i = 0; i < 8; ++i) {
    const auto scn = testing::random_scenario(rng, opt);
    const auto g = build_graph(scn);
    double n = 0;
    std::function<void(int, int)> dfs = [&](int p, int idx) {
      if (p == g.steps()) {
        n += 1;
        return;
      }
      for (int b : g.successors(p, idx)) { dfs(p + 1, b); }
    };
    for (const auto & s : initial_signatures(scn, g)) { dfs(0, *g.find(0, s)); }
    CHECK(count_paths(scn, g) == doctest::Approx(n));
  }
}

TEST_CASE("golden scenario graph structure")
{
  const auto scn = testing::golden();
  const auto g = build_graph(scn);
  std::set<std::string> names;
  for (const auto & s : g.signatures()) { names.insert(s.letters()); }
  CHECK(names == std::set<std::string>{"br", "fr", "lb", "lf"});
  auto sig = [](const char * t) { return Signature::parse(t); };
  CHECK(validity_set(g, sig("br"), sig("fr")).empty());
  CHECK(validity_set(g, sig("lb"), sig("lf")).empty());
  CHECK_FALSE(validity_set(g, sig("br"), sig("lf")).empty());
  CHECK_FALSE(validity_set(g, sig("br"), sig("lb")).empty());
  CHECK_FALSE(validity_set(g, sig("lb"), sig("fr")).empty());
  CHECK_FALSE(validity_set(g, sig("lf"), sig("fr")).empty());
}
