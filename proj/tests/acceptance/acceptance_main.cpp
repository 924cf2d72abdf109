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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "../common/membership.hpp"
#include "../common/oracles.hpp"
#include "../common/scenarios.hpp"
#include "stpart/planner.hpp"

using namespace stpart;

namespace {

struct Outcome
{
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char * name, const std::function<Outcome()> & body)
{
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception & e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s [%d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
  failures += o.pass ? 0 : 1;
}

std::string fmt(const char * f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool visits(const SignaturePath & path, const char * letters)
{
  return std::any_of(path.steps.begin(), path.steps.end(), [&](const Signature & s) { return s.letters() == letters; });
}

// 1. Exactly one cell per free sample, none per blocked sample.
Outcome partition_membership()
{
  std::mt19937_64 rng(1001);
  testing::RandomScenarioOptions opt;  // K <= 3, N <= 4, P <= 10
  testing::MembershipStats total;
  for (int i = 0; i < 50; ++i) {
    const auto scn = testing::random_scenario(rng, opt);
    for (int p = 0; p <= scn.steps(); ++p) {
      const auto cells = partition_step(scn, p);
      const auto st = testing::check_membership(scn, p, cells, 10000, rng);
      total.samples += st.samples;
      total.free += st.free;
      total.errors += st.errors;
      total.ambiguous += st.ambiguous;
    }
  }
  const double rate = static_cast<double>(total.ambiguous) / static_cast<double>(total.samples);
  return {total.errors == 0 && rate <= 1e-3,
          fmt("%ld samples (%ld free), %ld misassigned, ambiguous rate %.2e (limit 1e-3)", total.samples, total.free,
              total.errors, rate)};
}

// 2. At most K 4^N cells; 4 cells for one obstacle inside one trapeze.
Outcome cell_count_bound()
{
  std::mt19937_64 rng(1002);
  long steps = 0;
  long over = 0;
  for (int i = 0; i < 50; ++i) {
    const auto scn = testing::random_scenario(rng);
    const double bound = scn.road.intervals() * std::pow(4.0, static_cast<double>(scn.obstacles.size()));
    for (int p = 0; p <= scn.steps(); ++p) {
      ++steps;
      over += static_cast<double>(partition_step(scn, p).size()) > bound ? 1 : 0;
    }
  }
  auto single = testing::empty_two_lane(1, 0.5, 10.0);
  single.obstacles.push_back(testing::straight_track(1, 1, 0.5, 50.0, 1.75, 0.0));
  const auto cells = partition_step(single, 0);
  return {over == 0 && cells.size() == 4,
          fmt("%ld partitions, %ld above bound; single-obstacle case has %zu cells (bound 4)", steps, over, cells.size())};
}

// Longitudinal span covered by an obstacle during [p, p + 1], grown by the
// ego half length. The last layer repeats the preceding motion.
std::pair<double, double> swept_span(const Scenario & scn, const ObstacleTrack & t, int p)
{
  const auto pose = [&](int q) { return t.poses[static_cast<std::size_t>(q)]; };
  const int last = scn.steps();
  const double s0 = pose(p).s;
  const double s1 = p < last ? pose(p + 1).s : s0 + (pose(last).s - pose(last - 1).s);
  const double grow = pose(p).half_length + scn.ego.half_length + scn.safety_pad;
  return {std::min(s0, s1) - grow, std::max(s0, s1) + grow};
}

// Finite window of br -> lf recomputed from the poses: the gap between
// green's front and blue's rear stays open up to the last such layer.
double golden_window(const Scenario & scn)
{
  int last = -1;
  for (int p = 0; p <= scn.steps(); ++p) {
    const double blue_rear = swept_span(scn, scn.obstacles[0], p).first;
    const double green_front = swept_span(scn, scn.obstacles[1], p).second;
    if (green_front > blue_rear) { break; }
    last = p;
  }
  if (last == scn.steps()) { return kInfiniteMargin; }
  return scn.tau * (last + 1);
}

// 3. Golden structure: signatures, empty validity pairs, margin pattern.
Outcome golden_structure()
{
  const auto scn = testing::golden();
  const auto g = build_graph(scn);
  std::set<std::string> names;
  for (const auto & s : g.signatures()) { names.insert(s.letters()); }
  const bool sig_ok = names == std::set<std::string>{"br", "fr", "lb", "lf"};

  std::set<std::string> empty_pairs;
  const auto sigs = g.signatures();
  for (std::size_t a = 0; a < sigs.size(); ++a) {
    for (std::size_t b = a + 1; b < sigs.size(); ++b) {
      if (validity_set(g, sigs[a], sigs[b]).empty()) {
        auto x = sigs[a].letters();
        auto y = sigs[b].letters();
        if (y < x) { std::swap(x, y); }
        empty_pairs.insert(x + "-" + y);
      }
    }
  }
  const bool empty_ok = empty_pairs == std::set<std::string>{"br-fr", "lb-lf"};

  auto sig = [](const char * t) { return Signature::parse(t); };
  auto first_step = [&](const char * a, const char * b) {
    const auto v = validity_set(g, sig(a), sig(b));
    return v.empty() ? -1 : v.intervals.front().first;
  };
  // Each row takes its transitions as early as its validity set allows.
  const SignaturePath stay{std::vector<Signature>(static_cast<std::size_t>(g.steps()) + 1, sig("br"))};
  const double m_stay = time_margin(g, stay);
  const double m_wait = std::min(transition_margin(g, first_step("br", "lb"), sig("br"), sig("lb")),
                                 transition_margin(g, first_step("lb", "fr"), sig("lb"), sig("fr")));
  const double m_br_lf = transition_margin(g, 0, sig("br"), sig("lf"));
  const double m_lf_fr = transition_margin(g, first_step("lf", "fr"), sig("lf"), sig("fr"));
  const double m_first = std::min(m_br_lf, m_lf_fr);
  const double expected = golden_window(scn);
  const bool margin_ok = std::isinf(m_stay) && std::isinf(m_wait) && std::isfinite(m_first) && m_br_lf <= m_lf_fr &&
                         std::abs(m_first - expected) < 1e-9;
  return {sig_ok && empty_ok && margin_ok,
          fmt("%zu signatures, empty pairs {%s%s}, margins (%g, %g, %g) with window from geometry %g", names.size(),
              empty_pairs.count("br-fr") ? "br-fr " : "", empty_pairs.count("lb-lf") ? "lb-lf" : "", m_stay, m_wait,
              m_first, expected)};
}

// 4. Best-first search cost equals exhaustive enumeration.
Outcome oracle_equivalence()
{
  std::mt19937_64 rng(1004);
  testing::RandomScenarioOptions opt;
  opt.max_obstacles = 2;
  opt.max_steps = 8;
  int done = 0;
  int mismatch = 0;
  int feasible = 0;
  double worst = 0.0;
  while (done < 20) {
    auto scn = testing::random_scenario(rng, opt);
    if (scn.obstacles.empty()) { continue; }
    const auto g = build_graph(scn);
    PlannerConfig cfg;
    cfg.margin_min = 0.5 * (done % 3);
    PlanResult oracle;
    try {
      oracle = enumerate_oracle(scn, g, cfg);
    } catch (const OracleCapExceeded &) {
      continue;
    }
    const auto r = plan(scn, g, cfg);
    ++done;
    if (r.found() != oracle.found()) {
      ++mismatch;
      continue;
    }
    if (!r.found()) { continue; }
    ++feasible;
    const double rel = std::abs(r.cost - oracle.cost) / std::max(1.0, std::abs(oracle.cost));
    worst = std::max(worst, rel);
    mismatch += rel > 1e-5 ? 1 : 0;
  }
  return {mismatch == 0, fmt("%d scenarios (%d with a plan), %d mismatches, worst relative gap %.2e (limit 1e-5)", done,
                             feasible, mismatch, worst)};
}

// 5. Margin requirement: cost ordering and maneuver switch.
Outcome margin_behavior()
{
  const auto scn = testing::golden();
  const auto g = build_graph(scn);
  PlannerConfig c0;
  c0.margin_min = 0.0;
  PlannerConfig c1;
  c1.margin_min = 1.0;
  const auto r0 = plan(scn, g, c0);
  const auto r1 = plan(scn, g, c1);
  if (!r0.found() || !r1.found()) { return {false, "no plan at margin 0 or 1"}; }
  const bool overtake_first = visits(r0.path, "lf");
  // The overtake-first window is the time left on that maneuver.
  const double window = r0.margin;
  const bool strict = r1.cost > r0.cost * (1.0 + 1e-9);
  const bool ok = overtake_first && r1.cost >= r0.cost * (1.0 - 1e-9) && (strict == (window < 1.0));
  return {ok, fmt("margin 0: cost %.4f via lf=%s (window %.3f s); margin 1: cost %.4f via lf=%s", r0.cost,
                  overtake_first ? "yes" : "no", window, r1.cost, visits(r1.path, "lf") ? "yes" : "no")};
}

// 6. Path QPs: KKT residuals and optimality against feasible perturbations.
Outcome qp_optimality()
{
  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> nd;
  testing::RandomScenarioOptions opt;
  opt.max_obstacles = 3;
  int solved = 0;
  int kkt_fail = 0;
  int beaten = 0;
  long perturbations = 0;
  double worst_kkt = 0.0;
  while (solved < 100) {
    const auto scn = testing::random_scenario(rng, opt);
    const auto g = build_graph(scn);
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
      // Prefer staying put so a fair share of paths are dynamically feasible.
      const auto self = std::find_if(succ.begin(), succ.end(), [&](int b) {
        return g.layer(p + 1)[static_cast<std::size_t>(b)].signature == path.steps.back();
      });
      idx = self != succ.end() && u(rng) < 0.7 ? *self : succ[rng() % succ.size()];
      path.steps.push_back(g.layer(p + 1)[static_cast<std::size_t>(idx)].signature);
    }
    if (!ok) { continue; }
    const auto qp = assemble(scn, g, path);
    const auto cqp = condense(qp);
    const auto res = solve_qp(cqp.qp);
    if (res.status != QpStatus::kOptimal) { continue; }
    ++solved;
    const auto k = kkt_residuals(cqp.qp, res.x, res.y);
    const double kkt = std::max({k.primal, k.dual, k.gap, k.dual_sign});
    worst_kkt = std::max(worst_kkt, kkt);
    kkt_fail += kkt > 1e-6 ? 1 : 0;

    // Other feasible points: minimizers of random objectives over the same rows.
    std::vector<Eigen::VectorXd> anchors;
    for (int a = 0; a < 10; ++a) {
      DenseQp other = cqp.qp;
      other.H = 1e-2 * Eigen::MatrixXd::Identity(cqp.qp.H.rows(), cqp.qp.H.cols());
      for (Eigen::Index i = 0; i < other.g.size(); ++i) { other.g(i) = nd(rng); }
      const auto o = solve_qp(other);
      if (o.status == QpStatus::kOptimal) { anchors.push_back(o.x); }
    }
    if (anchors.empty()) { continue; }
    const double base = testing::qp_cost(cqp.qp, res.x);
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXd target = Eigen::VectorXd::Zero(res.x.size());
      double wsum = 0.0;
      for (const auto & a : anchors) {
        const double w = u(rng);
        target += w * a;
        wsum += w;
      }
      target /= wsum;
      const double step = std::pow(10.0, -6.0 * u(rng));
      const Eigen::VectorXd xp = (1.0 - step) * res.x + step * target;
      ++perturbations;
      const double cost = testing::qp_cost(cqp.qp, xp);
      beaten += cost < base - 1e-7 * (1.0 + std::abs(base)) ? 1 : 0;
    }
  }
  return {kkt_fail == 0 && beaten == 0,
          fmt("%d path QPs, worst KKT residual %.2e (limit 1e-6), %ld feasible perturbations, %d cheaper", solved,
              worst_kkt, perturbations, beaten)};
}

double median(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// 7. Desk-scale timing on the golden scenario.
Outcome timing()
{
  const auto scn = testing::golden();
  std::vector<double> part;
  std::vector<double> expl;
  std::vector<double> qp;
  for (int i = 0; i < 5; ++i) {
    const auto r = plan(scn, PlannerConfig{});
    if (!r.found()) { return {false, "golden scenario has no plan"}; }
    part.push_back(r.timing.partitioning);
    expl.push_back(r.timing.graph_exploration);
    qp.push_back(r.timing.optimal_path);
  }
  const double a = median(part);
  const double b = median(expl);
  const double c = median(qp);
  return {a < 25.0 && b < 500.0 && c < 10.0,
          fmt("median partitioning %.2f ms (< 25), exploration %.2f ms (< 500), path QP %.3f ms (< 10)", a, b, c)};
}

// 8. Seidel feasibility against vertex enumeration.
Outcome lp_agreement()
{
  std::mt19937_64 rng(1008);
  int disagree = 0;
  int feasible = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto p = testing::random_system(rng, 12);
    const bool seidel = static_cast<bool>(is_feasible(p));
    const bool brute = testing::vertex_enumeration_violation(p, kEpsLp) <= 1e-9;
    disagree += seidel != brute ? 1 : 0;
    feasible += brute ? 1 : 0;
  }
  return {disagree == 0, fmt("10000 systems (%d feasible), %d disagreements", feasible, disagree)};
}

}  // namespace

int main()
{
  report(1, "partition membership", partition_membership);
  report(2, "cell count bound", cell_count_bound);
  report(3, "golden structure", golden_structure);
  report(4, "oracle equivalence", oracle_equivalence);
  report(5, "margin behavior", margin_behavior);
  report(6, "QP optimality", qp_optimality);
  report(7, "timing", timing);
  report(8, "LP agreement", lp_agreement);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
