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

#include "stpart/spacetime_graph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace stpart {

bool adjacency(const CellSlice & c1, const CellSlice & c2, const Tolerances & tol)
{
  if (&c1 == &c2 || (c1.step == c2.step && c1.signature == c2.signature)) { return true; }
  return is_feasible(intersect(c1.poly, c2.poly), tol.eps_lp + tol.eps_strict, tol.seed).feasible;
}

TransitionGraph::TransitionGraph(std::vector<std::vector<CellSlice>> layers, double tau, const Tolerances & tol)
: layers_(std::move(layers)), tau_(tau)
{
  if (layers_.empty()) { throw std::invalid_argument("transition graph needs at least one layer"); }
  adjacency_.resize(layers_.size());
  successors_.resize(layers_.size());
  for (std::size_t p = 0; p < layers_.size(); ++p) {
    const auto & layer = layers_[p];
    const std::size_t n = layer.size();
    auto & adj = adjacency_[p];
    adj.assign(n * n, 0);
    for (std::size_t a = 0; a < n; ++a) {
      adj[a * n + a] = 1;
      for (std::size_t b = a + 1; b < n; ++b) {
        const char v = adjacency(layer[a], layer[b], tol) ? 1 : 0;
        adj[a * n + b] = v;
        adj[b * n + a] = v;
      }
    }
  }

  for (std::size_t p = 0; p < layers_.size(); ++p) {
    const auto & layer = layers_[p];
    successors_[p].resize(layer.size());
    if (p + 1 == layers_.size()) { continue; }
    const auto & next = layers_[p + 1];
    for (std::size_t b = 0; b < next.size(); ++b) {
      const auto here = find(static_cast<int>(p), next[b].signature);
      if (!here) { continue; }
      for (std::size_t a = 0; a < layer.size(); ++a) {
        if (adjacency_[p][a * layer.size() + static_cast<std::size_t>(*here)]) {
          successors_[p][a].push_back(static_cast<int>(b));
        }
      }
    }
    for (std::size_t a = 0; a < layer.size(); ++a) {
      for (int b : successors_[p][a]) { edges_.push_back({static_cast<int>(p), static_cast<int>(a), b}); }
    }
  }
}

std::optional<int> TransitionGraph::find(int p, const Signature & sig) const
{
  const auto & l = layer(p);
  const auto it = std::lower_bound(
    l.begin(), l.end(), sig, [](const CellSlice & c, const Signature & s) { return c.signature < s; });
  if (it == l.end() || it->signature != sig) { return std::nullopt; }
  return static_cast<int>(it - l.begin());
}

bool TransitionGraph::adjacent_at(int p, int a, int b) const
{
  const std::size_t n = layer(p).size();
  return adjacency_[static_cast<std::size_t>(p)][static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] != 0;
}

bool TransitionGraph::adjacent_at(int p, const Signature & a, const Signature & b) const
{
  if (p < 0 || p > steps()) { return false; }
  const auto ia = find(p, a);
  const auto ib = find(p, b);
  if (!ia || !ib) { return false; }
  return adjacent_at(p, *ia, *ib);
}

const std::vector<int> & TransitionGraph::successors(int p, int index) const
{
  return successors_.at(static_cast<std::size_t>(p)).at(static_cast<std::size_t>(index));
}

std::vector<Signature> TransitionGraph::signatures() const
{
  std::set<Signature> all;
  for (const auto & l : layers_) {
    for (const auto & c : l) { all.insert(c.signature); }
  }
  return {all.begin(), all.end()};
}

std::size_t TransitionGraph::vertex_count() const
{
  std::size_t n = 0;
  for (const auto & l : layers_) { n += l.size(); }
  return n;
}

TransitionGraph build_graph(const Scenario & scn, const Tolerances & tol)
{
  const int P = scn.steps();
  std::vector<std::vector<CellSlice>> layers;
  layers.reserve(static_cast<std::size_t>(P) + 1);
  for (int p = 0; p <= P; ++p) { layers.push_back(partition_step(scn, p, tol)); }
  return TransitionGraph(std::move(layers), scn.tau, tol);
}

ValiditySet validity_set(const TransitionGraph & g, const Signature & from, const Signature & to)
{
  ValiditySet out{from, to, {}};
  int start = -1;
  for (int p = 0; p <= g.steps(); ++p) {
    const bool on = g.adjacent_at(p, from, to);
    if (on && start < 0) { start = p; }
    if (!on && start >= 0) {
      out.intervals.emplace_back(start, p - 1);
      start = -1;
    }
  }
  if (start >= 0) { out.intervals.emplace_back(start, g.steps()); }
  return out;
}

std::vector<Transition> SignaturePath::transitions() const
{
  std::vector<Transition> out;
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
    if (steps[i] != steps[i + 1]) { out.push_back({static_cast<int>(i), steps[i], steps[i + 1]}); }
  }
  return out;
}

bool is_valid_path(const TransitionGraph & g, const SignaturePath & path)
{
  if (static_cast<int>(path.steps.size()) != g.steps() + 1) { return false; }
  for (int p = 0; p < g.steps(); ++p) {
    const auto a = g.find(p, path.steps[static_cast<std::size_t>(p)]);
    const auto b = g.find(p + 1, path.steps[static_cast<std::size_t>(p) + 1]);
    if (!a || !b) { return false; }
    const auto & succ = g.successors(p, *a);
    if (std::find(succ.begin(), succ.end(), *b) == succ.end()) { return false; }
  }
  return g.find(0, path.steps.front()).has_value();
}

double transition_margin(const TransitionGraph & g, int step, const Signature & from, const Signature & to)
{
  int run = 0;
  for (int q = step; q <= g.steps(); ++q) {
    if (!g.adjacent_at(q, from, to)) { return g.tau() * run; }
    ++run;
  }
  return kInfiniteMargin;
}

double time_margin(const TransitionGraph & g, const SignaturePath & path)
{
  double margin = kInfiniteMargin;
  for (const auto & t : path.transitions()) {
    margin = std::min(margin, transition_margin(g, t.step, t.from, t.to));
  }
  return margin;
}

}  // namespace stpart
