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

#ifndef STPART_SPACETIME_GRAPH_HPP_
#define STPART_SPACETIME_GRAPH_HPP_

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "stpart/partition.hpp"
#include "stpart/scenario.hpp"

namespace stpart {

inline constexpr double kInfiniteMargin = std::numeric_limits<double>::infinity();

/// Closures intersect: cells relaxed by eps_lp + eps_strict share a point.
bool adjacency(const CellSlice & c1, const CellSlice & c2, const Tolerances & tol = {});

/**
 * @brief Time-layered transition graph over cell slices.
 *
 * Layer p holds the nonempty cells at theta_p. An edge joins (a, p) to
 * (b, p + 1) when b is nonempty at both p and p + 1 and a, b are adjacent at
 * theta_p. Immutable once built.
 */
class TransitionGraph
{
public:
  struct Edge
  {
    int step = 0;
    int from = 0;  ///< index in layer step
    int to = 0;    ///< index in layer step + 1
  };

  TransitionGraph(std::vector<std::vector<CellSlice>> layers, double tau, const Tolerances & tol);

  /// Number of steps P; layers are 0..P.
  int steps() const { return static_cast<int>(layers_.size()) - 1; }
  double tau() const { return tau_; }

  const std::vector<CellSlice> & layer(int p) const { return layers_.at(static_cast<std::size_t>(p)); }
  const std::vector<Edge> & edges() const { return edges_; }

  std::optional<int> find(int p, const Signature & sig) const;

  /// adj_{theta_p}(a, b); false when either cell is empty at p.
  bool adjacent_at(int p, const Signature & a, const Signature & b) const;
  bool adjacent_at(int p, int a, int b) const;

  /// Indices in layer p + 1 reachable from cell `index` of layer p.
  const std::vector<int> & successors(int p, int index) const;

  /// Every signature present in some layer, sorted.
  std::vector<Signature> signatures() const;

  std::size_t vertex_count() const;

private:
  std::vector<std::vector<CellSlice>> layers_;
  double tau_;
  /// adjacency_[p][a * n_p + b]
  std::vector<std::vector<char>> adjacency_;
  std::vector<std::vector<std::vector<int>>> successors_;
  std::vector<Edge> edges_;
};

/// Partitions every step of `scn` and links the layers.
TransitionGraph build_graph(const Scenario & scn, const Tolerances & tol = {});

/// Maximal step ranges [first, last] during which a transition is available.
struct ValiditySet
{
  Signature from;
  Signature to;
  std::vector<std::pair<int, int>> intervals;

  bool empty() const { return intervals.empty(); }
  bool operator==(const ValiditySet &) const = default;
};

ValiditySet validity_set(const TransitionGraph & g, const Signature & from, const Signature & to);

struct Transition
{
  int step = 0;  ///< the path leaves `from` between layers step and step + 1
  Signature from;
  Signature to;
};

/// One signature per layer 0..P.
struct SignaturePath
{
  std::vector<Signature> steps;

  /// Consecutive pairs with distinct signatures.
  std::vector<Transition> transitions() const;
  bool operator==(const SignaturePath &) const = default;
  auto operator<=>(const SignaturePath &) const = default;
};

/// Every consecutive pair is an edge of `g` and the length is P + 1.
bool is_valid_path(const TransitionGraph & g, const SignaturePath & path);

/**
 * @brief Margin of one transition taken at `step`.
 *
 * tau times the number of consecutive layers q >= step over which the
 * transition stays available; +inf when it stays available through layer P.
 */
double transition_margin(const TransitionGraph & g, int step, const Signature & from, const Signature & to);

/// Minimum transition margin along the path (+inf without transitions).
double time_margin(const TransitionGraph & g, const SignaturePath & path);

}  // namespace stpart

#endif  // STPART_SPACETIME_GRAPH_HPP_
