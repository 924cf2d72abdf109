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

#ifndef STPART_CONVEX_HPP_
#define STPART_CONVEX_HPP_

/**
 * @file
 * @brief Planar polyhedra in half-plane form and a 2D Seidel LP.
 *
 * All region algebra in the planner happens in the Frenet plane z = [s, r].
 * Time never enters an LP; it is handled by layering.
 */

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

namespace stpart {

using Vec2 = Eigen::Vector2d;

/// Default feasibility relaxation (m).
inline constexpr double kEpsLp = 1e-9;
/// Width of the one-sided boundary shift that keeps sibling cells disjoint (m).
inline constexpr double kEpsStrict = 1e-6;
inline constexpr std::uint64_t kDefaultSeed = 0x5eed'2017ULL;

/// Half of the side of the box the LP works in. Coordinates are meters.
inline constexpr double kLpBox = 1e5;

/// Run-wide numeric settings. Every default is echoed in run reports.
struct Tolerances
{
  double eps_lp = kEpsLp;
  double eps_strict = kEpsStrict;
  /// KKT residual / duality gap acceptance for trajectory QPs.
  double qp_tol = 1e-6;
  std::uint64_t seed = kDefaultSeed;
};

/// normal . z <= offset
struct HalfPlane
{
  Vec2 normal;
  double offset = 0.0;

  bool operator==(const HalfPlane & o) const
  {
    return normal.x() == o.normal.x() && normal.y() == o.normal.y() && offset == o.offset;
  }
};

/**
 * @brief Conjunction of half-planes in the (s, r) plane.
 *
 * Rows are kept exactly as given (no normalization) so that exports are
 * faithful; numeric routines normalize internally.
 */
class Polyhedron
{
public:
  Polyhedron() = default;
  /// Throws std::invalid_argument when a row has a zero normal.
  explicit Polyhedron(std::vector<HalfPlane> rows);

  /// Adds a row unless an identical one is already present.
  void add_row(const HalfPlane & row);

  const std::vector<HalfPlane> & rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty_rows() const { return rows_.empty(); }

  /// True when every row holds within `tol` (rows scaled to unit normals).
  bool contains(const Vec2 & z, double tol = 0.0) const;

  /// Largest normalized violation max_i (n_i.z - b_i)/|n_i|; -inf for no rows.
  double max_violation(const Vec2 & z) const;

private:
  std::vector<HalfPlane> rows_;
};

/// Set intersection: row concatenation with exact duplicates removed.
Polyhedron intersect(const Polyhedron & p1, const Polyhedron & p2);

struct FeasibilityResult
{
  bool feasible = false;
  Vec2 witness = Vec2::Zero();

  explicit operator bool() const { return feasible; }
};

/**
 * @brief Feasibility of {z : n_i.z <= b_i + epsilon |n_i|} by Seidel's LP.
 *
 * Constraint insertion order is a deterministic shuffle seeded by `seed`.
 * An empty row set is feasible with witness at the origin.
 */
FeasibilityResult is_feasible(
  const Polyhedron & p, double epsilon = kEpsLp, std::uint64_t seed = kDefaultSeed);

/**
 * @brief Center of the largest inscribed disc.
 *
 * Returns std::nullopt for empty polyhedra. When the set of centers is not
 * unique the midpoint of that set along a fixed direction is returned.
 * Unbounded polyhedra yield a deterministic deep point (radius capped).
 */
std::optional<Vec2> chebyshev_interior_point(
  const Polyhedron & p, std::uint64_t seed = kDefaultSeed);

namespace detail {

/// Unit-normal row with offset already relaxed.
struct NormalRow
{
  Vec2 n;
  double b;
};

/**
 * @brief Minimizes c.z over normalized rows inside the LP box (Seidel).
 * @return std::nullopt when infeasible.
 */
std::optional<Vec2> seidel_lp(
  const std::vector<NormalRow> & rows, const Vec2 & c, std::uint64_t seed);

std::vector<NormalRow> normalized_rows(const Polyhedron & p, double relax);

}  // namespace detail

}  // namespace stpart

#endif  // STPART_CONVEX_HPP_
