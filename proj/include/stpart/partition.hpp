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

#ifndef STPART_PARTITION_HPP_
#define STPART_PARTITION_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stpart/convex.hpp"
#include "stpart/road.hpp"
#include "stpart/scenario.hpp"

namespace stpart {

/// Relative position of the ego vehicle with respect to one obstacle.
enum class RegionLabel : std::uint8_t { kFront = 1, kLeft = 2, kBehind = 3, kRight = 4 };

inline constexpr std::array<RegionLabel, 4> kAllLabels = {
  RegionLabel::kFront, RegionLabel::kLeft, RegionLabel::kBehind, RegionLabel::kRight};

/// 'f', 'l', 'b' or 'r'.
char label_char(RegionLabel label);
/// Inverse of label_char; throws std::invalid_argument.
RegionLabel label_from_char(char c);

/**
 * @brief Trapeze index plus one region label per obstacle.
 *
 * Ordering is lexicographic on (trapeze, labels), which fixes every
 * deterministic tie-break downstream.
 */
struct Signature
{
  /// 1-based trapeze index.
  int trapeze = 1;
  std::vector<RegionLabel> labels;

  /// "lb", "brl", ... (trapeze omitted).
  std::string letters() const;
  /// "1:lb"; the form used in every export.
  std::string str() const;
  /// Accepts "1:lb" or bare letters (trapeze 1).
  static Signature parse(std::string_view text);

  auto operator<=>(const Signature &) const = default;
  bool operator==(const Signature &) const = default;
};

struct CellSlice
{
  Signature signature;
  int step = 0;
  Polyhedron poly;
  Vec2 witness = Vec2::Zero();
};

/**
 * @brief The four free regions around an obstacle rectangle.
 *
 * With (x, y) the obstacle-local coordinates and (L, W) its half-extents:
 *   front:  x >= L + eps, |y| <= W - eps
 *   left:   y >= W + eps
 *   behind: x <= -L - eps, |y| <= W - eps
 *   right:  y <= -W - eps
 * Together with the closed rectangle they cover the plane except for strips
 * of width eps (front and back edges) and 2 eps (along the side lines). The
 * band trim keeps the bands of two obstacles that touch side by side apart.
 *
 * Indexed by label value - 1. Throws std::invalid_argument for a degenerate
 * rectangle.
 */
std::array<Polyhedron, 4> obstacle_regions(const OrientedBox & obstacle, double eps_strict = kEpsStrict);

/// Direct per-obstacle classification; std::nullopt inside the rectangle or
/// in an eps strip.
std::optional<RegionLabel> classify(const OrientedBox & obstacle, const Vec2 & z, double eps_strict = kEpsStrict);

/// Parent/child pair observed while refining a cell (nesting check hook).
struct RefinementRecord
{
  Polyhedron parent;
  Polyhedron child;
  int obstacle = 0;
};

/**
 * @brief Semantic partition of the free plane: trapezes refined obstacle by
 * obstacle, discarding empty intersections.
 *
 * Output is sorted by signature. When `trace` is given every accepted
 * refinement is appended to it.
 */
std::vector<CellSlice> partition_free_space(
  const TrapezeSet & trapezes, std::span<const OrientedBox> obstacles, int step, const Tolerances & tol = {},
  std::vector<RefinementRecord> * trace = nullptr);

/// Partition of the free space of `scn` at step p.
std::vector<CellSlice> partition_step(const Scenario & scn, int step, const Tolerances & tol = {});

/// Signature of the unique cell containing z (closed rows, tolerance `tol`).
std::optional<Signature> locate(std::span<const CellSlice> cells, const Vec2 & z, double tol = 0.0);

}  // namespace stpart

#endif  // STPART_PARTITION_HPP_
