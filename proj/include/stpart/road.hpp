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

#ifndef STPART_ROAD_HPP_
#define STPART_ROAD_HPP_

#include <vector>

#include "stpart/convex.hpp"

namespace stpart {

/**
 * @brief Road extent in Frenet coordinates.
 *
 * Lateral bounds are piecewise linear between breakpoints. The road set is
 * closed: r_min(s) <= r <= r_max(s) for s in [s_min, s_max].
 */
class RoadModel
{
public:
  RoadModel() = default;
  /// Throws std::invalid_argument on non-increasing breakpoints, size mismatch
  /// or an empty cross-section.
  RoadModel(std::vector<double> breakpoints, std::vector<double> r_min, std::vector<double> r_max);

  /// Constant cross-section over [s_min, s_max].
  static RoadModel straight(double s_min, double s_max, double r_min, double r_max);

  double s_min() const { return breakpoints_.front(); }
  double s_max() const { return breakpoints_.back(); }
  const std::vector<double> & breakpoints() const { return breakpoints_; }
  const std::vector<double> & r_min_values() const { return r_min_; }
  const std::vector<double> & r_max_values() const { return r_max_; }

  double r_min(double s) const;
  double r_max(double s) const;

  /// Number of breakpoint intervals (= number of trapezes).
  int intervals() const { return static_cast<int>(breakpoints_.size()) - 1; }

private:
  double interpolate(const std::vector<double> & values, double s) const;

  std::vector<double> breakpoints_;
  std::vector<double> r_min_;
  std::vector<double> r_max_;
};

struct TrapezeSet
{
  /// Trapeze k (1-based in signatures) is trapezes[k - 1].
  std::vector<Polyhedron> trapezes;

  int size() const { return static_cast<int>(trapezes.size()); }
};

/**
 * One 4-row trapeze per breakpoint interval. Shared s-boundaries stay closed
 * on the lower-index trapeze; the next one starts at b + eps_strict.
 */
TrapezeSet decompose(const RoadModel & road, double eps_strict = kEpsStrict);

/// Closed road membership.
bool contains(const RoadModel & road, const Vec2 & z);

}  // namespace stpart

#endif  // STPART_ROAD_HPP_
