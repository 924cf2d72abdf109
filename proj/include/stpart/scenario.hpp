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

#ifndef STPART_SCENARIO_HPP_
#define STPART_SCENARIO_HPP_

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

#include "stpart/convex.hpp"
#include "stpart/road.hpp"

namespace stpart {

/// Scenario is malformed or its initial state is not collision-free.
class ScenarioError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct ObstaclePose
{
  double s = 0.0;
  double r = 0.0;
  /// Relative to the road axis (rad).
  double heading = 0.0;
  double half_length = 0.0;
  double half_width = 0.0;
};

/// Predicted footprint of one obstacle at every step 0..P.
struct ObstacleTrack
{
  int id = 0;
  std::vector<ObstaclePose> poses;
};

/// State layout (s, r, sdot, rdot).
using EgoState = Eigen::Vector4d;

struct EgoVehicle
{
  double half_length = 0.0;
  double half_width = 0.0;
  EgoState initial = EgoState::Zero();
};

struct ControlBounds
{
  double a_lon_max = 3.0;
  double a_lat_max = 2.0;
};

struct Scenario
{
  RoadModel road;
  /// Signature labels follow this order; kept sorted by id.
  std::vector<ObstacleTrack> obstacles;
  EgoVehicle ego;
  double horizon = 10.0;
  double tau = 1.0;
  double margin_min = 1.0;
  double alpha = 0.2;
  ControlBounds bounds;
  double ref_speed = 20.0;
  double safety_pad = 0.0;

  /// Number of steps P = horizon / tau.
  int steps() const;
  double theta(int p) const { return tau * p; }

  /// Throws ScenarioError when any invariant is violated.
  void validate() const;
};

/// Rectangle with its own axes: front along heading, left at +90 degrees.
struct OrientedBox
{
  Vec2 center = Vec2::Zero();
  double heading = 0.0;
  double half_length = 0.0;
  double half_width = 0.0;

  Vec2 axis() const;
  Vec2 left() const;
  /// Closed rectangle; rows ordered front, left, behind, right.
  Polyhedron polyhedron() const;
  bool contains(const Vec2 & z) const;
  /// Local coordinates (along axis, along left).
  Vec2 local(const Vec2 & z) const;
};

/**
 * @brief Configuration-space footprint of `track` valid over [theta_p, theta_{p+1}).
 *
 * Grown by the ego half-extents (rotated-rectangle outer bound of the
 * Minkowski sum), by `safety_pad` on every side, and by half the step
 * displacement along each obstacle axis after re-centering on the midpoint of
 * the displacement. At p = P the last displacement is reused.
 */
OrientedBox inflated_box(
  const ObstacleTrack & track, int step, double ego_half_length, double ego_half_width, double safety_pad);

Polyhedron inflated_obstacle(
  const ObstacleTrack & track, int step, double ego_half_length, double ego_half_width, double safety_pad);

/// All inflated obstacles of a scenario at one step, in obstacle order.
std::vector<OrientedBox> inflated_boxes(const Scenario & scn, int step);

/// Pointwise free-space oracle: on road and outside every inflated obstacle.
bool free_space_sample_check(const Scenario & scn, const Vec2 & z, int step);

/// Tracks rotating more than 0.1 rad within one step (sweep pad not guaranteed).
std::vector<std::string> rotation_warnings(const Scenario & scn);

}  // namespace stpart

#endif  // STPART_SCENARIO_HPP_
