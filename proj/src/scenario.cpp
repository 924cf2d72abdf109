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

#include "stpart/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace stpart {

namespace {

constexpr double kMaxStepRotation = 0.1;

double wrap_angle(double a)
{
  while (a > std::numbers::pi) { a -= 2.0 * std::numbers::pi; }
  while (a < -std::numbers::pi) { a += 2.0 * std::numbers::pi; }
  return a;
}

void require(bool ok, const std::string & what)
{
  if (!ok) { throw ScenarioError(what); }
}

}  // namespace

int Scenario::steps() const
{
  return static_cast<int>(std::lround(horizon / tau));
}

void Scenario::validate() const
{
  require(std::isfinite(tau) && tau > 0.0, "tau must be positive");
  require(std::isfinite(horizon) && horizon > 0.0, "horizon must be positive");
  const double ratio = horizon / tau;
  require(std::abs(ratio - std::round(ratio)) < 1e-9 * std::max(1.0, ratio), "horizon must be an integer multiple of tau");
  const int p_max = steps();
  require(p_max >= 1, "horizon must contain at least one step");
  require(margin_min >= 0.0, "margin_min must be nonnegative");
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be positive");
  require(bounds.a_lon_max > 0.0 && bounds.a_lat_max > 0.0, "control bounds must be positive");
  require(std::isfinite(ref_speed), "ref_speed must be finite");
  require(safety_pad >= 0.0, "safety_pad must be nonnegative");
  require(ego.half_length > 0.0 && ego.half_width > 0.0, "ego dimensions must be positive");
  require(ego.initial.allFinite(), "initial state must be finite");
  require(ego.initial(2) >= 0.0, "initial longitudinal speed must be nonnegative");

  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const auto & track = obstacles[i];
    if (i > 0) { require(obstacles[i - 1].id < track.id, "obstacle ids must be unique and sorted"); }
    std::ostringstream os;
    os << "obstacle " << track.id << ": ";
    require(static_cast<int>(track.poses.size()) == p_max + 1, os.str() + "needs exactly P+1 poses");
    for (const auto & pose : track.poses) {
      require(pose.half_length > 0.0 && pose.half_width > 0.0, os.str() + "dimensions must be positive");
      require(std::isfinite(pose.s) && std::isfinite(pose.r) && std::isfinite(pose.heading), os.str() + "pose must be finite");
    }
  }

  const Vec2 z0(ego.initial(0), ego.initial(1));
  require(contains(road, z0), "initial position is off the road");
  require(free_space_sample_check(*this, z0, 0), "initial position collides with an obstacle");
}

Vec2 OrientedBox::axis() const { return Vec2(std::cos(heading), std::sin(heading)); }
Vec2 OrientedBox::left() const { return Vec2(-std::sin(heading), std::cos(heading)); }

Vec2 OrientedBox::local(const Vec2 & z) const
{
  const Vec2 d = z - center;
  return Vec2(axis().dot(d), left().dot(d));
}

Polyhedron OrientedBox::polyhedron() const
{
  const Vec2 u = axis();
  const Vec2 v = left();
  Polyhedron p;
  p.add_row({u, u.dot(center) + half_length});
  p.add_row({v, v.dot(center) + half_width});
  p.add_row({-u, -u.dot(center) + half_length});
  p.add_row({-v, -v.dot(center) + half_width});
  return p;
}

bool OrientedBox::contains(const Vec2 & z) const
{
  const Vec2 q = local(z);
  return std::abs(q.x()) <= half_length && std::abs(q.y()) <= half_width;
}

OrientedBox inflated_box(
  const ObstacleTrack & track, int step, double ego_half_length, double ego_half_width, double safety_pad)
{
  const auto & poses = track.poses;
  const int last = static_cast<int>(poses.size()) - 1;
  const auto & pose = poses.at(static_cast<std::size_t>(step));

  Vec2 displacement = Vec2::Zero();
  if (last >= 1) {
    const int from = step < last ? step : last - 1;
    const auto & a = poses[static_cast<std::size_t>(from)];
    const auto & b = poses[static_cast<std::size_t>(from + 1)];
    displacement = Vec2(b.s - a.s, b.r - a.r);
  }

  OrientedBox box;
  box.heading = pose.heading;
  const double c = std::abs(std::cos(pose.heading));
  const double s = std::abs(std::sin(pose.heading));
  const Vec2 u = box.axis();
  const Vec2 v = box.left();
  box.center = Vec2(pose.s, pose.r) + 0.5 * displacement;
  box.half_length = pose.half_length + c * ego_half_length + s * ego_half_width + safety_pad
                    + 0.5 * std::abs(u.dot(displacement));
  box.half_width = pose.half_width + s * ego_half_length + c * ego_half_width + safety_pad
                   + 0.5 * std::abs(v.dot(displacement));
  return box;
}

Polyhedron inflated_obstacle(
  const ObstacleTrack & track, int step, double ego_half_length, double ego_half_width, double safety_pad)
{
  return inflated_box(track, step, ego_half_length, ego_half_width, safety_pad).polyhedron();
}

std::vector<OrientedBox> inflated_boxes(const Scenario & scn, int step)
{
  std::vector<OrientedBox> out;
  out.reserve(scn.obstacles.size());
  for (const auto & track : scn.obstacles) {
    out.push_back(inflated_box(track, step, scn.ego.half_length, scn.ego.half_width, scn.safety_pad));
  }
  return out;
}

bool free_space_sample_check(const Scenario & scn, const Vec2 & z, int step)
{
  if (!contains(scn.road, z)) { return false; }
  for (const auto & box : inflated_boxes(scn, step)) {
    if (box.contains(z)) { return false; }
  }
  return true;
}

std::vector<std::string> rotation_warnings(const Scenario & scn)
{
  std::vector<std::string> out;
  for (const auto & track : scn.obstacles) {
    for (std::size_t p = 0; p + 1 < track.poses.size(); ++p) {
      const double turn = std::abs(wrap_angle(track.poses[p + 1].heading - track.poses[p].heading));
      if (turn > kMaxStepRotation) {
        std::ostringstream os;
        os << "obstacle " << track.id << " rotates " << turn << " rad between steps " << p << " and " << p + 1
           << "; sweep coverage is not guaranteed";
        out.push_back(os.str());
      }
    }
  }
  return out;
}

}  // namespace stpart
