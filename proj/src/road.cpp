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

#include "stpart/road.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stpart {

RoadModel::RoadModel(std::vector<double> breakpoints, std::vector<double> r_min, std::vector<double> r_max)
: breakpoints_(std::move(breakpoints)), r_min_(std::move(r_min)), r_max_(std::move(r_max))
{
  if (breakpoints_.size() < 2) { throw std::invalid_argument("road needs at least two breakpoints"); }
  if (r_min_.size() != breakpoints_.size() || r_max_.size() != breakpoints_.size()) {
    throw std::invalid_argument("road bound arrays must match the breakpoint count");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!std::isfinite(breakpoints_[i]) || !std::isfinite(r_min_[i]) || !std::isfinite(r_max_[i])) {
      throw std::invalid_argument("road values must be finite");
    }
    if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1])) {
      throw std::invalid_argument("road breakpoints must be strictly increasing");
    }
    // Linear interpolation keeps r_min < r_max inside an interval iff it holds
    // at both ends.
    if (!(r_min_[i] < r_max_[i])) {
      throw std::invalid_argument("road cross-section empty at breakpoint " + std::to_string(i));
    }
  }
}

RoadModel RoadModel::straight(double s_min, double s_max, double r_min, double r_max)
{
  return RoadModel({s_min, s_max}, {r_min, r_min}, {r_max, r_max});
}

double RoadModel::interpolate(const std::vector<double> & values, double s) const
{
  if (s <= breakpoints_.front()) { return values.front(); }
  if (s >= breakpoints_.back()) { return values.back(); }
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  const double w = (s - breakpoints_[i]) / (breakpoints_[i + 1] - breakpoints_[i]);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

double RoadModel::r_min(double s) const { return interpolate(r_min_, s); }
double RoadModel::r_max(double s) const { return interpolate(r_max_, s); }

TrapezeSet decompose(const RoadModel & road, double eps_strict)
{
  const auto & b = road.breakpoints();
  const auto & lo = road.r_min_values();
  const auto & hi = road.r_max_values();
  TrapezeSet out;
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    const double len = b[k + 1] - b[k];
    const double q_lo = (lo[k + 1] - lo[k]) / len;
    const double q_hi = (hi[k + 1] - hi[k]) / len;
    const double s_start = k == 0 ? b[k] : b[k] + eps_strict;
    Polyhedron trapeze;
    trapeze.add_row({Vec2(-1.0, 0.0), -s_start});
    trapeze.add_row({Vec2(1.0, 0.0), b[k + 1]});
    // r >= lo[k] + q_lo (s - b[k])
    trapeze.add_row({Vec2(q_lo, -1.0), q_lo * b[k] - lo[k]});
    // r <= hi[k] + q_hi (s - b[k])
    trapeze.add_row({Vec2(-q_hi, 1.0), hi[k] - q_hi * b[k]});
    out.trapezes.push_back(std::move(trapeze));
  }
  return out;
}

bool contains(const RoadModel & road, const Vec2 & z)
{
  const double s = z.x();
  const double r = z.y();
  if (s < road.s_min() || s > road.s_max()) { return false; }
  return road.r_min(s) <= r && r <= road.r_max(s);
}

}  // namespace stpart
