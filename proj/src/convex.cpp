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

#include "stpart/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace stpart {

namespace {

// Absolute slack of the LP arithmetic, well below kEpsLp.
constexpr double kLpTol = 1e-10;
constexpr double kParallelTol = 1e-13;
constexpr double kChebyshevCap = 1e4;

const Vec2 & objective_direction()
{
  static const Vec2 c = Vec2(1.0, 0.6180339887498949).normalized();
  return c;
}

std::vector<detail::NormalRow> box_rows()
{
  return {
    {Vec2(1.0, 0.0), kLpBox},
    {Vec2(-1.0, 0.0), kLpBox},
    {Vec2(0.0, 1.0), kLpBox},
    {Vec2(0.0, -1.0), kLpBox},
  };
}

Vec2 box_optimum(const Vec2 & c)
{
  return Vec2(c.x() > 0 ? -kLpBox : kLpBox, c.y() > 0 ? -kLpBox : kLpBox);
}

}  // namespace

Polyhedron::Polyhedron(std::vector<HalfPlane> rows)
{
  rows_.reserve(rows.size());
  for (const auto & row : rows) { add_row(row); }
}

void Polyhedron::add_row(const HalfPlane & row)
{
  if (row.normal.x() == 0.0 && row.normal.y() == 0.0) {
    throw std::invalid_argument("Polyhedron row with zero normal");
  }
  if (std::find(rows_.begin(), rows_.end(), row) == rows_.end()) { rows_.push_back(row); }
}

double Polyhedron::max_violation(const Vec2 & z) const
{
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto & row : rows_) {
    const double norm = row.normal.norm();
    worst = std::max(worst, (row.normal.dot(z) - row.offset) / norm);
  }
  return worst;
}

bool Polyhedron::contains(const Vec2 & z, double tol) const { return max_violation(z) <= tol; }

Polyhedron intersect(const Polyhedron & p1, const Polyhedron & p2)
{
  Polyhedron out = p1;
  for (const auto & row : p2.rows()) { out.add_row(row); }
  return out;
}

namespace detail {

std::vector<NormalRow> normalized_rows(const Polyhedron & p, double relax)
{
  std::vector<NormalRow> out;
  out.reserve(p.size());
  for (const auto & row : p.rows()) {
    const double norm = row.normal.norm();
    out.push_back({row.normal / norm, row.offset / norm + relax});
  }
  return out;
}

std::optional<Vec2> seidel_lp(const std::vector<NormalRow> & rows, const Vec2 & c, std::uint64_t seed)
{
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Fisher-Yates with an explicit draw so the order is identical across
  // standard library implementations.
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }

  const auto box = box_rows();
  Vec2 v = box_optimum(c);

  for (std::size_t k = 0; k < order.size(); ++k) {
    const NormalRow & h = rows[order[k]];
    if (h.n.dot(v) <= h.b + kLpTol) { continue; }

    // New optimum lies on the boundary line of h: z = p0 + t d.
    const Vec2 p0 = h.n * h.b;
    const Vec2 d(-h.n.y(), h.n.x());
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    auto clip = [&](const NormalRow & g) -> bool {
      const double ad = g.n.dot(d);
      const double rhs = g.b - g.n.dot(p0);
      if (std::abs(ad) < kParallelTol) { return rhs >= -kLpTol; }
      const double t = rhs / ad;
      if (ad > 0) {
        hi = std::min(hi, t);
      } else {
        lo = std::max(lo, t);
      }
      return true;
    };

    for (const auto & g : box) {
      if (!clip(g)) { return std::nullopt; }
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (!clip(rows[order[j]])) { return std::nullopt; }
    }
    if (lo > hi + kLpTol) { return std::nullopt; }

    double t;
    if (lo > hi) {
      t = 0.5 * (lo + hi);
    } else {
      const double cd = c.dot(d);
      t = cd >= 0 ? lo : hi;
    }
    v = p0 + t * d;
  }
  return v;
}

}  // namespace detail

FeasibilityResult is_feasible(const Polyhedron & p, double epsilon, std::uint64_t seed)
{
  if (p.empty_rows()) { return {true, Vec2::Zero()}; }
  const auto rows = detail::normalized_rows(p, epsilon);
  if (auto v = detail::seidel_lp(rows, objective_direction(), seed)) { return {true, *v}; }
  return {false, Vec2::Zero()};
}

std::optional<Vec2> chebyshev_interior_point(const Polyhedron & p, std::uint64_t seed)
{
  if (p.empty_rows()) { return Vec2::Zero(); }
  auto base = detail::normalized_rows(p, 0.0);
  const Vec2 & c = objective_direction();

  auto shrunk = [&](double radius) {
    auto rows = base;
    for (auto & row : rows) { row.b -= radius; }
    return rows;
  };

  if (!detail::seidel_lp(base, c, seed)) { return std::nullopt; }

  double lo = 0.0;
  double hi = kChebyshevCap;
  if (detail::seidel_lp(shrunk(hi), c, seed)) {
    lo = hi;
  } else {
    for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (detail::seidel_lp(shrunk(mid), c, seed)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }

  const auto rows = shrunk(lo);
  const auto a = detail::seidel_lp(rows, c, seed);
  const auto b = detail::seidel_lp(rows, -c, seed);
  if (a && b) { return Vec2(0.5 * (*a + *b)); }
  if (a) { return *a; }
  return *detail::seidel_lp(base, c, seed);
}

}  // namespace stpart
