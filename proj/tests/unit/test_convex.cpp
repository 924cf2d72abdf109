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

#include <doctest.h>

#include <random>

#include "../common/oracles.hpp"
#include "stpart/convex.hpp"

using namespace stpart;

namespace {

Polyhedron unit_square()
{
  return Polyhedron({{Vec2(1, 0), 1.0}, {Vec2(-1, 0), 0.0}, {Vec2(0, 1), 1.0}, {Vec2(0, -1), 0.0}});
}

}  // namespace

TEST_CASE("polyhedron rejects zero normals and drops duplicate rows")
{
  CHECK_THROWS_AS(Polyhedron({{Vec2(0, 0), 1.0}}), std::invalid_argument);
  Polyhedron p({{Vec2(1, 0), 1.0}, {Vec2(1, 0), 1.0}});
  CHECK(p.size() == 1);
  CHECK(intersect(unit_square(), unit_square()).size() == 4);
}

TEST_CASE("containment uses normalized violation")
{
  Polyhedron p({{Vec2(2, 0), 2.0}});
  CHECK(p.max_violation(Vec2(1.5, 0)) == doctest::Approx(0.5));
  CHECK(p.contains(Vec2(1.0, 7.0)));
  CHECK_FALSE(p.contains(Vec2(1.1, 0.0)));
  CHECK(p.contains(Vec2(1.1, 0.0), 0.2));
}

TEST_CASE("feasibility of simple systems")
{
  CHECK(is_feasible(unit_square()));
  CHECK(is_feasible(Polyhedron()));

  // x <= 0 and x >= 5e-10: closures disjoint but within the relaxation.
  Polyhedron touching({{Vec2(1, 0), 0.0}, {Vec2(-1, 0), -5e-10}});
  CHECK(is_feasible(touching));
  CHECK_FALSE(is_feasible(touching, 0.0));

  Polyhedron apart({{Vec2(1, 0), 0.0}, {Vec2(-1, 0), -1e-3}});
  CHECK_FALSE(is_feasible(apart));

  auto r = is_feasible(unit_square());
  CHECK(unit_square().contains(r.witness, 1e-9));
}

TEST_CASE("a single point is feasible")
{
  Polyhedron pt({{Vec2(1, 0), 2.0}, {Vec2(-1, 0), -2.0}, {Vec2(0, 1), 3.0}, {Vec2(0, -1), -3.0}});
  auto r = is_feasible(pt);
  REQUIRE(r);
  CHECK(r.witness.x() == doctest::Approx(2.0));
  CHECK(r.witness.y() == doctest::Approx(3.0));
}

TEST_CASE("seidel agrees with vertex enumeration on random systems")
{
  std::mt19937_64 rng(7);
  int feasible = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto p = testing::random_system(rng);
    const double v = testing::vertex_enumeration_violation(p, kEpsLp);
    const auto r = is_feasible(p);
    CHECK(static_cast<bool>(r) == (v <= 1e-9));
    if (r) {
      ++feasible;
      CHECK(p.max_violation(r.witness) <= kEpsLp + 1e-9);
    }
  }
  CHECK(feasible > 200);
  CHECK(feasible < 1800);
}

TEST_CASE("feasibility does not depend on the shuffle seed")
{
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto p = testing::random_system(rng);
    const bool a = static_cast<bool>(is_feasible(p, kEpsLp, 1));
    const bool b = static_cast<bool>(is_feasible(p, kEpsLp, 99));
    CHECK(a == b);
  }
}

TEST_CASE("chebyshev center of a box is its center")
{
  auto c = chebyshev_interior_point(unit_square());
  REQUIRE(c);
  CHECK(c->x() == doctest::Approx(0.5));
  CHECK(c->y() == doctest::Approx(0.5));

  Polyhedron empty({{Vec2(1, 0), 0.0}, {Vec2(-1, 0), -1.0}});
  CHECK_FALSE(chebyshev_interior_point(empty));
}

TEST_CASE("chebyshev radius is at least the best grid radius")
{
  // Triangle with vertices (0,0), (4,0), (0,3): inradius 1 at (1,1).
  Polyhedron tri({{Vec2(0, -1), 0.0}, {Vec2(-1, 0), 0.0}, {Vec2(3, 4), 12.0}});
  auto c = chebyshev_interior_point(tri);
  REQUIRE(c);
  const double radius = -tri.max_violation(*c);
  double grid_best = 0.0;
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; j <= 300; ++j) {
      grid_best = std::max(grid_best, -tri.max_violation(Vec2(i * 0.01, j * 0.01)));
    }
  }
  CHECK(radius >= grid_best - 1e-9);
  CHECK(radius == doctest::Approx(1.0));
  CHECK(c->x() == doctest::Approx(1.0));
  CHECK(c->y() == doctest::Approx(1.0));
}

TEST_CASE("chebyshev point of a random feasible system is interior")
{
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    const auto p = testing::random_system(rng);
    if (!is_feasible(p, 0.0)) { continue; }
    auto c = chebyshev_interior_point(p);
    REQUIRE(c);
    CHECK(p.max_violation(*c) <= 1e-9);
    ++checked;
  }
  CHECK(checked > 50);
}
