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

#include "stpart/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stpart {

char label_char(RegionLabel label)
{
  switch (label) {
    case RegionLabel::kFront: return 'f';
    case RegionLabel::kLeft: return 'l';
    case RegionLabel::kBehind: return 'b';
    case RegionLabel::kRight: return 'r';
  }
  return '?';
}

RegionLabel label_from_char(char c)
{
  switch (c) {
    case 'f': return RegionLabel::kFront;
    case 'l': return RegionLabel::kLeft;
    case 'b': return RegionLabel::kBehind;
    case 'r': return RegionLabel::kRight;
    default: break;
  }
  throw std::invalid_argument(std::string("unknown region label '") + c + "'");
}

std::string Signature::letters() const
{
  std::string out;
  out.reserve(labels.size());
  for (auto l : labels) { out.push_back(label_char(l)); }
  return out;
}

std::string Signature::str() const { return std::to_string(trapeze) + ":" + letters(); }

Signature Signature::parse(std::string_view text)
{
  Signature sig;
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const std::string head(text.substr(0, colon));
    if (head.empty() || head.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad trapeze index in signature '" + std::string(text) + "'");
    }
    sig.trapeze = std::stoi(head);
    if (sig.trapeze < 1) { throw std::invalid_argument("trapeze indices start at 1"); }
    text = text.substr(colon + 1);
  }
  for (char c : text) { sig.labels.push_back(label_from_char(c)); }
  return sig;
}

std::array<Polyhedron, 4> obstacle_regions(const OrientedBox & obstacle, double eps_strict)
{
  if (!(obstacle.half_length > 0.0) || !(obstacle.half_width > 0.0)) {
    throw std::invalid_argument("degenerate obstacle rectangle");
  }
  const Vec2 u = obstacle.axis();
  const Vec2 v = obstacle.left();
  const double cu = u.dot(obstacle.center);
  const double cv = v.dot(obstacle.center);
  const double L = obstacle.half_length;
  const double W = obstacle.half_width;

  const HalfPlane band_top{v, cv + W - eps_strict};
  const HalfPlane band_bottom{-v, -cv + W - eps_strict};

  std::array<Polyhedron, 4> regions;
  // front: x >= L + eps
  regions[0].add_row({-u, -(cu + L + eps_strict)});
  regions[0].add_row(band_top);
  regions[0].add_row(band_bottom);
  // left: y >= W + eps
  regions[1].add_row({-v, -(cv + W + eps_strict)});
  // behind: x <= -L - eps
  regions[2].add_row({u, cu - L - eps_strict});
  regions[2].add_row(band_top);
  regions[2].add_row(band_bottom);
  // right: y <= -W - eps
  regions[3].add_row({v, cv - W - eps_strict});
  return regions;
}

std::optional<RegionLabel> classify(const OrientedBox & obstacle, const Vec2 & z, double eps_strict)
{
  const Vec2 q = obstacle.local(z);
  const double L = obstacle.half_length;
  const double W = obstacle.half_width;
  if (q.y() >= W + eps_strict) { return RegionLabel::kLeft; }
  if (q.y() <= -W - eps_strict) { return RegionLabel::kRight; }
  if (std::abs(q.y()) <= W - eps_strict) {
    if (q.x() >= L + eps_strict) { return RegionLabel::kFront; }
    if (q.x() <= -L - eps_strict) { return RegionLabel::kBehind; }
  }
  return std::nullopt;
}

std::vector<CellSlice> partition_free_space(
  const TrapezeSet & trapezes, std::span<const OrientedBox> obstacles, int step, const Tolerances & tol,
  std::vector<RefinementRecord> * trace)
{
  struct Working
  {
    Signature signature;
    Polyhedron poly;
  };

  std::vector<Working> cells;
  cells.reserve(trapezes.trapezes.size());
  for (int k = 0; k < trapezes.size(); ++k) {
    const auto & t = trapezes.trapezes[static_cast<std::size_t>(k)];
    if (is_feasible(t, tol.eps_lp, tol.seed)) { cells.push_back({Signature{k + 1, {}}, t}); }
  }

  for (std::size_t n = 0; n < obstacles.size(); ++n) {
    const auto regions = obstacle_regions(obstacles[n], tol.eps_strict);
    std::vector<Working> refined;
    refined.reserve(cells.size() * 4);
    for (const auto & cell : cells) {
      for (std::size_t j = 0; j < 4; ++j) {
        Polyhedron child = intersect(cell.poly, regions[j]);
        if (!is_feasible(child, tol.eps_lp, tol.seed)) { continue; }
        if (trace != nullptr) { trace->push_back({cell.poly, child, static_cast<int>(n)}); }
        Signature sig = cell.signature;
        sig.labels.push_back(kAllLabels[j]);
        refined.push_back({std::move(sig), std::move(child)});
      }
    }
    cells = std::move(refined);
  }

  std::vector<CellSlice> out;
  out.reserve(cells.size());
  for (auto & cell : cells) {
    Vec2 witness;
    if (auto center = chebyshev_interior_point(cell.poly, tol.seed)) {
      witness = *center;
    } else {
      // Only feasible after relaxation (thinner than eps_lp).
      witness = is_feasible(cell.poly, tol.eps_lp, tol.seed).witness;
    }
    out.push_back({std::move(cell.signature), step, std::move(cell.poly), witness});
  }
  std::sort(out.begin(), out.end(), [](const CellSlice & a, const CellSlice & b) { return a.signature < b.signature; });
  return out;
}

std::vector<CellSlice> partition_step(const Scenario & scn, int step, const Tolerances & tol)
{
  const auto trapezes = decompose(scn.road, tol.eps_strict);
  const auto boxes = inflated_boxes(scn, step);
  return partition_free_space(trapezes, boxes, step, tol);
}

std::optional<Signature> locate(std::span<const CellSlice> cells, const Vec2 & z, double tol)
{
  for (const auto & cell : cells) {
    if (cell.poly.contains(z, tol)) { return cell.signature; }
  }
  return std::nullopt;
}

}  // namespace stpart
