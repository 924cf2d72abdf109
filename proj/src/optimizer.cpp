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

#include "stpart/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stpart {

DiscreteDynamics DiscreteDynamics::double_integrator(double tau)
{
  DiscreteDynamics d;
  d.tau = tau;
  d.A = Eigen::Matrix4d::Identity();
  d.A(0, 2) = tau;
  d.A(1, 3) = tau;
  d.B.setZero();
  d.B(0, 0) = 0.5 * tau * tau;
  d.B(1, 1) = 0.5 * tau * tau;
  d.B(2, 0) = tau;
  d.B(3, 1) = tau;
  return d;
}

double TrajectoryQP::objective(const Eigen::VectorXd & z) const
{
  return 0.5 * z.dot(Q * z) + L.dot(z) + constant;
}

namespace {

const CellSlice & cell_at(const TransitionGraph & graph, int p, const Signature & sig)
{
  const auto idx = graph.find(p, sig);
  if (!idx) { throw AssemblyError("signature " + sig.str() + " has no cell at step " + std::to_string(p)); }
  return graph.layer(p)[static_cast<std::size_t>(*idx)];
}

TrajectoryQP build(const Scenario & scn, const TransitionGraph & graph, const std::vector<Signature> & sigs)
{
  if (sigs.empty()) { throw AssemblyError("empty signature path"); }
  const int K = static_cast<int>(sigs.size()) - 1;
  if (K > graph.steps()) { throw AssemblyError("signature path longer than the horizon"); }
  for (int p = 0; p < K; ++p) {
    const auto a = graph.find(p, sigs[static_cast<std::size_t>(p)]);
    const auto b = graph.find(p + 1, sigs[static_cast<std::size_t>(p) + 1]);
    if (!a || !b) { throw AssemblyError("signature path leaves the graph at step " + std::to_string(p)); }
    const auto & succ = graph.successors(p, *a);
    if (std::find(succ.begin(), succ.end(), *b) == succ.end()) {
      throw AssemblyError("no edge between steps " + std::to_string(p) + " and " + std::to_string(p + 1));
    }
  }

  const CellSlice & first = cell_at(graph, 0, sigs.front());
  const Vec2 z0 = scn.ego.initial.head<2>();
  if (!first.poly.contains(z0, kEpsLp + kEpsStrict)) {
    throw AssemblyError("initial position is outside cell " + sigs.front().str());
  }

  TrajectoryQP qp;
  qp.horizon = K;
  qp.dynamics = DiscreteDynamics::double_integrator(scn.tau);
  qp.x0 = scn.ego.initial;
  qp.path.steps = sigs;

  const Eigen::Index n = qp.num_variables();
  qp.Q = Eigen::MatrixXd::Zero(n, n);
  qp.L = Eigen::VectorXd::Zero(n);
  for (int p = 0; p <= K; ++p) {
    const Eigen::Index o = qp.state_offset(p);
    qp.Q(o + 1, o + 1) = 2.0;  // r^2
    qp.Q(o + 2, o + 2) = 2.0;  // (sdot - ref)^2
    qp.Q(o + 3, o + 3) = 2.0;  // rdot^2
    qp.L(o + 2) = -2.0 * scn.ref_speed;
  }
  qp.constant = (K + 1) * scn.ref_speed * scn.ref_speed;

  qp.Aeq = Eigen::MatrixXd::Zero(4 * (K + 1), n);
  qp.beq = Eigen::VectorXd::Zero(4 * (K + 1));
  qp.Aeq.block(0, 0, 4, 4).setIdentity();
  qp.beq.head<4>() = qp.x0;
  for (int p = 0; p < K; ++p) {
    const Eigen::Index r = 4 * (p + 1);
    qp.Aeq.block(r, qp.state_offset(p + 1), 4, 4).setIdentity();
    qp.Aeq.block(r, qp.state_offset(p), 4, 4) = -qp.dynamics.A;
    qp.Aeq.block(r, qp.control_offset(p), 4, 2) = -qp.dynamics.B;
  }

  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  auto push = [&](RowKind kind, int step, Eigen::RowVectorXd row, double b) {
    rows.push_back(std::move(row));
    rhs.push_back(b);
    qp.kinds.push_back(kind);
    qp.row_steps.push_back(step);
  };

  for (int p = 0; p < K; ++p) {
    const Eigen::Index o = qp.control_offset(p);
    const double bounds[2] = {scn.bounds.a_lon_max, scn.bounds.a_lat_max};
    for (int j = 0; j < 2; ++j) {
      for (double sign : {1.0, -1.0}) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
        row(o + j) = sign;
        push(RowKind::kControl, p, row, bounds[j]);
      }
    }
  }
  for (int p = 1; p <= K; ++p) {
    const Eigen::Index o = qp.state_offset(p);
    for (double sign : {1.0, -1.0}) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
      row(o + 3) = sign;
      row(o + 2) = -scn.alpha;
      push(RowKind::kSlip, p, row, 0.0);
    }
    Eigen::RowVectorXd fwd = Eigen::RowVectorXd::Zero(n);
    fwd(o + 2) = -1.0;
    push(RowKind::kForward, p, fwd, 0.0);
  }
  for (int p = 0; p <= K; ++p) {
    const CellSlice & cell = cell_at(graph, p, sigs[static_cast<std::size_t>(p)]);
    const Eigen::Index o = qp.state_offset(p);
    for (const auto & h : cell.poly.rows()) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
      row(o) = h.normal.x();
      row(o + 1) = h.normal.y();
      push(RowKind::kCell, p, row, h.offset);
    }
  }
  // The interval [theta_p, theta_{p+1}) is covered by layer p, so its right
  // end must also lie in the closure of sigma_{p+1} at layer p.
  for (int p = 0; p < K; ++p) {
    const CellSlice & cell = cell_at(graph, p, sigs[static_cast<std::size_t>(p) + 1]);
    const Eigen::Index o = qp.state_offset(p + 1);
    for (const auto & h : cell.poly.rows()) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
      row(o) = h.normal.x();
      row(o + 1) = h.normal.y();
      push(RowKind::kCellCarry, p + 1, row, h.offset);
    }
  }

  qp.C.resize(static_cast<Eigen::Index>(rows.size()), n);
  qp.d.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    qp.C.row(static_cast<Eigen::Index>(i)) = rows[i];
    qp.d(static_cast<Eigen::Index>(i)) = rhs[i];
  }
  return qp;
}

}  // namespace

TrajectoryQP assemble(const Scenario & scn, const TransitionGraph & graph, const SignaturePath & path)
{
  if (static_cast<int>(path.steps.size()) != graph.steps() + 1) {
    throw AssemblyError("signature path must have one entry per step 0..P");
  }
  return build(scn, graph, path.steps);
}

TrajectoryQP assemble_prefix(
  const Scenario & scn, const TransitionGraph & graph, const std::vector<Signature> & prefix)
{
  return build(scn, graph, prefix);
}

CondensedQp condense(const TrajectoryQP & qp)
{
  const int K = qp.horizon;
  const Eigen::Index n = qp.num_variables();
  const Eigen::Index m = 2 * K;

  CondensedQp out;
  out.gamma = Eigen::MatrixXd::Zero(n, m);
  out.offset = Eigen::VectorXd::Zero(n);

  // x_p = A x_{p-1} + B u_{p-1}, accumulated block by block.
  out.offset.head<4>() = qp.x0;
  for (int p = 1; p <= K; ++p) {
    const Eigen::Index cur = qp.state_offset(p);
    const Eigen::Index prev = qp.state_offset(p - 1);
    out.offset.segment<4>(cur) = qp.dynamics.A * out.offset.segment<4>(prev);
    out.gamma.block(cur, 0, 4, m) = qp.dynamics.A * out.gamma.block(prev, 0, 4, m);
    out.gamma.block(cur, 2 * (p - 1), 4, 2) += qp.dynamics.B;
  }
  for (int p = 0; p < K; ++p) {
    out.gamma.block(qp.control_offset(p), 2 * p, 2, 2).setIdentity();
  }

  const Eigen::MatrixXd QG = qp.Q * out.gamma;
  out.qp.H = out.gamma.transpose() * QG;
  out.qp.H = 0.5 * (out.qp.H + out.qp.H.transpose());
  out.qp.g = out.gamma.transpose() * (qp.Q * out.offset + qp.L);
  out.constant = 0.5 * out.offset.dot(qp.Q * out.offset) + qp.L.dot(out.offset) + qp.constant;
  out.qp.G = qp.C * out.gamma;
  out.qp.h = qp.d - qp.C * out.offset;
  return out;
}

Trajectory rollout(const TrajectoryQP & qp, const std::vector<Control> & controls)
{
  Trajectory t;
  t.tau = qp.dynamics.tau;
  t.path = qp.path;
  t.controls = controls;
  t.states.reserve(controls.size() + 1);
  t.states.push_back(qp.x0);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(qp.num_variables());
  z.head<4>() = qp.x0;
  for (std::size_t p = 0; p < controls.size(); ++p) {
    t.states.push_back(qp.dynamics.step(t.states.back(), controls[p]));
  }
  for (std::size_t p = 0; p < t.states.size() && static_cast<int>(p) <= qp.horizon; ++p) {
    z.segment<4>(qp.state_offset(static_cast<int>(p))) = t.states[p];
  }
  for (std::size_t p = 0; p < controls.size() && static_cast<int>(p) < qp.horizon; ++p) {
    z.segment<2>(qp.control_offset(static_cast<int>(p))) = controls[p];
  }
  t.cost = qp.objective(z);
  return t;
}

SolveOutcome solve(const TrajectoryQP & qp, const QpSettings & settings)
{
  SolveOutcome out;
  const CondensedQp cqp = condense(qp);

  if (qp.horizon == 0) {
    // Nothing to optimize: the only question is whether x_0 meets its rows.
    const double worst = qp.C.rows() > 0 ? (qp.C * cqp.offset - qp.d).maxCoeff() : 0.0;
    out.status = worst <= settings.accept_tol ? QpStatus::kOptimal : QpStatus::kInfeasible;
    if (out.optimal()) { out.trajectory = rollout(qp, {}); }
    return out;
  }

  const QpResult res = solve_qp(cqp.qp, settings);
  out.status = res.status;
  out.iterations = res.iterations;
  if (!out.optimal()) { return out; }
  out.residuals = res.residuals;

  std::vector<Control> controls(static_cast<std::size_t>(qp.horizon));
  for (int p = 0; p < qp.horizon; ++p) { controls[static_cast<std::size_t>(p)] = res.x.segment<2>(2 * p); }
  out.trajectory = rollout(qp, controls);
  return out;
}

bool ValidationReport::passed() const
{
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult & c) { return c.passed; });
}

const CheckResult * ValidationReport::find(const std::string & name) const
{
  for (const auto & c : checks) {
    if (c.name == name) { return &c; }
  }
  return nullptr;
}

namespace {

void record(CheckResult & c, double violation, double tol)
{
  if (violation > tol) {
    c.passed = false;
    ++c.violations;
  }
  c.worst = std::max(c.worst, std::max(0.0, violation));
}

double road_violation(const RoadModel & road, const Vec2 & z)
{
  const double s = std::clamp(z.x(), road.s_min(), road.s_max());
  double v = std::max(road.s_min() - z.x(), z.x() - road.s_max());
  v = std::max(v, road.r_min(s) - z.y());
  v = std::max(v, z.y() - road.r_max(s));
  return v;
}

}  // namespace

ValidationReport validate_trajectory(
  const Scenario & scn, const TransitionGraph & graph, const Trajectory & traj, const ValidationOptions & options)
{
  CheckResult dynamics{"dynamics"}, endpoint{"endpoint_in_cell"}, interp{"interpolation"}, road{"road"},
    slip{"slip"}, control{"control"}, forward{"forward"};
  const double tol = options.tol;
  const int P = static_cast<int>(traj.controls.size());
  const auto dyn = DiscreteDynamics::double_integrator(traj.tau);

  auto poly_of = [&](int layer, const Signature & sig) -> const Polyhedron * {
    if (layer < 0 || layer > graph.steps()) { return nullptr; }
    const auto idx = graph.find(layer, sig);
    return idx ? &graph.layer(layer)[static_cast<std::size_t>(*idx)].poly : nullptr;
  };
  auto violation_in = [&](const Polyhedron * poly, const Vec2 & z) {
    return poly ? poly->max_violation(z) : std::numeric_limits<double>::infinity();
  };

  const bool shape_ok = static_cast<int>(traj.states.size()) == P + 1 &&
                        traj.path.steps.size() == traj.states.size();
  if (!shape_ok) {
    dynamics.passed = false;
    dynamics.violations = 1;
  }

  for (int p = 0; p <= P && shape_ok; ++p) {
    const EgoState & x = traj.states[static_cast<std::size_t>(p)];
    const Vec2 z = x.head<2>();
    const Signature & sig = traj.path.steps[static_cast<std::size_t>(p)];
    record(endpoint, violation_in(poly_of(p, sig), z), tol);
    record(road, road_violation(scn.road, z), tol);
    if (p >= 1) {
      record(slip, std::abs(x(3)) - scn.alpha * x(2), tol);
      record(forward, -x(2), tol);
    }
    if (p == P) { break; }

    const Control & u = traj.controls[static_cast<std::size_t>(p)];
    record(control, std::abs(u(0)) - scn.bounds.a_lon_max, tol);
    record(control, std::abs(u(1)) - scn.bounds.a_lat_max, tol);
    const EgoState next = dyn.step(x, u);
    record(dynamics, (next - traj.states[static_cast<std::size_t>(p) + 1]).cwiseAbs().maxCoeff(), 1e-6);

    const Polyhedron * here = poly_of(p, sig);
    const Polyhedron * there = poly_of(p, traj.path.steps[static_cast<std::size_t>(p) + 1]);
    for (int k = 1; k <= options.samples; ++k) {
      const double t = traj.tau * k / (options.samples + 1);
      const Vec2 zt = z + t * x.tail<2>() + 0.5 * t * t * u;
      record(interp, std::min(violation_in(here, zt), violation_in(there, zt)), tol);
      record(road, road_violation(scn.road, zt), tol);
    }
  }

  ValidationReport report;
  report.checks = {dynamics, endpoint, interp, road, slip, control, forward};
  return report;
}

}  // namespace stpart
