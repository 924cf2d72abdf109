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

#ifndef STPART_OPTIMIZER_HPP_
#define STPART_OPTIMIZER_HPP_

/**
 * @file
 * @brief Convex trajectory problem for a fixed signature path.
 *
 * Decision vector z = [x_0 .. x_K, u_0 .. u_{K-1}] with x = (s, r, sdot, rdot)
 * and u = (a_lon, a_lat). K is the number of steps covered, which is P for a
 * full path and smaller for the prefixes used as search bounds.
 */

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stpart/qp_solver.hpp"
#include "stpart/scenario.hpp"
#include "stpart/spacetime_graph.hpp"

namespace stpart {

/// Path does not fit the graph, or x_0 is outside the first cell.
class AssemblyError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

using Control = Eigen::Vector2d;

/// Zero-order-hold double integrator in s and r.
struct DiscreteDynamics
{
  double tau = 1.0;
  Eigen::Matrix4d A = Eigen::Matrix4d::Identity();
  Eigen::Matrix<double, 4, 2> B = Eigen::Matrix<double, 4, 2>::Zero();

  static DiscreteDynamics double_integrator(double tau);

  EgoState step(const EgoState & x, const Control & u) const { return A * x + B * u; }
};

/// kCell binds x_p to sigma_p at layer p; kCellCarry binds x_{p+1} to
/// sigma_{p+1} at layer p.
enum class RowKind : std::uint8_t { kControl, kSlip, kForward, kCell, kCellCarry };

struct TrajectoryQP
{
  /// Steps K covered by the problem.
  int horizon = 0;
  DiscreteDynamics dynamics;
  EgoState x0 = EgoState::Zero();
  /// Signatures for steps 0..K.
  SignaturePath path;

  /// Cost 1/2 z'Qz + L'z + constant.
  Eigen::MatrixXd Q;
  Eigen::VectorXd L;
  double constant = 0.0;

  /// Initial state and dynamics: Aeq z = beq.
  Eigen::MatrixXd Aeq;
  Eigen::VectorXd beq;

  /// Inequalities C z <= d, with the kind and step of every row.
  Eigen::MatrixXd C;
  Eigen::VectorXd d;
  std::vector<RowKind> kinds;
  std::vector<int> row_steps;

  Eigen::Index num_variables() const { return 4 * (horizon + 1) + 2 * horizon; }
  Eigen::Index state_offset(int p) const { return 4 * p; }
  Eigen::Index control_offset(int p) const { return 4 * (horizon + 1) + 2 * p; }

  double objective(const Eigen::VectorXd & z) const;
};

/// Full-horizon problem. Throws AssemblyError when the path is not a graph path.
TrajectoryQP assemble(const Scenario & scn, const TransitionGraph & graph, const SignaturePath & path);

/**
 * @brief Problem restricted to steps 0..prefix.size()-1 with a free terminal state.
 *
 * Only the stage costs of the covered steps are included, so its optimum is a
 * lower bound on every completion of the prefix.
 */
TrajectoryQP assemble_prefix(
  const Scenario & scn, const TransitionGraph & graph, const std::vector<Signature> & prefix);

/// Controls-only form: z = gamma * u + offset.
struct CondensedQp
{
  DenseQp qp;
  Eigen::MatrixXd gamma;
  Eigen::VectorXd offset;
  double constant = 0.0;
};

CondensedQp condense(const TrajectoryQP & qp);

struct Trajectory
{
  double tau = 1.0;
  std::vector<EgoState> states;
  std::vector<Control> controls;
  double cost = 0.0;
  SignaturePath path;
};

struct SolveOutcome
{
  QpStatus status = QpStatus::kNumericalError;
  std::optional<Trajectory> trajectory;
  KktResiduals residuals;
  int iterations = 0;

  bool optimal() const { return status == QpStatus::kOptimal; }
};

SolveOutcome solve(const TrajectoryQP & qp, const QpSettings & settings = {});

/// Rolls the dynamics forward from the initial state.
Trajectory rollout(const TrajectoryQP & qp, const std::vector<Control> & controls);

struct CheckResult
{
  std::string name;
  bool passed = true;
  int violations = 0;
  /// Largest violation seen (0 when none).
  double worst = 0.0;
};

struct ValidationOptions
{
  /// Interior samples per step.
  int samples = 9;
  /// Slack on every check; absorbs the eps_strict gaps between cells.
  double tol = 1e-5;
};

struct ValidationReport
{
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult * find(const std::string & name) const;
};

/**
 * @brief Post-hoc checks of a full trajectory.
 *
 * Checks: dynamics, endpoint_in_cell, interpolation, road, slip, control,
 * forward. Interior positions of step p follow the constant-acceleration
 * motion and must lie in the union of the cells of sigma_p and sigma_{p+1}
 * taken at layer p.
 */
ValidationReport validate_trajectory(
  const Scenario & scn, const TransitionGraph & graph, const Trajectory & traj,
  const ValidationOptions & options = {});

}  // namespace stpart

#endif  // STPART_OPTIMIZER_HPP_
