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

#ifndef STPART_QP_SOLVER_HPP_
#define STPART_QP_SOLVER_HPP_

/**
 * @file
 * @brief Dense convex QP solver (primal-dual interior point).
 *
 *   minimize 1/2 x'Hx + g'x  subject to  Gx <= h
 */

#include <Eigen/Dense>

#include <string_view>

namespace stpart {

struct DenseQp
{
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
};

enum class QpStatus { kOptimal, kInfeasible, kIterationLimit, kNumericalError };

std::string_view to_string(QpStatus status);

struct QpSettings
{
  /// Newton iterations before falling back to the phase-1 certificate.
  int max_iter = 100;
  /// Target for primal/dual residuals and s'y.
  double tol = 1e-9;
  /// Looser bound accepted when progress stalls before `tol`.
  double accept_tol = 1e-6;
};

struct KktResiduals
{
  /// max(Gx - h, 0), inf-norm
  double primal = 0.0;
  /// Hx + g + G'y, inf-norm
  double dual = 0.0;
  /// primal objective minus Lagrange dual objective
  double gap = 0.0;
  /// min(y) clipped at zero (nonnegativity violation)
  double dual_sign = 0.0;
};

struct QpResult
{
  QpStatus status = QpStatus::kNumericalError;
  Eigen::VectorXd x;
  /// Multipliers of Gx <= h (>= 0).
  Eigen::VectorXd y;
  double objective = 0.0;
  KktResiduals residuals;
  int iterations = 0;
};

KktResiduals kkt_residuals(const DenseQp & qp, const Eigen::VectorXd & x, const Eigen::VectorXd & y);

QpResult solve_qp(const DenseQp & qp, const QpSettings & settings = {});

}  // namespace stpart

#endif  // STPART_QP_SOLVER_HPP_
