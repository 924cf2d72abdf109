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

#include "stpart/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace stpart {

std::string_view to_string(QpStatus status)
{
  switch (status) {
    case QpStatus::kOptimal: return "optimal";
    case QpStatus::kInfeasible: return "infeasible";
    case QpStatus::kIterationLimit: return "iteration_limit";
    case QpStatus::kNumericalError: return "numerical_error";
  }
  return "unknown";
}

KktResiduals kkt_residuals(const DenseQp & qp, const Eigen::VectorXd & x, const Eigen::VectorXd & y)
{
  KktResiduals r;
  if (qp.G.rows() > 0) {
    r.primal = std::max(0.0, (qp.G * x - qp.h).maxCoeff());
    r.dual_sign = std::max(0.0, -y.minCoeff());
  }
  const Eigen::VectorXd grad = qp.H * x + qp.g;
  const Eigen::VectorXd stat = qp.G.rows() > 0 ? Eigen::VectorXd(grad + qp.G.transpose() * y) : grad;
  r.dual = stat.size() > 0 ? stat.cwiseAbs().maxCoeff() : 0.0;
  // primal - dual objective = x'Hx + g'x + h'y when stationarity holds.
  const double hy = qp.G.rows() > 0 ? qp.h.dot(y) : 0.0;
  r.gap = std::abs(x.dot(qp.H * x) + qp.g.dot(x) + hy);
  return r;
}

namespace {

double max_step(const Eigen::VectorXd & v, const Eigen::VectorXd & dv)
{
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) { alpha = std::min(alpha, -v(i) / dv(i)); }
  }
  return alpha;
}

struct Core
{
  QpStatus status = QpStatus::kNumericalError;
  Eigen::VectorXd x, y;
  int iterations = 0;
};

// Interior-point iterations on a problem whose rows all have unit norm.
Core interior_point(const DenseQp & qp, const QpSettings & settings)
{
  const Eigen::Index n = qp.H.rows();
  const Eigen::Index m = qp.G.rows();
  Core out;
  out.x = Eigen::VectorXd::Zero(n);
  out.y = Eigen::VectorXd::Zero(m);

  const double reg = 1e-11;
  if (m == 0) {
    Eigen::MatrixXd K = qp.H;
    K.diagonal().array() += reg;
    out.x = K.ldlt().solve(-qp.g);
    out.status = out.x.allFinite() ? QpStatus::kOptimal : QpStatus::kNumericalError;
    return out;
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd s = (qp.h - qp.G * x).cwiseMax(1.0);
  Eigen::VectorXd y = Eigen::VectorXd::Ones(m);
  const Eigen::MatrixXd Gt = qp.G.transpose();

  Eigen::VectorXd best_x = x, best_y = y;
  double best_err = std::numeric_limits<double>::infinity();

  for (int it = 0; it < settings.max_iter; ++it) {
    out.iterations = it + 1;
    const Eigen::VectorXd rd = qp.H * x + qp.g + Gt * y;
    const Eigen::VectorXd rp = qp.G * x + s - qp.h;
    const double sy = s.dot(y);
    const double mu = sy / static_cast<double>(m);
    const double obj = 0.5 * x.dot(qp.H * x) + qp.g.dot(x);

    const double err_p = rp.cwiseAbs().maxCoeff();
    const double err_d = rd.cwiseAbs().maxCoeff();
    const double err_c = sy / (1.0 + std::abs(obj));
    const double err = std::max({err_p, err_d, err_c});
    if (err < best_err) {
      best_err = err;
      best_x = x;
      best_y = y;
    }
    if (err <= settings.tol) {
      out.status = QpStatus::kOptimal;
      out.x = x;
      out.y = y;
      return out;
    }

    // Farkas direction: y >= 0, G'y ~ 0, h'y < 0 certifies Gx <= h empty.
    const double ymax = y.maxCoeff();
    if (ymax > 1e6) {
      const Eigen::VectorXd yn = y / ymax;
      if ((Gt * yn).cwiseAbs().maxCoeff() < 1e-9 && qp.h.dot(yn) < -1e-7) {
        out.status = QpStatus::kInfeasible;
        out.x = x;
        out.y = yn;
        return out;
      }
    }

    const Eigen::VectorXd d = y.cwiseQuotient(s);
    Eigen::MatrixXd K = qp.H;
    K.noalias() += Gt * d.asDiagonal() * qp.G;
    K.diagonal().array() += reg;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
    if (ldlt.info() != Eigen::Success) { break; }

    auto newton = [&](const Eigen::VectorXd & rc, Eigen::VectorXd & dx, Eigen::VectorXd & ds, Eigen::VectorXd & dy) {
      const Eigen::VectorXd t = (-rc + y.cwiseProduct(rp)).cwiseQuotient(s);
      dx = ldlt.solve(-rd - Gt * t);
      ds = -rp - qp.G * dx;
      dy = (-rc - y.cwiseProduct(ds)).cwiseQuotient(s);
    };

    Eigen::VectorXd dx, ds, dy;
    const Eigen::VectorXd rc_aff = s.cwiseProduct(y);
    newton(rc_aff, dx, ds, dy);
    const double a_aff = std::min(max_step(s, ds), max_step(y, dy));
    const double mu_aff = (s + a_aff * ds).dot(y + a_aff * dy) / static_cast<double>(m);
    const double sigma = std::pow(mu_aff / mu, 3.0);

    const Eigen::VectorXd rc = rc_aff + ds.cwiseProduct(dy) - Eigen::VectorXd::Constant(m, sigma * mu);
    newton(rc, dx, ds, dy);
    const double alpha = std::min(1.0, 0.99 * std::min(max_step(s, ds), max_step(y, dy)));
    if (!dx.allFinite() || !dy.allFinite()) { break; }
    x += alpha * dx;
    s += alpha * ds;
    y += alpha * dy;
    if (alpha < 1e-12) { break; }
  }

  out.x = best_x;
  out.y = best_y;
  out.status = best_err <= settings.accept_tol ? QpStatus::kOptimal : QpStatus::kIterationLimit;
  return out;
}

// Phase 1: min t  s.t.  Gx - t <= h,  t >= -1.  Empty iff t* > 0.
bool certify_infeasible(const DenseQp & qp, const QpSettings & settings)
{
  const Eigen::Index n = qp.H.rows();
  const Eigen::Index m = qp.G.rows();
  DenseQp lp;
  lp.H = Eigen::MatrixXd::Zero(n + 1, n + 1);
  lp.g = Eigen::VectorXd::Zero(n + 1);
  lp.g(n) = 1.0;
  lp.G = Eigen::MatrixXd::Zero(m + 1, n + 1);
  lp.G.topLeftCorner(m, n) = qp.G;
  lp.G.col(n).head(m).setConstant(-1.0);
  lp.G(m, n) = -1.0;
  lp.h.resize(m + 1);
  lp.h.head(m) = qp.h;
  lp.h(m) = 1.0;
  QpSettings relaxed = settings;
  relaxed.max_iter = 4 * settings.max_iter;
  const Core c = interior_point(lp, relaxed);
  return c.status == QpStatus::kOptimal && c.x(n) > 10.0 * settings.accept_tol;
}

}  // namespace

QpResult solve_qp(const DenseQp & qp, const QpSettings & settings)
{
  const Eigen::Index n = qp.H.rows();
  const Eigen::Index m = qp.G.rows();
  QpResult result;

  // Drop constant rows and scale the rest to unit norm.
  std::vector<Eigen::Index> kept;
  std::vector<double> scale;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double norm = qp.G.row(i).norm();
    if (norm == 0.0) {
      if (qp.h(i) < -settings.accept_tol) {
        result.status = QpStatus::kInfeasible;
        result.x = Eigen::VectorXd::Zero(n);
        result.y = Eigen::VectorXd::Zero(m);
        result.y(i) = 1.0;
        return result;
      }
      continue;
    }
    kept.push_back(i);
    scale.push_back(norm);
  }

  DenseQp scaled;
  scaled.H = qp.H;
  scaled.g = qp.g;
  scaled.G.resize(static_cast<Eigen::Index>(kept.size()), n);
  scaled.h.resize(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    scaled.G.row(static_cast<Eigen::Index>(k)) = qp.G.row(kept[k]) / scale[k];
    scaled.h(static_cast<Eigen::Index>(k)) = qp.h(kept[k]) / scale[k];
  }

  const Core core = interior_point(scaled, settings);
  result.iterations = core.iterations;
  result.x = core.x;
  result.y = Eigen::VectorXd::Zero(m);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    result.y(kept[k]) = core.y(static_cast<Eigen::Index>(k)) / scale[k];
  }
  result.status = core.status;

  if (core.status == QpStatus::kIterationLimit || core.status == QpStatus::kNumericalError) {
    if (certify_infeasible(scaled, settings)) { result.status = QpStatus::kInfeasible; }
  }
  if (result.status == QpStatus::kOptimal) {
    result.objective = 0.5 * result.x.dot(qp.H * result.x) + qp.g.dot(result.x);
    result.residuals = kkt_residuals(qp, result.x, result.y);
  }
  return result;
}

}  // namespace stpart
