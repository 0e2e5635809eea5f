// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "hris/qp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace hris {

RVector project_simplex(const RVector& v) {
  const Index n = v.size();
  if (n == 0) return v;
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (Index k = 0; k < n; ++k) {
    cumsum += u[static_cast<std::size_t>(k)];
    const double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (u[static_cast<std::size_t>(k)] - t > 0.0) tau = t;
  }
  return (v.array() - tau).cwiseMax(0.0);
}

RVector project_box_ball(const RVector& v, const RVector& weights, double budget) {
  if (weights.size() != v.size()) throw ContractViolation("project_box_ball: size mismatch");
  if (!(budget > 0.0) || (weights.array() <= 0.0).any()) {
    throw ContractViolation("project_box_ball: weights and budget must be positive");
  }
  auto clamp_at = [&](double lambda) -> RVector {
    return (v.array() / (1.0 + 2.0 * lambda * weights.array())).cwiseMax(0.0).cwiseMin(1.0);
  };
  auto load = [&](const RVector& x) { return weights.dot(x.cwiseAbs2()); };

  RVector x = clamp_at(0.0);
  if (load(x) <= budget) return x;

  double lo = 0.0;
  double hi = 1.0 / weights.maxCoeff();
  int expand = 0;
  while (load(clamp_at(hi)) > budget) {
    hi *= 2.0;
    if (++expand > 2000) throw ToleranceError("project_box_ball: cannot bracket multiplier");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (load(clamp_at(mid)) > budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return clamp_at(hi);
}

namespace {

// Projection onto {0 <= y <= 1, 1^T y <= 1}.
RVector project_capped(const RVector& y) {
  RVector c = y.cwiseMax(0.0).cwiseMin(1.0);
  if (c.sum() <= 1.0) return c;
  return project_simplex(y);
}

RVector project_rows(const RVector& v, Index rows, Index cols) {
  RVector out(v.size());
  for (Index i = 0; i < rows; ++i) out.segment(i * cols, cols) = project_simplex(v.segment(i * cols, cols));
  return out;
}

RVector project_columns(const RVector& v, Index rows, Index cols) {
  RVector out(v.size());
  RVector column(rows);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) column(i) = v(i * cols + j);
    const RVector p = project_capped(column);
    for (Index i = 0; i < rows; ++i) out(i * cols + j) = p(i);
  }
  return out;
}

double assignment_violation(const RVector& x, Index rows, Index cols) {
  double worst = std::max(0.0, -x.minCoeff());
  worst = std::max(worst, x.maxCoeff() - 1.0);
  for (Index i = 0; i < rows; ++i) worst = std::max(worst, std::abs(x.segment(i * cols, cols).sum() - 1.0));
  for (Index j = 0; j < cols; ++j) {
    double s = 0.0;
    for (Index i = 0; i < rows; ++i) s += x(i * cols + j);
    worst = std::max(worst, s - 1.0);
  }
  return worst;
}

}  // namespace

RVector project_block_simplex(const RVector& v, Index blocks, Index block_len) {
  if (v.size() != blocks * block_len) throw ContractViolation("project_block_simplex: size mismatch");
  return project_rows(v, blocks, block_len);
}

RVector project_assignment(const RVector& v, Index rows, Index cols, ProjectionReport* report) {
  if (v.size() != rows * cols) throw ContractViolation("project_assignment: size mismatch");
  if (rows > cols) throw ContractViolation("project_assignment: more rows than columns is infeasible");
  ProjectionReport local;
  if (assignment_violation(v, rows, cols) <= 1e-12) {
    if (report) *report = local;
    return v;
  }
  RVector x = v;
  RVector p = RVector::Zero(v.size());
  RVector q = RVector::Zero(v.size());
  local.converged = false;
  for (int sweep = 1; sweep <= 500; ++sweep) {
    const RVector y = project_rows(x + p, rows, cols);
    p = x + p - y;
    const RVector x_next = project_columns(y + q, rows, cols);
    q = y + q - x_next;
    local.change = (x_next - x).norm();
    local.sweeps = sweep;
    x = x_next;
    if (local.change <= 1e-8 && (y - x).norm() <= 1e-8) {
      local.converged = true;
      break;
    }
  }
  if (report) *report = local;
  return x;
}

RVector project(const QpConstraint& constraint, const RVector& v) {
  return std::visit(
      [&](const auto& c) -> RVector {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, BoxBall>) {
          return project_box_ball(v, c.weights, c.budget);
        } else if constexpr (std::is_same_v<T, AssignmentPolytope>) {
          return project_assignment(v, c.rows, c.cols);
        } else {
          return project_block_simplex(v, c.blocks, c.block_len);
        }
      },
      constraint);
}

double infeasibility(const QpConstraint& constraint, const RVector& x) {
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, BoxBall>) {
          double worst = std::max(0.0, -x.minCoeff());
          worst = std::max(worst, x.maxCoeff() - 1.0);
          return std::max(worst, c.weights.dot(x.cwiseAbs2()) - c.budget);
        } else if constexpr (std::is_same_v<T, AssignmentPolytope>) {
          return assignment_violation(x, c.rows, c.cols);
        } else {
          double worst = std::max(0.0, -x.minCoeff());
          for (Index i = 0; i < c.blocks; ++i) {
            worst = std::max(worst, std::abs(x.segment(i * c.block_len, c.block_len).sum() - 1.0));
          }
          return worst;
        }
      },
      constraint);
}

double qp_objective(const QpProblem& problem, const RVector& x) {
  return x.dot(problem.hessian * x) + problem.linear.dot(x);
}

namespace {

double largest_eigenvalue(const RMatrix& h) {
  const Index n = h.rows();
  if (n == 0) return 0.0;
  RVector x(n);
  for (Index i = 0; i < n; ++i) x(i) = 1.0 + 0.01 * static_cast<double>(i % 7);
  x.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 30; ++it) {
    const RVector y = h * x;
    const double norm = y.norm();
    if (!(norm > 0.0)) return 0.0;
    lambda = x.dot(y);
    x = y / norm;
  }
  return std::max(lambda, (h * x).norm());
}

}  // namespace

QpSolution solve_qp(const QpProblem& problem, const RVector& x0, double tol, int max_iter) {
  const Index n = problem.linear.size();
  if (problem.hessian.rows() != n || problem.hessian.cols() != n || x0.size() != n) {
    throw ContractViolation("solve_qp: dimension mismatch");
  }
  const RMatrix& h = problem.hessian;
  const RVector& c = problem.linear;
  auto grad = [&](const RVector& x) -> RVector { return 2.0 * (h * x) + c; };
  auto objective = [&](const RVector& x) { return x.dot(h * x) + c.dot(x); };
  auto residual = [&](const RVector& x) { return (x - project(problem.constraint, x - grad(x))).norm(); };

  double lip = 2.05 * largest_eigenvalue(h);
  lip = std::max(lip, 1e-12 * std::max(1.0, c.norm()));

  QpSolution out;
  RVector x = infeasibility(problem.constraint, x0) > 1e-9 ? project(problem.constraint, x0) : x0;
  double fx = objective(x);
  RVector y = x;
  double t = 1.0;
  out.kkt_residual = residual(x);
  if (out.kkt_residual <= tol) {
    out.x = x;
    out.objective = fx;
    out.converged = true;
    return out;
  }

  int it = 0;
  while (it < max_iter) {
    ++it;
    RVector x_next = project(problem.constraint, y - grad(y) / lip);
    double f_next = objective(x_next);
    if (f_next > fx) {
      // Momentum overshot: restart from x with a plain projected-gradient step.
      t = 1.0;
      x_next = project(problem.constraint, x - grad(x) / lip);
      f_next = objective(x_next);
      if (f_next > fx + 1e-14 * std::abs(fx)) {
        lip *= 2.0;
        y = x;
        continue;
      }
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_next + ((t - 1.0) / t_next) * (x_next - x);
    const bool stalled = (x_next - x).norm() <= 1e-15 * std::max(1.0, x.norm());
    x = std::move(x_next);
    fx = f_next;
    t = t_next;
    if (it % 4 == 0 || stalled || it == max_iter) {
      out.kkt_residual = residual(x);
      if (out.kkt_residual <= tol) {
        out.converged = true;
        break;
      }
      if (stalled) y = x;
    }
  }
  out.x = std::move(x);
  out.objective = fx;
  out.iterations = it;
  return out;
}

}  // namespace hris
