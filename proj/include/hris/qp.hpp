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

#ifndef HRIS_QP_HPP
#define HRIS_QP_HPP

#include <functional>
#include <stdexcept>
#include <variant>

#include "hris/numerics.hpp"

namespace hris {

/// {0 <= x <= 1} intersected with {sum_i weights_i x_i^2 <= budget}.
struct BoxBall {
  RVector weights;
  double budget = 0.0;
};

/// rows x cols assignment polytope, x = vec(A^T): every row block lies on the
/// simplex and every column sums to at most one.
struct AssignmentPolytope {
  Index rows = 0;
  Index cols = 0;
};

/// `blocks` consecutive simplices of length `block_len`.
struct BlockSimplex {
  Index blocks = 0;
  Index block_len = 0;
};

using QpConstraint = std::variant<BoxBall, AssignmentPolytope, BlockSimplex>;

/// minimize x^T hessian x + linear^T x subject to `constraint`.
struct QpProblem {
  RMatrix hessian;
  RVector linear;
  QpConstraint constraint;
};

struct QpSolution {
  RVector x;
  double objective = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
  bool converged = false;
};

class ToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProjectionReport {
  int sweeps = 0;
  bool converged = true;
  double change = 0.0;
};

/// Euclidean projection onto {x >= 0, 1^T x = 1}.
RVector project_simplex(const RVector& v);

/// Euclidean projection onto BoxBall by bisection on the ball multiplier.
/// Throws ToleranceError if the multiplier cannot be bracketed.
RVector project_box_ball(const RVector& v, const RVector& weights, double budget);

/// Dykstra projection onto the assignment polytope (row-simplex pass, then
/// column-capped box pass) until successive iterates move <= 1e-8 or 500 sweeps.
RVector project_assignment(const RVector& v, Index rows, Index cols, ProjectionReport* report = nullptr);

RVector project_block_simplex(const RVector& v, Index blocks, Index block_len);

RVector project(const QpConstraint& constraint, const RVector& v);

/// Largest constraint violation (0 when feasible).
double infeasibility(const QpConstraint& constraint, const RVector& x);

double qp_objective(const QpProblem& problem, const RVector& x);

/// Accelerated projected gradient with monotone restarts. Step 1/L with L
/// estimated by 30 power iterations on the Hessian (doubled on any ascent).
/// Stops once ||x - P(x - grad f(x))|| <= tol or after max_iter iterations and
/// returns the best iterate seen, x0 included.
QpSolution solve_qp(const QpProblem& problem, const RVector& x0, double tol, int max_iter);

/// Swappable solver seam.
using QpSolveFn = std::function<QpSolution(const QpProblem&, const RVector&, double, int)>;

}  // namespace hris

#endif  // HRIS_QP_HPP
