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

#include "hris/numerics.hpp"

#include <cmath>
#include <limits>

namespace hris {

double hermitian_defect(const CMatrix& h) {
  const double scale = std::max(h.norm(), std::numeric_limits<double>::min());
  return (h - h.adjoint()).norm() / scale;
}

CVector hermitian_solve(const CMatrix& h, const CVector& b) {
  if (h.rows() != h.cols()) {
    throw ContractViolation("hermitian_solve: matrix must be square");
  }
  if (h.rows() != b.size()) {
    throw ContractViolation("hermitian_solve: dimension mismatch");
  }
  if (hermitian_defect(h) > 1e-10) {
    throw ContractViolation("hermitian_solve: matrix is not Hermitian");
  }
  const CMatrix sym = 0.5 * (h + h.adjoint());
  const double trace = sym.diagonal().real().sum();
  Eigen::LLT<CMatrix> llt(sym);
  if (llt.info() != Eigen::Success || !(trace > 0.0)) {
    throw SingularMatrixError("hermitian_solve: matrix is not positive definite");
  }
  const auto diag = llt.matrixLLT().diagonal().real();
  for (Index i = 0; i < diag.size(); ++i) {
    if (diag(i) * diag(i) < 1e-14 * trace) {
      throw SingularMatrixError("hermitian_solve: numerically singular pivot");
    }
  }
  return llt.solve(b);
}

}  // namespace hris
