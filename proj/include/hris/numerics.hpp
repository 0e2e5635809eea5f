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

#ifndef HRIS_NUMERICS_HPP
#define HRIS_NUMERICS_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hris {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Raised when a caller breaks an operation's precondition (shape, symmetry, range).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by hermitian_solve when a Cholesky pivot falls below 1e-14 * trace.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kronecker product: block (i, j) of the result is a(i, j) * b.
template <typename DA, typename DB>
Eigen::Matrix<typename Eigen::ScalarBinaryOpTraits<typename DA::Scalar, typename DB::Scalar>::ReturnType,
              Eigen::Dynamic, Eigen::Dynamic>
kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DA::Scalar, typename DB::Scalar>::ReturnType;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b.template cast<Scalar>();
    }
  }
  return out;
}

/// Entrywise (Schur) product.
template <typename DA, typename DB>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> hadamard(const Eigen::MatrixBase<DA>& a,
                                                                           const Eigen::MatrixBase<DB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ContractViolation("hadamard: shape mismatch");
  }
  return a.cwiseProduct(b);
}

/// Square diagonal matrix carrying the diagonal of `a`, zero elsewhere.
template <typename D>
Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, Eigen::Dynamic> dtilde(const Eigen::MatrixBase<D>& a) {
  if (a.rows() != a.cols()) {
    throw ContractViolation("dtilde: matrix must be square");
  }
  return a.diagonal().asDiagonal();
}

/// Column-stacking vectorization.
template <typename D>
Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, 1> vec(const Eigen::MatrixBase<D>& a) {
  Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, Eigen::Dynamic> tmp = a;
  return Eigen::Map<const Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, 1>>(tmp.data(), tmp.size());
}

/// Solves H x = b for Hermitian positive-definite H.
///
/// H is symmetrized as (H + H^H) / 2 before the Cholesky factorization, which
/// absorbs the round-off asymmetry that builds up in products like A Omega A^H.
/// Throws ContractViolation if H is not Hermitian to 1e-10 relative and
/// SingularMatrixError if any pivot is below 1e-14 * trace(H).
CVector hermitian_solve(const CMatrix& h, const CVector& b);

/// Frobenius-relative Hermitian defect ||H - H^H|| / max(||H||, tiny).
double hermitian_defect(const CMatrix& h);

}  // namespace hris

#endif  // HRIS_NUMERICS_HPP
