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

#include <gtest/gtest.h>

#include "fixture.hpp"
#include "hris/numerics.hpp"

namespace hris {
namespace {

using namespace std::complex_literals;

TEST(HermitianSolve, IdentityReturnsRightHandSide) {
  CVector b(2);
  b << 1.0, 1.0i;
  const CVector x = hermitian_solve(CMatrix::Identity(2, 2), b);
  EXPECT_LT((x - b).norm(), 1e-15);
}

TEST(HermitianSolve, Diagonal) {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = 2.0;
  h(1, 1) = 4.0;
  CVector b(2);
  b << 2.0, 4.0;
  const CVector x = hermitian_solve(h, b);
  EXPECT_NEAR(std::abs(x(0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(x(1) - 1.0), 0.0, 1e-15);
}

TEST(HermitianSolve, RandomResidual) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const CMatrix r = test::random_complex(8, 8, s);
    const CMatrix h = r * r.adjoint() + 0.1 * CMatrix::Identity(8, 8);
    const CVector b = test::random_complex(8, 1, 100 + s);
    const CVector x = hermitian_solve(h, b);
    EXPECT_LE((h * x - b).norm() / b.norm(), 1e-10);
  }
}

TEST(HermitianSolve, RejectsNonHermitianAndSingular) {
  CMatrix h = CMatrix::Identity(2, 2);
  h(0, 1) = 1.0;
  EXPECT_THROW(hermitian_solve(h, CVector::Ones(2)), ContractViolation);
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 0) = 1.0;
  EXPECT_THROW(hermitian_solve(s, CVector::Ones(2)), SingularMatrixError);
  EXPECT_THROW(hermitian_solve(CMatrix::Identity(2, 2), CVector::Ones(3)), ContractViolation);
}

TEST(Kron, IdentityAndScalarBlock) {
  EXPECT_EQ(kron(RMatrix::Identity(2, 2), RMatrix::Identity(2, 2)), RMatrix::Identity(4, 4));
  RMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  RMatrix two(1, 1);
  two << 2;
  RMatrix expect(2, 2);
  expect << 0, 2, 2, 0;
  EXPECT_EQ(kron(swap, two), expect);
}

TEST(Kron, MatchesIndexFormula) {
  const CMatrix a = test::random_complex(3, 2, 1);
  const CMatrix b = test::random_complex(2, 2, 2);
  const CMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 6);
  ASSERT_EQ(k.cols(), 4);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 4; ++j) EXPECT_EQ(k(i, j), a(i / 2, j / 2) * b(i % 2, j % 2));
}

TEST(Kron, MixedScalarTypes) {
  RMatrix a(1, 2);
  a << 1.0, 2.0;
  const CMatrix b = test::random_complex(2, 2, 3);
  const CMatrix k = kron(a, b);
  EXPECT_LT((k.block(0, 2, 2, 2) - 2.0 * b).norm(), 1e-15);
}

TEST(Hadamard, OnesZerosAndIndexFormula) {
  const CMatrix a = test::random_complex(3, 4, 4);
  EXPECT_EQ(hadamard(a, CMatrix::Ones(3, 4)), a);
  EXPECT_EQ(hadamard(a, CMatrix::Zero(3, 4)), CMatrix::Zero(3, 4));
  const CMatrix b = test::random_complex(3, 4, 5);
  const CMatrix h = hadamard(a, b);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 4; ++j) EXPECT_EQ(h(i, j), a(i, j) * b(i, j));
  EXPECT_THROW(hadamard(a, CMatrix::Ones(4, 3)), ContractViolation);
}

TEST(Dtilde, DefinitionAndIdempotence) {
  EXPECT_EQ(dtilde(RMatrix::Identity(3, 3)), RMatrix::Identity(3, 3));
  RMatrix a(2, 2);
  a << 1, 2, 3, 4;
  RMatrix expect(2, 2);
  expect << 1, 0, 0, 4;
  EXPECT_EQ(dtilde(a), expect);
  const CMatrix c = test::random_complex(4, 4, 6);
  EXPECT_EQ(dtilde(dtilde(c)), dtilde(c));
  EXPECT_THROW(dtilde(RMatrix::Ones(2, 3)), ContractViolation);
}

TEST(Vec, ColumnStacking) {
  RMatrix col(2, 1);
  col << 1, 2;
  EXPECT_EQ(vec(col), (RVector(2) << 1, 2).finished());
  RMatrix sq(2, 2);
  sq << 1, 3, 2, 4;
  EXPECT_EQ(vec(sq), (RVector(4) << 1, 2, 3, 4).finished());
}

TEST(Vec, TraceIdentity) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const CMatrix a = test::random_complex(3, 3, 10 * s);
    const CMatrix b = test::random_complex(3, 3, 10 * s + 1);
    const CMatrix c = test::random_complex(3, 3, 10 * s + 2);
    const CMatrix d = test::random_complex(3, 3, 10 * s + 3);
    const Complex lhs = (a * b * c * d).trace();
    const CVector vd = vec(CMatrix(d.transpose()));
    const Complex rhs = vd.transpose() * kron(CMatrix(c.transpose()), a) * vec(b);
    EXPECT_LE(std::abs(lhs - rhs) / std::abs(lhs), 1e-10);
  }
}

}  // namespace
}  // namespace hris
