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

#include <algorithm>

#include "fixture.hpp"
#include "hris/numerics.hpp"
#include "hris/subsolvers.hpp"
#include "hris/validation.hpp"

namespace hris {
namespace {

using namespace std::complex_literals;

CVector hand_h() { return effective_channel(test::hand_channels(), test::hand_hris(), test::hand_params()); }
CMatrix hand_omega() { return build_omega(test::hand_channels(), test::hand_hris(), test::hand_params()); }

TEST(Mmse, HandInstance) {
  const SystemParams p = test::hand_params();
  const CVector w = mmse_receiver(test::hand_antennas(), hand_omega(), hand_h(), p);
  CVector expect(2);
  expect << 0.51180954 - 0.29722344i, 0.93721661 + 0.29909668i;
  EXPECT_LT((w - expect).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(mse_analytic(w, test::hand_antennas(), test::hand_channels(), test::hand_hris(), p), 0.0550754112666249,
              1e-12);
}

TEST(Mmse, ScalarHandArithmetic) {
  SystemParams p = test::small_params(1, 1, 1, 2);
  p.p = 1.0;
  p.k_t = p.k_r = 0.0;
  p.sigma_b2 = 1.0;
  const CVector w = mmse_receiver(RMatrix::Ones(1, 1), CMatrix::Ones(1, 1), CVector::Ones(1), p);
  EXPECT_NEAR(std::abs(w(0) - 0.5), 0.0, 1e-15);
}

TEST(Mmse, NoiseFreeLimit) {
  SystemParams p = test::hand_params();
  p.k_t = p.k_r = 0.0;
  p.ideal_phase = true;
  p.p = 1e8;
  const ChannelSet ch = test::hand_channels();
  const HrisConfig c = HrisConfig::passive(2);
  const CVector w = mmse_receiver(test::hand_antennas(), build_omega(ch, c, p), effective_channel(ch, c, p), p);
  EXPECT_LT(mse_analytic(w, test::hand_antennas(), ch, c, p), 1e-6);
}

TEST(Mmse, MatchesNumericMinimizer) {
  const CheckResult r = check_mmse_optimality(20, 3);
  EXPECT_TRUE(r.passed) << r.detail;
  EXPECT_LE(r.measured, 1e-6);
}

TEST(BuildX, DegenerateCases) {
  const CVector w = test::random_complex(3, 1, 1);
  EXPECT_LT((build_x(w, RMatrix::Identity(3, 3), 0.0) - w * w.adjoint()).norm(), 1e-15);
  EXPECT_EQ(build_x(CVector::Zero(2), test::hand_antennas().matrix(3), 0.1), CMatrix::Zero(3, 3));
}

TEST(BuildX, QuadraticPartOfMse) {
  const SystemParams p = test::hand_params();
  const CVector w = test::hand_w();
  const RMatrix a = test::hand_antennas().matrix(3);
  const CMatrix x = build_x(w, a, p.k_r);
  const double quad = (hand_omega() * x).trace().real() + p.sigma_b2_tilde() * w.squaredNorm();
  const double direct = w.dot(mse_quadratic(a, hand_omega(), p) * w).real();
  EXPECT_NEAR(quad, direct, 1e-12);
}

TEST(BuildK, DarkReflectedLink) {
  SystemParams p = test::hand_params();
  ChannelSet ch = test::hand_channels();
  ch.h_r.setZero();
  const KTerms k = build_k(ch, test::hand_hris().phase_idx, p, test::hand_w(), test::hand_antennas());
  EXPECT_EQ(k.k_mat.norm(), 0.0);
  EXPECT_EQ(k.k_vec.norm(), 0.0);
}

// One antenna, one element: the omega-dependent part of the MSE expanded by hand.
TEST(BuildK, ScalarHandExpansion) {
  SystemParams p = test::small_params(1, 1, 1, 2);
  p.p = 0.7;
  p.k_t = 0.1;
  p.k_r = 0.2;
  ChannelSet ch;
  ch.h_d = CVector::Constant(1, 0.3 - 0.4i);
  ch.h_r = CVector::Constant(1, 0.8 + 0.1i);
  ch.g = CMatrix::Constant(1, 1, -0.5 + 0.6i);
  const Complex w = 0.9 - 0.2i;
  const std::vector<int> idx = {3};
  const Complex theta = std::polar(1.0, 3.0 * std::numbers::pi / 2.0);
  const KTerms k = build_k(ch, idx, p, CVector::Constant(1, w), AntennaSelection::first(1));

  const double eps = p.eps_b();
  const double pt = p.p_tilde();
  const double w2 = std::norm(w) * (1.0 + p.k_r * p.k_r);
  const double k_hand = w2 * pt * std::norm(ch.g(0, 0)) * std::norm(ch.h_r(0));
  const Complex gthr = std::conj(ch.g(0, 0)) * theta * ch.h_r(0);
  const double lin_hand = w2 * pt * eps * (std::conj(ch.h_d(0)) * gthr).real() - std::sqrt(p.p) * eps * (std::conj(w) * gthr).real();
  EXPECT_NEAR(k.k_mat(0, 0).real(), k_hand, 1e-14);
  EXPECT_NEAR(std::abs(k.k_mat(0, 0).imag()), 0.0, 1e-15);
  EXPECT_NEAR(k.k_vec(0).real(), lin_hand, 1e-14);
}

TEST(AmpCoeffs, CeilingBehaviour) {
  const SystemParams p = test::hand_params();
  const ChannelSet ch = test::hand_channels();
  const RVector small = RVector::Constant(2, 1e-4);
  const RVector ones = RVector::Ones(2);
  EXPECT_NEAR(mu_ceiling(small, ch, p), 1e4 * mu_ceiling(ones, ch, p), 1e-6 * mu_ceiling(small, ch, p));

  HrisConfig c = test::hand_hris();
  c.mu = mu_ceiling(c.gamma, ch, p);
  EXPECT_NEAR(hris_power(c, ch, p), p.p_hris, 1e-9);

  const KTerms k = build_k(ch, c.phase_idx, p, test::hand_w(), test::hand_antennas());
  EXPECT_THROW(amp_coeffs(RVector::Zero(2), k, RVector::Ones(2), ch, p), ContractViolation);
}

TEST(OptimalMu, Cases) {
  EXPECT_DOUBLE_EQ(optimal_mu(2.0, -3.0, 1.0, 2.0), 1.5);
  EXPECT_DOUBLE_EQ(optimal_mu(2.0, 0.0, 1.0, 5.0), 1.0);
  EXPECT_DOUBLE_EQ(optimal_mu(1.0, -10.0, 1.0, 2.0), 2.0);
}

TEST(OptimalMu, MatchesGrid) {
  const CheckResult r = check_mu_optimality(20, 4);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(PMin, Values) {
  SystemParams p = test::hand_params();
  const ChannelSet ch = test::hand_channels();
  EXPECT_NEAR(p_min(ch, p), 1.5348, 1e-12);

  double lowest = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < 2; ++i) {
    HrisConfig c = HrisConfig::passive(2);
    c.gamma(i) = 1.0;
    c.mu = p.mu_min;
    lowest = std::min(lowest, hris_power(c, ch, p));
  }
  EXPECT_NEAR(p_min(ch, p), lowest, 1e-15);

  const double base = p_min(ch, p);
  p.mu_min *= 2.0;
  EXPECT_NEAR(p_min(ch, p), 4.0 * base, 1e-12);

  SystemParams unit;
  unit.mu_min = 1.0;
  unit.sigma_a2 = 1.0;
  unit.p = 0.0;
  EXPECT_DOUBLE_EQ(p_min(ch, unit), 1.0);
}

TEST(ActiveEligible, MatchesSingleElementPower) {
  SystemParams p = test::hand_params();
  const ChannelSet ch = test::hand_channels();
  RVector single(2);
  for (Index i = 0; i < 2; ++i) {
    HrisConfig c = HrisConfig::passive(2);
    c.gamma(i) = 1.0;
    c.mu = p.mu_min;
    single(i) = hris_power(c, ch, p);
  }
  for (double budget : {0.5 * single.minCoeff(), single.minCoeff(), 0.5 * (single(0) + single(1)),
                        single.maxCoeff(), 10.0 * single.maxCoeff()}) {
    p.p_hris = budget;
    std::vector<Index> expected;
    for (Index i = 0; i < 2; ++i) {
      if (single(i) <= budget * (1.0 + 1e-12)) expected.push_back(i);
    }
    EXPECT_EQ(active_eligible(ch, p), expected) << "budget " << budget;
  }
  p.p_hris = 0.999 * p_min(ch, p);
  EXPECT_TRUE(active_eligible(ch, p).empty());
}

TEST(AuxUpdate, ClosedFormCases) {
  const RVector binary = (RVector(3) << 1, 0, 0).finished();
  EXPECT_LT((aux_update(binary, RVector::Zero(3)) - binary).norm(), 1e-15);

  const RVector prev = (RVector(3) << 0.1, 0.2, 0.3).finished();
  EXPECT_EQ(aux_update(RVector::Constant(3, 0.5), prev), prev);

  const RVector x = (RVector(2) << 0.8, 0.2).finished();
  EXPECT_LT((aux_update(x, RVector::Zero(2)) - (RVector(2) << 1, 0).finished()).norm(), 1e-15);
}

TEST(AuxUpdate, MatchesGrid) {
  const CheckResult r = check_aux_optimality(10, 5);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(ModeQp, UnitGainAndLoads) {
  const SystemParams p = test::hand_params();
  const ChannelSet ch = test::hand_channels();
  const CMatrix x = build_x(test::hand_w(), test::hand_antennas().matrix(3), p.k_r);
  const RVector gxg = gxg_diagonal(ch, x);
  const KTerms k = build_k(ch, test::hand_hris().phase_idx, p, test::hand_w(), test::hand_antennas());
  const ModeQp q1 = build_mode_qp(1.0, k, gxg, ch, p);
  EXPECT_LT((q1.e1 - CMatrix(p.sigma_a2 * gxg.cast<Complex>().asDiagonal())).norm(), 1e-15);
  EXPECT_EQ(q1.e.norm(), 0.0);
  const ModeQp q2 = build_mode_qp(2.5, k, gxg, ch, p);
  for (Index i = 0; i < 2; ++i) {
    EXPECT_NEAR(q2.e2_diag(i), 6.25 * (p.p_tilde() * std::norm(ch.h_r(i)) + p.sigma_a2), 1e-14);
  }
  EXPECT_LT((gxg - (ch.g * x * ch.g.adjoint()).diagonal().real()).norm(), 1e-14);
}

TEST(AntennaQp, ZeroReceiverAndSingleChain) {
  const SystemParams p = test::hand_params();
  const AntennaQp z = build_antenna_qp(CVector::Zero(2), hand_omega(), hand_h(), p);
  EXPECT_EQ(z.m_mat.norm(), 0.0);
  EXPECT_EQ(z.m_vec.norm(), 0.0);

  const Complex w = 0.6 - 0.3i;
  const AntennaQp one = build_antenna_qp(CVector::Constant(1, w), hand_omega(), hand_h(), p);
  const CMatrix expect = std::norm(w) * (1.0 + p.k_r * p.k_r) * hand_omega();
  EXPECT_LT((one.m_mat - expect).norm(), 1e-14);
  EXPECT_LT((one.m_vec - std::sqrt(p.p) * std::conj(w) * hand_h()).norm(), 1e-14);
}

TEST(PhaseQp, ShapesAndDarkLink) {
  SystemParams p = test::hand_params();
  p.b_bits = 1;
  ChannelSet ch = test::hand_channels();
  HrisConfig c = test::hand_hris();
  c.phase_idx = {0, 1};
  const PhaseQp q = build_phase_qp(ch, c, p, test::hand_w(), test::hand_antennas());
  EXPECT_EQ(q.nt_mat.rows(), 4);
  EXPECT_EQ(q.nt_vec.size(), 4);
  EXPECT_LT((phase_alphabet(1) - (CVector(2) << 1.0, -1.0).finished()).norm(), 1e-15);

  ch.h_r.setZero();
  const PhaseQp dark = build_phase_qp(ch, c, p, test::hand_w(), test::hand_antennas());
  EXPECT_EQ(dark.n_mat.norm(), 0.0);
  EXPECT_EQ(dark.n_vec.norm(), 0.0);
}

TEST(Layouts, ThetaFromZAndSelectFromA) {
  RVector z = RVector::Zero(8);
  z(1) = 1.0;  // element 0 -> index 1
  z(7) = 1.0;  // element 1 -> index 3
  const CVector theta = theta_from_z(z, 2);
  const CVector alphabet = phase_alphabet(2);
  EXPECT_LT(std::abs(theta(0) - alphabet(1)), 1e-15);
  EXPECT_LT(std::abs(theta(1) - alphabet(3)), 1e-15);

  const RVector a = (RVector(6) << 0, 0, 1, 1, 0, 0).finished();
  EXPECT_EQ(select_from_a(a, 2, 3), test::hand_antennas().matrix(3));
}

TEST(Decomposition, AllBuildersReproduceTheMse) {
  for (const auto& r : check_decompositions(20, 6)) {
    EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
    EXPECT_LE(r.measured, 1e-9) << r.name;
  }
}

TEST(Decomposition, SignErrorInKIsCaught) {
  DecompositionBuilders faulty;
  faulty.build_k = [](const ChannelSet& ch, const CVector& theta, const CMatrix& x, const CVector& w,
                      const RMatrix& a, const SystemParams& p) {
    KTerms k = build_k(ch, theta, x, w, a, p);
    k.k_vec = -k.k_vec;
    return k;
  };
  const auto results = check_decompositions(5, 6, faulty);
  const auto k_check = std::find_if(results.begin(), results.end(), [](const auto& r) { return r.name == "decomposition_K_k"; });
  ASSERT_NE(k_check, results.end());
  EXPECT_FALSE(k_check->passed);
}

// The phase-block matrix needs R transposed in the Hadamard product. The
// untransposed form only agrees when h_r h_r^H is real.
TEST(Decomposition, PhaseMatrixNeedsTranspose) {
  const SystemParams p = test::hand_params();
  const ChannelSet ch = test::hand_channels();
  const HrisConfig base = test::hand_hris();
  const CVector w = test::hand_w();
  const AntennaSelection ant = test::hand_antennas();
  const PhaseQp q = build_phase_qp(ch, base, p, w, ant);

  const RVector omega = (RVector(2) << base.mu, 1.0).finished();
  const CMatrix y = ch.g * build_x(w, ant.matrix(3), p.k_r) * ch.g.adjoint();
  const CMatrix lyl = omega.asDiagonal() * y * omega.asDiagonal();
  const double eps2 = p.eps_b() * p.eps_b();
  const CMatrix hh = ch.h_r * ch.h_r.adjoint();
  const CMatrix r = p.p_tilde() * eps2 * hh + p.p_tilde() * (1.0 - eps2) * dtilde(hh);
  const CMatrix untransposed = lyl.cwiseProduct(r);

  std::vector<double> lib_offsets, raw_offsets;
  for (int i0 = 0; i0 < 4; ++i0) {
    for (int i1 = 0; i1 < 4; ++i1) {
      HrisConfig c = base;
      c.phase_idx = {i0, i1};
      const CVector th = phases_from_indices(c.phase_idx, 2);
      const double f = mse_analytic(w, ant, ch, c, p);
      const double lin = 2.0 * th.dot(q.n_vec).real();
      lib_offsets.push_back(f - th.dot(q.n_mat * th).real() - lin);
      raw_offsets.push_back(f - th.dot(untransposed * th).real() - lin);
    }
  }
  const auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
  };
  EXPECT_LE(spread(lib_offsets), 1e-12);
  EXPECT_GT(spread(raw_offsets), 1e-3);
}

}  // namespace
}  // namespace hris
