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

#include <sstream>

#include "fixture.hpp"
#include "hris/channel.hpp"
#include "hris/params.hpp"

namespace hris {
namespace {

TEST(Params, EpsilonB) {
  // Frozen from direct evaluation of sin(pi/2^B)/(pi/2^B).
  EXPECT_NEAR(epsilon_b(1), 0.636619772367581, 1e-14);
  EXPECT_NEAR(epsilon_b(2), 0.900316316157106, 1e-14);
  EXPECT_NEAR(epsilon_b(3), 0.974495358404433, 1e-14);
  EXPECT_NEAR(epsilon_b(20), 1.0, 1e-10);
}

TEST(Params, DbmRoundTrip) {
  EXPECT_NEAR(dbm_to_watt(10.0), 0.01, 1e-17);
  EXPECT_NEAR(watt_to_dbm(dbm_to_watt(10.0)), 10.0, 1e-12);
  EXPECT_NEAR(dbm_to_watt(-80.0), 1e-11, 1e-25);
}

TEST(Params, ValidationListsEveryViolation) {
  SystemParams p;
  p.l = 40;
  p.k_t = -1.0;
  const auto v = p.violations();
  EXPECT_GE(v.size(), 2u);
  EXPECT_THROW(p.validate(), ContractViolation);
  EXPECT_TRUE(SystemParams{}.violations().empty());
}

TEST(PathLoss, Values) {
  EXPECT_NEAR(path_loss(1.0, 2.2, -30.0), 1e-3, 1e-18);
  EXPECT_NEAR(path_loss(10.0, 2.0, 0.0), 0.01, 1e-17);
  // BS-HRIS distance of the default geometry, 59.1608 m.
  const Geometry g;
  EXPECT_NEAR(g.d_rb(), 59.160797831, 1e-8);
  EXPECT_NEAR(path_loss(g.d_rb(), 2.2, -30.0), 1.26335426608696e-07, 1e-20);
  EXPECT_THROW(path_loss(0.0, 2.0, 0.0), ContractViolation);
}

TEST(Rayleigh, ZeroVarianceAndDeterminism) {
  CounterRng r1(7);
  EXPECT_EQ(gen_rayleigh(5, 0.0, r1), CVector::Zero(5));
  CounterRng a(9), b(9);
  EXPECT_EQ(gen_rayleigh(4, 3, 1.0, a), gen_rayleigh(4, 3, 1.0, b));
}

TEST(Rayleigh, UnitVariance) {
  CounterRng rng(11);
  const CVector x = gen_rayleigh(1000000, 1.0, rng);
  const double var = x.squaredNorm() / static_cast<double>(x.size());
  EXPECT_GE(var, 0.99);
  EXPECT_LE(var, 1.01);
}

TEST(Rician, DegenerateAndLosFraction) {
  const CVector los = CVector::Ones(1000000);
  CounterRng a(3), b(3);
  EXPECT_LT((gen_rician(los, 0.0, 2.0, a) - gen_rayleigh(los.size(), 2.0, b)).cwiseAbs().maxCoeff(), 1e-12);

  CounterRng near(4);
  const CVector det = gen_rician(CVector(CVector::Ones(100)), 1.0 - 1e-12, 4.0, near);
  EXPECT_LT((det.cwiseAbs() - RVector::Constant(100, 2.0)).cwiseAbs().maxCoeff(), 1e-4);

  CounterRng rng(5);
  const CVector x = gen_rician(los, 0.75, 1.0, rng);
  const double n = static_cast<double>(x.size());
  const double los_power = std::norm(x.sum() / n);
  const double total = x.squaredNorm() / n;
  EXPECT_NEAR(los_power / total, 0.75, 0.01);

  CounterRng bad(1);
  EXPECT_THROW(gen_rician(los, 1.0, 1.0, bad), ContractViolation);
}

TEST(ChannelSet, ShapesAndDeterminism) {
  const SystemParams p = test::small_params(16, 4, 32, 2);
  const Geometry g;
  const FadingParams f;
  const ChannelSet a = gen_channel_set(g, f, p, 42);
  const ChannelSet b = gen_channel_set(g, f, p, 42);
  EXPECT_EQ(a.h_d.size(), 16);
  EXPECT_EQ(a.h_r.size(), 32);
  EXPECT_EQ(a.g.rows(), 32);
  EXPECT_EQ(a.g.cols(), 16);
  EXPECT_EQ(a.h_d, b.h_d);
  EXPECT_EQ(a.h_r, b.h_r);
  EXPECT_EQ(a.g, b.g);
  EXPECT_NE(gen_channel_set(g, f, p, 43).h_d, a.h_d);
}

TEST(ChannelSet, DirectLinkPower) {
  const SystemParams p = test::small_params(4, 2, 2, 1);
  const Geometry g;
  const FadingParams f;
  double acc = 0.0;
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) acc += gen_channel_set(g, f, p, s).h_d.squaredNorm() / 4.0;
  const double expect = path_loss(g.d_ub(), f.alpha_ub, f.beta0_db);
  EXPECT_NEAR(acc / seeds / expect, 1.0, 0.02);
}

TEST(ChannelSet, ReflectedLinkPowers) {
  const SystemParams p = test::small_params(4, 2, 8, 1);
  const Geometry g;
  const FadingParams f;
  double hr = 0.0, gg = 0.0;
  const int seeds = 4000;
  for (int s = 0; s < seeds; ++s) {
    const ChannelSet ch = gen_channel_set(g, f, p, s);
    hr += ch.h_r.squaredNorm() / 8.0;
    gg += ch.g.squaredNorm() / 32.0;
  }
  EXPECT_NEAR(hr / seeds / path_loss(g.d_ur(), f.alpha_ur, f.beta0_db), 1.0, 0.02);
  EXPECT_NEAR(gg / seeds / path_loss(g.d_rb(), f.alpha_rb, f.beta0_db), 1.0, 0.02);
}

TEST(ChannelSet, KFactorInterpretation) {
  FadingParams f;
  f.rician_factor = 3.0;
  f.interpretation = RicianInterpretation::kKFactor;
  EXPECT_DOUBLE_EQ(f.los_fraction(), 0.75);
  f.interpretation = RicianInterpretation::kFraction;
  EXPECT_THROW(f.validate(), ContractViolation);
}

TEST(ChannelFile, RoundTrip) {
  const SystemParams p = test::small_params(6, 2, 5, 2);
  const ChannelSet a = gen_channel_set(Geometry{}, FadingParams{}, p, 77);
  std::stringstream buf;
  write_channel_file(buf, a);
  const ChannelSet b = read_channel_file(buf);
  EXPECT_EQ(a.h_d, b.h_d);
  EXPECT_EQ(a.h_r, b.h_r);
  EXPECT_EQ(a.g, b.g);
  EXPECT_EQ(b.seed, 77u);

  std::stringstream junk("not a channel file");
  EXPECT_ANY_THROW(read_channel_file(junk));
}

}  // namespace
}  // namespace hris
